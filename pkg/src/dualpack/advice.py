"""Tape advice for online dual bin packing.

An offline oracle that sees the whole stream writes a short bit string; the
online player reads it before the first item and then decides every item
irrevocably on arrival.

Two modes exist. In FF mode the tape carries a threshold ``eta`` and the
player runs First Fit on items of weight at most ``eta``. In PTAS mode the
tape carries the group sizes and rounded weights of the large items; the
player re-derives the canonical DP layout, reserves one slot per rounded
large item and fits small items around the reservations.

Bit layout (MSB first, no padding)::

    mode bit                      0 = FF, 1 = PTAS
    FF:    s bits                 eta numerator over 2**s, mod 2**s
    PTAS:  B_k bits               k
           k x (ceil(log2(n+1)) bits for |L_i|, s bits for w~_i)

with ``B_k = ceil(log2(ceil(1/eps^2) + 2))``. The weight field stores the
numerator modulo ``2**s``, so an all-zero field means weight 1; in FF mode
it means "no threshold" when there is nothing to pack (``m = 0`` or
``n = 0``). The parameters ``n, m, s, eps`` are public and not part of the
tape.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .core import REJECT, Instance, Weight, verify_packing
from .exact import DEFAULT_MAX_ITEMS, brute_force_opt
from .online import (
    SMALL,
    OnlineAlgorithm,
    SimulationError,
    Transcript,
    prefix_consistent,
    replay,
    run_online,
)
from .ptas import (
    check_eps,
    effective_eta,
    group_and_round,
    lfp_budget,
    max_groups,
    ptas_solve,
    reserved_space,
    select_l_prime,
    slot_layout,
    split_small_large,
)

FF_MODE = "FF"
PTAS_MODE = "PTAS"

#: Constant in the budget ``ceil(C (s + log2(n+1)) / eps^2)`` that every tape
#: produced here respects; see :func:`advice_budget`.
BUDGET_CONSTANT = 12


class AdviceDecodeError(ValueError):
    """The bit string cannot be a tape for these parameters."""


class ProtocolError(SimulationError):
    """The stream contradicts the advice the player was given."""


@dataclass(frozen=True)
class AdviceParams:
    n: int
    m: int
    s: int
    eps: Weight

    @classmethod
    def of(cls, inst: Instance, eps: Weight) -> "AdviceParams":
        return cls(inst.n, inst.m, inst.s, eps)

    @property
    def k_bits(self) -> int:
        return max_groups(self.eps).bit_length()

    @property
    def size_bits(self) -> int:
        return self.n.bit_length()


@dataclass(frozen=True)
class AdviceString:
    mode: str
    eta: Optional[Weight] = None
    group_sizes: tuple[int, ...] = ()
    rounded_weights: tuple[Weight, ...] = ()

    @property
    def k(self) -> int:
        return len(self.group_sizes)


def advice_length(params: AdviceParams, mode: str, k: int = 0) -> int:
    """Exact tape length for the given mode and group count."""
    if mode == FF_MODE:
        return 1 + params.s
    return 1 + params.k_bits + k * (params.size_bits + params.s)


def advice_budget(params: AdviceParams) -> int:
    """``ceil(12 x / eps^2)`` with ``x = max(1, s + log2(n+1))``.

    Every tape fits: for ``eps < 1`` the records cost at most
    ``(1/eps^2 + 2)(x + 1) <= 6x/eps^2`` and the mode bit plus the k field at
    most ``4 + 2 log2(1/eps) <= 6/eps^2``.
    """
    x = max(1.0, params.s + math.log2(params.n + 1))
    return math.ceil(BUDGET_CONSTANT * x / params.eps.as_fraction() ** 2)


def build_advice(inst: Instance, eps: Weight) -> AdviceString:
    """What the oracle writes for ``inst``.

    Mirrors :func:`ptas_solve` with ``first_step="rsff"``: a threshold tape
    when the restricted First Fit certificate applies, otherwise the group
    description of the rounded large items (``k = 0`` when no large item
    fits the budget).
    """
    check_eps(eps)
    eta, _, fell_back = effective_eta(inst)
    if eta is None or eta <= eps or fell_back:
        return AdviceString(FF_MODE, eta=eta)
    split = split_small_large(inst, eps)
    l_prime = select_l_prime(inst, split.large, lfp_budget(inst, eps, split))
    if not l_prime:
        return AdviceString(PTAS_MODE)
    spec = group_and_round(inst, l_prime, eps)
    return AdviceString(PTAS_MODE, group_sizes=spec.group_sizes, rounded_weights=spec.rounded_weights)


def _weight_field(w: Weight, s: int) -> int:
    if w.exponent > s:
        raise ValueError(f"{w} needs more than {s} bits")
    return w.scaled(s) % (1 << s)


def _field_weight(v: int, s: int) -> Weight:
    return Weight(v if v else 1 << s, s)


def _bits(value: int, width: int) -> str:
    if width == 0:
        if value:
            raise ValueError(f"{value} does not fit in 0 bits")
        return ""
    if value >> width:
        raise ValueError(f"{value} does not fit in {width} bits")
    return format(value, f"0{width}b")


def encode_advice(a: AdviceString, params: AdviceParams) -> str:
    """Serialise ``a`` as a string of ``'0'``/``'1'`` characters.

    >>> from .core import Weight as W
    >>> encode_advice(AdviceString(FF_MODE, eta=W(3, 3)), AdviceParams(4, 1, 3, W(1, 1)))
    '0011'
    """
    s = params.s
    if a.mode == FF_MODE:
        if a.eta is None:
            return "0" + _bits(0, s)
        return "0" + _bits(_weight_field(a.eta, s), s)
    if a.mode != PTAS_MODE:
        raise ValueError(f"unknown mode {a.mode!r}")
    if a.k > max_groups(params.eps):
        raise ValueError(f"{a.k} groups exceed the limit {max_groups(params.eps)}")
    out = ["1", _bits(a.k, params.k_bits)]
    for size, w in zip(a.group_sizes, a.rounded_weights):
        out.append(_bits(size, params.size_bits))
        out.append(_bits(_weight_field(w, s), s))
    return "".join(out)


class _Reader:
    def __init__(self, bits: str):
        self.bits = bits
        self.pos = 0

    def take(self, width: int) -> int:
        if self.pos + width > len(self.bits):
            raise AdviceDecodeError("advice string is truncated")
        chunk = self.bits[self.pos : self.pos + width]
        self.pos += width
        return int(chunk, 2) if chunk else 0


def decode_advice(bits: str, params: AdviceParams) -> AdviceString:
    if not bits or set(bits) - {"0", "1"}:
        raise AdviceDecodeError("advice must be a non-empty string of 0/1")
    r = _Reader(bits)
    s = params.s
    if r.take(1) == 0:
        v = r.take(s)
        if r.pos != len(bits):
            raise AdviceDecodeError(f"FF advice must be {1 + s} bits, got {len(bits)}")
        if v == 0 and (params.m == 0 or params.n == 0):
            return AdviceString(FF_MODE, eta=None)
        return AdviceString(FF_MODE, eta=_field_weight(v, s))

    k = r.take(params.k_bits)
    if k > max_groups(params.eps):
        raise AdviceDecodeError(f"k = {k} is out of range")
    sizes, weights = [], []
    for _ in range(k):
        size = r.take(params.size_bits)
        w = _field_weight(r.take(s), s)
        if not 1 <= size <= params.n:
            raise AdviceDecodeError(f"group size {size} is out of range")
        if w <= params.eps:
            raise AdviceDecodeError(f"rounded weight {w} is not large")
        if weights and w < weights[-1]:
            raise AdviceDecodeError("rounded weights must be non-decreasing")
        sizes.append(size)
        weights.append(w)
    if r.pos != len(bits):
        raise AdviceDecodeError(f"{len(bits) - r.pos} trailing bits")
    if sum(sizes) > params.n:
        raise AdviceDecodeError("group sizes exceed the item count")
    return AdviceString(PTAS_MODE, group_sizes=tuple(sizes), rounded_weights=tuple(weights))


class AdvicePlayer(OnlineAlgorithm):
    """Online player that reads a tape once and then decides per item."""

    name = "advice"

    def __init__(self, bits: str, params: AdviceParams):
        self.bits = bits
        self.params = params

    def reset(self, m, n):
        super().reset(m, n)
        if (m, n) != (self.params.m, self.params.n):
            raise ProtocolError("stream shape differs from the advice parameters")
        self.advice = decode_advice(self.bits, self.params)
        s = self.params.s
        self.cap = 1 << s
        self.small_loads = [0] * m
        self.small_cap = [self.cap] * m
        self.free_slots: list[list[int]] = []
        if self.advice.mode == PTAS_MODE and self.advice.k and m:
            sol = slot_layout(self.advice.group_sizes, self.advice.rounded_weights, m)
            self.free_slots = [[t[c] for t in sol.bin_contents] for c in range(self.advice.k)]
            reserved = reserved_space(sol, self.advice.rounded_weights, s)
            self.small_cap = [self.cap - r for r in reserved]

    def _first_fit(self, x: int, caps) -> Optional[int]:
        for b in range(self.m):
            if self.small_loads[b] + x <= caps[b]:
                self.small_loads[b] += x
                self.label = SMALL
                return b
        return REJECT

    def decide(self, w):
        if w.exponent > self.params.s:
            raise ProtocolError(f"item {w} exceeds the announced precision")
        x = w.scaled(self.params.s)
        a = self.advice
        if a.mode == FF_MODE:
            if a.eta is None or w > a.eta:
                return REJECT
            return self._first_fit(x, self.small_cap)
        if w <= self.params.eps:
            return self._first_fit(x, self.small_cap)
        for cls, wt in enumerate(a.rounded_weights):
            if wt < w:
                continue
            row = self.free_slots[cls]
            for b in range(self.m):
                if row[b]:
                    row[b] -= 1
                    self.label = cls
                    return b
        return REJECT

    def finish(self):
        left = sum(sum(row) for row in self.free_slots)
        if left:
            raise ProtocolError(f"{left} reserved slots were never filled")


def online_play(inst: Instance, params: AdviceParams, bits: str) -> Transcript:
    """Feed ``inst`` item by item to a fresh :class:`AdvicePlayer`."""
    t = run_online(AdvicePlayer(bits, params), inst)
    t.advice_bits_used = len(bits)
    return t


@dataclass
class SimulationReport:
    mode: str
    k: int
    advice_bits: int
    advice_formula_bits: int
    advice_budget: int
    online_count: int
    offline_ptas_count: int
    opt: Optional[int]
    ratio: Optional[Fraction]
    transcript: Transcript
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def simulate(
    inst: Instance,
    eps: Weight,
    oracle: bool = True,
    max_oracle_n: int = DEFAULT_MAX_ITEMS,
    check_prefixes: bool = True,
) -> SimulationReport:
    """Oracle, tape, decode, online play, and the contract checks around them."""
    params = AdviceParams.of(inst, eps)
    advice = build_advice(inst, eps)
    bits = encode_advice(advice, params)
    failures = []

    decoded = decode_advice(bits, params)
    if decoded != advice:
        failures.append("decode(encode(advice)) differs from the advice")

    try:
        transcript = online_play(inst, params, bits)
    except SimulationError as exc:
        raise SimulationError(f"online play failed: {exc}") from exc

    packing = transcript.packing
    if not verify_packing(inst, packing).feasible:
        failures.append("online packing is infeasible")
    if replay(inst, transcript) != packing:
        failures.append("replaying the transcript gives a different packing")
    if check_prefixes and not prefix_consistent(
        lambda: AdvicePlayer(bits, params), inst, transcript, range(inst.n + 1)
    ):
        failures.append("a decision changed when later items were withheld")

    offline = ptas_solve(inst, eps, first_step="rsff").packing.packed_count
    if transcript.packed_count != offline:
        failures.append(f"online count {transcript.packed_count} != offline count {offline}")

    formula = advice_length(params, advice.mode, advice.k)
    budget = advice_budget(params)
    if len(bits) != formula:
        failures.append(f"tape has {len(bits)} bits, layout says {formula}")
    if len(bits) > budget:
        failures.append(f"tape has {len(bits)} bits, budget is {budget}")

    opt = ratio = None
    if oracle and inst.n <= max_oracle_n:
        opt, _ = brute_force_opt(inst, max_oracle_n)
        if transcript.packed_count:
            ratio = Fraction(opt, transcript.packed_count)

    return SimulationReport(
        mode=advice.mode,
        k=advice.k,
        advice_bits=len(bits),
        advice_formula_bits=formula,
        advice_budget=budget,
        online_count=transcript.packed_count,
        offline_ptas_count=offline,
        opt=opt,
        ratio=ratio,
        transcript=transcript,
        failures=failures,
    )
