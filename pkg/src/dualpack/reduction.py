"""From binary separation to online dual bin packing.

A binary separation input is a stream of positive integers, ``n1`` of which
are "large" (all larger than every "small" one); an online player guesses
the class of each value on arrival. :func:`reduce_and_run` turns such a
stream into a dual bin packing stream over ``n`` bins, runs any online
packing algorithm on it, and reads a guess off every packing decision.

Constructed weights (``f(y) = 1/16 + 2^-(y+4)``, strictly decreasing)::

    phase 1   n1 items of 1/2 + 1/16
    phase 2   1/2 - f(y_i) for every arriving y_i
    phase 3   1/2 + f(y_i) for every small y_i, in arrival order

A phase-2 item is guessed large exactly when the algorithm puts it into a
bin holding a phase-1 item.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Optional, Sequence

from .core import REJECT, Instance, Packing, ParseError, Weight
from .online import OnlineAlgorithm, OnlineRun

HALF = Weight(1, 1)
DELTA_MIN = Weight(1, 4)
DELTA_MAX = Weight(1, 3)

#: Returned by :func:`entropy_lower_bound` outside ``alpha in [1/2, 1]``.
REGIME_UNMET = None

LARGE = "large"
SMALL = "small"


@dataclass(frozen=True)
class BSPInstance:
    """A binary separation input; values above ``threshold`` are large."""

    n1: int
    values: tuple[int, ...]
    threshold: int

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if any(y < 1 for y in self.values):
            raise ValueError("values must be positive integers")
        large = sum(1 for y in self.values if y > self.threshold)
        if large != self.n1:
            raise ValueError(f"threshold {self.threshold} makes {large} values large, not {self.n1}")

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def n2(self) -> int:
        return self.n - self.n1

    def is_large(self, y: int) -> bool:
        return y > self.threshold

    @classmethod
    def from_values(cls, values: Sequence[int], n1: int) -> "BSPInstance":
        """Derive the threshold from the class sizes; the split must be strict."""
        values = tuple(values)
        if not 0 <= n1 <= len(values):
            raise ValueError("n1 must lie in [0, n]")
        desc = sorted(values, reverse=True)
        if n1 == 0:
            threshold = desc[0] if desc else 0
        else:
            threshold = desc[n1 - 1] - 1
            if n1 < len(desc) and desc[n1] > threshold:
                raise ValueError("large and small values overlap")
        return cls(n1, values, threshold)


def parse_bsp(text: str) -> BSPInstance:
    """Read ``n n1`` then a line of ``n`` positive integers."""
    lines = [
        (no, ln.strip())
        for no, ln in enumerate(text.splitlines(), start=1)
        if ln.strip() and not ln.strip().startswith("#")
    ]
    if not lines:
        raise ParseError("empty input")
    try:
        n, n1 = (int(x) for x in lines[0][1].split())
    except ValueError:
        raise ParseError("header must be 'n n1'", lines[0][0]) from None
    values_line = lines[1] if len(lines) > 1 else (lines[0][0], "")
    try:
        values = [int(x) for x in values_line[1].split()]
    except ValueError:
        raise ParseError("values must be integers", values_line[0]) from None
    if len(values) != n:
        raise ParseError(f"expected {n} values, found {len(values)}", values_line[0])
    if len(lines) > 2:
        raise ParseError("unexpected extra line", lines[2][0])
    try:
        return BSPInstance.from_values(values, n1)
    except ValueError as exc:
        raise ParseError(str(exc), values_line[0]) from None


def serialize_bsp(bsp: BSPInstance) -> str:
    return f"{bsp.n} {bsp.n1}\n{' '.join(map(str, bsp.values))}\n"


def random_bsp(n: int, rng: random.Random, max_value: int | None = None) -> BSPInstance:
    """Random instance with values in ``[1, max_value]``.

    The default range ``min(2**n, 8n)`` (at least 2) keeps weights readable
    while staying within n-bit values.
    """
    if n < 1:
        raise ValueError("need at least one value")
    if max_value is None:
        max_value = max(2, min(2**n, 8 * n))
    n1 = rng.randint(0, n)
    if n1 in (0, n):
        values = [rng.randint(1, max_value) for _ in range(n)]
        threshold = max(values) if n1 == 0 else min(values) - 1
        return BSPInstance(n1, values, threshold)
    threshold = rng.randint(1, max_value - 1)
    small = [rng.randint(1, threshold) for _ in range(n - n1)]
    large = [rng.randint(threshold + 1, max_value) for _ in range(n1)]
    labels = [LARGE] * n1 + [SMALL] * (n - n1)
    rng.shuffle(labels)
    values = [large.pop() if lab == LARGE else small.pop() for lab in labels]
    return BSPInstance(n1, values, threshold)


def f_map(y: int) -> Weight:
    """``1/16 + 2^-(y+4)``: strictly decreasing, values in ``(1/16, 3/32]``."""
    if y < 1:
        raise ValueError(f"f is defined for y >= 1, got {y}")
    return DELTA_MIN + Weight(1, y + 4)


def construct_instance(bsp: BSPInstance) -> tuple[Instance, list[tuple[str, int]]]:
    """The full 2n-item stream and, per item, its phase tag and source index.

    Tags are ``"p1"``, ``"p2"`` and ``"p3"``; the index points into
    ``bsp.values`` (``-1`` for phase 1).
    """
    weights: list[Weight] = []
    tags: list[tuple[str, int]] = []
    for _ in range(bsp.n1):
        weights.append(HALF + DELTA_MIN)
        tags.append(("p1", -1))
    for j, y in enumerate(bsp.values):
        weights.append(HALF - f_map(y))
        tags.append(("p2", j))
    for j, y in enumerate(bsp.values):
        if not bsp.is_large(y):
            weights.append(HALF + f_map(y))
            tags.append(("p3", j))
    return Instance(tuple(weights), bsp.n), tags


def pairing_packing(bsp: BSPInstance) -> Packing:
    """Packing of all 2n constructed items.

    Phase-1 items share bins with the large phase-2 items, each small
    phase-2 item shares a bin with its complement.
    """
    inst, tags = construct_instance(bsp)
    assignment: list[Optional[int]] = [REJECT] * inst.n
    next_p1 = 0
    small_bin = {}
    next_small = bsp.n1
    for pos, (tag, j) in enumerate(tags):
        if tag != "p2":
            continue
        if bsp.is_large(bsp.values[j]):
            assignment[next_p1] = next_p1
            assignment[pos] = next_p1
            next_p1 += 1
        else:
            assignment[pos] = next_small
            small_bin[j] = next_small
            next_small += 1
    for pos, (tag, j) in enumerate(tags):
        if tag == "p3":
            assignment[pos] = small_bin[j]
    return Packing(tuple(assignment), inst.m)


@dataclass(frozen=True)
class ReductionReport:
    n1: int
    n2: int
    p1: int
    l2: int
    s2: int
    p3: int
    g1: int
    g2: int

    @property
    def n(self) -> int:
        return self.n1 + self.n2

    @property
    def mistakes(self) -> int:
        return self.n - self.g1 - self.g2

    @property
    def unpacked_total(self) -> int:
        return self.p1 + self.l2 + self.s2 + self.p3

    def bounds(self) -> tuple[int, int]:
        return accounting_bound(self.p1, self.l2, self.s2, self.p3, self.n1, self.n2)

    def holds(self) -> bool:
        """Correct guesses are at least ``n - 5 * unpacked``."""
        return self.g1 + self.g2 >= self.n - 5 * self.unpacked_total


@dataclass(frozen=True)
class ReductionRun:
    report: ReductionReport
    instance: Instance
    guesses: tuple[str, ...]
    packing: Packing


def reduce_and_run(bsp: BSPInstance, alg: OnlineAlgorithm) -> ReductionRun:
    """Play the separation game through ``alg`` and tally the outcome.

    The algorithm sees the constructed weights one at a time; each phase-2
    guess is fixed from its decision before the next value is considered,
    and the class of the value is revealed only afterwards.
    """
    n = bsp.n
    run = OnlineRun(alg, n, 2 * n)
    p1_bins = set()
    for _ in range(bsp.n1):
        b = run.feed(HALF + DELTA_MIN)
        if b is not REJECT:
            p1_bins.add(b)

    guesses = []
    g1 = g2 = l2 = s2 = 0
    for y in bsp.values:
        b = run.feed(HALF - f_map(y))
        guess = LARGE if b is not REJECT and b in p1_bins else SMALL
        guesses.append(guess)
        truth = LARGE if bsp.is_large(y) else SMALL
        if guess == truth:
            if truth == LARGE:
                g1 += 1
            else:
                g2 += 1
        if b is REJECT:
            if truth == LARGE:
                l2 += 1
            else:
                s2 += 1

    p3 = 0
    for y in bsp.values:
        if not bsp.is_large(y):
            if run.feed(HALF + f_map(y)) is REJECT:
                p3 += 1
    transcript = run.close()

    p1 = bsp.n1 - len(p1_bins)
    report = ReductionReport(bsp.n1, bsp.n2, p1, l2, s2, p3, g1, g2)
    inst, _ = construct_instance(bsp)
    return ReductionRun(report, inst, tuple(guesses), transcript.packing)


def accounting_bound(p1: int, l2: int, s2: int, p3: int, n1: int, n2: int) -> tuple[int, int]:
    """Lower bounds on correct guesses: ``(tight, loose)``, both clamped at 0.

    tight = n1 + n2 - s2 - p1 - 4(p1 + p3) - 2 l2
    loose = n1 + n2 - 5(p1 + l2 + s2 + p3)
    """
    if min(p1, l2, s2, p3, n1, n2) < 0:
        raise ValueError("all counts must be non-negative")
    tight = n1 + n2 - s2 - p1 - 4 * (p1 + p3) - 2 * l2
    loose = n1 + n2 - 5 * (p1 + l2 + s2 + p3)
    return max(0, tight), max(0, loose)


def binary_entropy(p: float) -> float:
    if p in (0, 1):
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def entropy_lower_bound(n: int, r: int) -> Optional[float]:
    """Advice bits needed to make at most ``r`` mistakes on ``n`` values.

    ``(1 - H(alpha)) n`` with ``alpha = (n - r)/n``; :data:`REGIME_UNMET`
    when ``alpha < 1/2``. ``alpha = 1`` is taken by continuity.
    """
    if n <= 0 or not 0 <= r <= n:
        raise ValueError("need n > 0 and 0 <= r <= n")
    alpha = (n - r) / n
    if alpha < 0.5:
        return REGIME_UNMET
    return (1 - binary_entropy(alpha)) * n
