"""Exact dyadic weights, instances, packings and feasibility checks.

Every weight is a dyadic rational ``v / 2**e``. Keeping the denominator a
power of two means sums and comparisons are exact integer operations, and the
bit size of a weight is simply its exponent in lowest terms.

>>> w = Weight.parse("3/2^2")
>>> w, w.numerator, w.exponent
(Weight(3, 2), 3, 2)
>>> weight_sum([Weight(1, 1), Weight(1, 2)])
Weight(3, 2)
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, total_ordering
from typing import Iterable, Optional, Sequence

#: Marker for a rejected item in a packing assignment.
REJECT = None


class ParseError(ValueError):
    """Malformed instance text; ``lineno`` is 1-based."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class PackingStructureError(ValueError):
    """A packing whose shape does not match its instance."""


class PreconditionError(ValueError):
    """An operation was called outside of its documented domain."""


class ResourceGuardError(RuntimeError):
    """A search or table would exceed its configured size limit."""


def _trailing_zeros(x: int) -> int:
    return (x & -x).bit_length() - 1


@total_ordering
class Weight:
    """A dyadic rational ``numerator / 2**exponent`` kept in lowest terms.

    Item weights are positive, but intermediate quantities such as a
    remaining budget may be zero or negative, so the numerator is signed.
    """

    __slots__ = ("numerator", "exponent")

    def __init__(self, numerator: int, exponent: int = 0):
        if exponent < 0:
            raise ValueError("exponent must be non-negative")
        if numerator == 0:
            exponent = 0
        elif exponent:
            tz = min(_trailing_zeros(numerator), exponent)
            numerator >>= tz
            exponent -= tz
        object.__setattr__(self, "numerator", numerator)
        object.__setattr__(self, "exponent", exponent)

    def __setattr__(self, name, value):
        raise AttributeError("Weight is immutable")

    @classmethod
    def from_fraction(cls, value: Fraction | int) -> "Weight":
        value = Fraction(value)
        den = value.denominator
        if den & (den - 1):
            raise ValueError(f"{value} is not a dyadic rational")
        return cls(value.numerator, den.bit_length() - 1)

    @classmethod
    def parse(cls, text: str) -> "Weight":
        """Parse the strict ``v/2^e`` file syntax."""
        m = re.fullmatch(r"\s*(\d+)\s*/\s*2\s*\^\s*(\d+)\s*", text)
        if m is None:
            raise ValueError(f"expected 'v/2^e', got {text!r}")
        return cls(int(m.group(1)), int(m.group(2)))

    @classmethod
    def coerce(cls, text: str) -> "Weight":
        """Lenient parsing for user input: ``v/2^e``, ``a/b`` or a decimal."""
        try:
            return cls.parse(text)
        except ValueError:
            pass
        try:
            frac = Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot read {text!r} as a dyadic number") from exc
        return cls.from_fraction(frac)

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.exponent)

    def scaled(self, exponent: int) -> int:
        """Integer numerator of this weight over ``2**exponent``."""
        if exponent < self.exponent:
            raise ValueError(f"{self} is not representable at exponent {exponent}")
        return self.numerator << (exponent - self.exponent)

    def _align(self, other: "Weight") -> tuple[int, int, int]:
        e = max(self.exponent, other.exponent)
        return (
            self.numerator << (e - self.exponent),
            other.numerator << (e - other.exponent),
            e,
        )

    def __add__(self, other):
        if isinstance(other, int):
            other = Weight(other)
        if not isinstance(other, Weight):
            return NotImplemented
        a, b, e = self._align(other)
        return Weight(a + b, e)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            other = Weight(other)
        if not isinstance(other, Weight):
            return NotImplemented
        a, b, e = self._align(other)
        return Weight(a - b, e)

    def __rsub__(self, other):
        if isinstance(other, int):
            return Weight(other) - self
        return NotImplemented

    def __neg__(self):
        return Weight(-self.numerator, self.exponent)

    def __mul__(self, other):
        if isinstance(other, int):
            return Weight(self.numerator * other, self.exponent)
        if isinstance(other, Weight):
            return Weight(self.numerator * other.numerator, self.exponent + other.exponent)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, Weight):
            return self.numerator == other.numerator and self.exponent == other.exponent
        if isinstance(other, (int, Fraction)):
            return self.as_fraction() == other
        return NotImplemented

    def __lt__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.as_fraction() < other
        if not isinstance(other, Weight):
            return NotImplemented
        a, b, _ = self._align(other)
        return a < b

    def __hash__(self):
        return hash((self.numerator, self.exponent))

    def __bool__(self):
        return self.numerator != 0

    def __str__(self):
        return f"{self.numerator}/2^{self.exponent}"

    def __repr__(self):
        return f"Weight({self.numerator}, {self.exponent})"

    def __reduce__(self):
        return (Weight, (self.numerator, self.exponent))


ZERO = Weight(0)
ONE = Weight(1)


def weight_sum(ws: Iterable[Weight]) -> Weight:
    """Exact total of ``ws``; the empty sum is zero."""
    ws = list(ws)
    if not ws:
        return ZERO
    e = max(w.exponent for w in ws)
    return Weight(sum(w.numerator << (e - w.exponent) for w in ws), e)


def is_item_weight(w: Weight) -> bool:
    return ZERO < w <= ONE


@dataclass(frozen=True)
class Instance:
    """Items in arrival order plus ``m`` unit-capacity bins."""

    weights: tuple[Weight, ...]
    m: int

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(self.weights))
        if self.m < 0:
            raise ValueError("bin count must be non-negative")
        for i, w in enumerate(self.weights):
            if not is_item_weight(w):
                raise ValueError(f"item {i} has weight {w} outside (0, 1]")

    @property
    def n(self) -> int:
        return len(self.weights)

    @cached_property
    def s(self) -> int:
        """Largest canonical exponent over the weights (0 when empty)."""
        return max((w.exponent for w in self.weights), default=0)

    @cached_property
    def scaled(self) -> tuple[int, ...]:
        """Weights as integers over the common denominator ``2**s``."""
        s = self.s
        return tuple(w.scaled(s) for w in self.weights)

    @property
    def capacity(self) -> int:
        """Bin capacity over the common denominator ``2**s``."""
        return 1 << self.s

    def total(self) -> Weight:
        return weight_sum(self.weights)


@dataclass(frozen=True)
class Packing:
    """Per-item bin index (0-based) or :data:`REJECT`."""

    assignment: tuple[Optional[int], ...]
    m: int

    def __post_init__(self):
        object.__setattr__(self, "assignment", tuple(self.assignment))

    @classmethod
    def empty(cls, n: int, m: int) -> "Packing":
        return cls((REJECT,) * n, m)

    @property
    def packed_count(self) -> int:
        return sum(1 for b in self.assignment if b is not REJECT)

    def loads(self, inst: Instance) -> list[Weight]:
        scaled = [0] * self.m
        for w, b in zip(inst.scaled, self.assignment):
            if b is not REJECT:
                scaled[b] += w
        return [Weight(x, inst.s) for x in scaled]

    def bins(self) -> list[list[int]]:
        """Item indices per bin, in increasing index order."""
        out: list[list[int]] = [[] for _ in range(self.m)]
        for i, b in enumerate(self.assignment):
            if b is not REJECT:
                out[b].append(i)
        return out


@dataclass(frozen=True)
class Verification:
    feasible: bool
    packed_count: int
    violations: list[tuple[int, Weight]] = field(default_factory=list)


def verify_packing(inst: Instance, p: Packing) -> Verification:
    """Check both families of packing constraints.

    Each item sits in at most one bin by construction of the assignment, so
    the remaining work is the per-bin capacity check. Structural problems
    (wrong length, bin index out of range) raise instead of reporting
    infeasibility.
    """
    if len(p.assignment) != inst.n:
        raise PackingStructureError(
            f"assignment has {len(p.assignment)} entries for {inst.n} items"
        )
    if p.m != inst.m:
        raise PackingStructureError(f"packing is for {p.m} bins, instance has {inst.m}")
    for i, b in enumerate(p.assignment):
        if b is not REJECT and not (isinstance(b, int) and 0 <= b < inst.m):
            raise PackingStructureError(f"item {i} assigned to invalid bin {b!r}")
    violations = [(j, load) for j, load in enumerate(p.loads(inst)) if load > ONE]
    return Verification(not violations, p.packed_count, violations)


def parse_instance(text: str) -> Instance:
    """Read the line format ``n m`` followed by ``n`` lines of ``v/2^e``.

    >>> inst = parse_instance("2 1\\n1/2^1\\n1/2^1")
    >>> inst.n, inst.m, inst.s
    (2, 1, 1)
    """
    records = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        records.append((lineno, line))
    if not records:
        raise ParseError("empty instance")

    lineno, header = records[0]
    parts = header.split()
    if len(parts) != 2:
        raise ParseError(f"header must be 'n m', got {header!r}", lineno)
    try:
        n, m = int(parts[0]), int(parts[1])
    except ValueError:
        raise ParseError(f"header must hold two integers, got {header!r}", lineno) from None
    if n < 0:
        raise ParseError("item count is negative", lineno)
    if m < 0:
        raise ParseError("bin count is negative", lineno)

    body = records[1:]
    if len(body) != n:
        where = body[n][0] if len(body) > n else (body[-1][0] if body else lineno)
        raise ParseError(f"expected {n} weight lines, found {len(body)}", where)

    weights = []
    for lineno, line in body:
        match = re.fullmatch(r"(\d+)\s*/\s*(\d+)\s*\^\s*(\d+)", line)
        if match is None:
            raise ParseError(f"expected 'v/2^e', got {line!r}", lineno)
        v, base, e = (int(g) for g in match.groups())
        if base == 0:
            raise ParseError("zero denominator", lineno)
        if base != 2:
            raise ParseError(f"denominator base must be 2, got {base}", lineno)
        w = Weight(v, e)
        if not is_item_weight(w):
            raise ParseError(f"weight {line} is outside (0, 1]", lineno)
        weights.append(w)
    return Instance(tuple(weights), m)


def serialize_instance(inst: Instance) -> str:
    lines = [f"{inst.n} {inst.m}"]
    lines.extend(str(w) for w in inst.weights)
    return "\n".join(lines) + "\n"


def sub_instance(inst: Instance, indices: Sequence[int]) -> Instance:
    """The items at ``indices`` (in that order) with the same bin count."""
    return Instance(tuple(inst.weights[i] for i in indices), inst.m)
