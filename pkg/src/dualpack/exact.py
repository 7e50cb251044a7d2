"""Exact solvers: the multiplicity-vector DP and a backtracking oracle.

The DP handles instances with few distinct weights, described by how many
items of each weight there are. The oracle handles any small instance and
is used as ground truth in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from .core import (
    REJECT,
    ONE,
    Instance,
    Packing,
    PreconditionError,
    ResourceGuardError,
    Weight,
)
from .greedy import ffi_order

DEFAULT_MAX_STATES = 10**8
DEFAULT_MAX_ITEMS = 30


@dataclass(frozen=True)
class GroupedInstance:
    """``multiplicities[i]`` items of weight ``weights[i]``, ``m`` bins.

    Weights must be non-decreasing. Equal neighbours are allowed because
    rounded groups can share a maximum; the DP treats them as separate
    classes.
    """

    weights: tuple[Weight, ...]
    multiplicities: tuple[int, ...]
    m: int

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(self.weights))
        object.__setattr__(self, "multiplicities", tuple(self.multiplicities))
        if len(self.weights) != len(self.multiplicities):
            raise ValueError("weights and multiplicities differ in length")
        if any(not (Weight(0) < w <= ONE) for w in self.weights):
            raise ValueError("class weights must lie in (0, 1]")
        if any(a > b for a, b in zip(self.weights, self.weights[1:])):
            raise ValueError("class weights must be non-decreasing")
        if any(c < 0 for c in self.multiplicities) or self.m < 0:
            raise ValueError("multiplicities and m must be non-negative")

    @property
    def k(self) -> int:
        return len(self.weights)

    @property
    def n(self) -> int:
        return sum(self.multiplicities)

    def scaled(self) -> tuple[tuple[int, ...], int]:
        e = max((w.exponent for w in self.weights), default=0)
        return tuple(w.scaled(e) for w in self.weights), 1 << e

    @classmethod
    def from_instance(cls, inst: Instance) -> "GroupedInstance":
        counts: dict[Weight, int] = {}
        for w in inst.weights:
            counts[w] = counts.get(w, 0) + 1
        ws = sorted(counts)
        return cls(tuple(ws), tuple(counts[w] for w in ws), inst.m)


@dataclass(frozen=True)
class DPSolution:
    best_count: int
    bin_contents: tuple[tuple[int, ...], ...]


def _bin_tuples(weights: tuple[int, ...], mults: tuple[int, ...], cap: int) -> list[tuple[int, ...]]:
    k = len(weights)
    out: list[tuple[int, ...]] = []
    cur = [0] * k

    def rec(i: int, room: int) -> None:
        if i == k:
            out.append(tuple(cur))
            return
        top = min(mults[i], room // weights[i])
        for c in range(top + 1):
            cur[i] = c
            rec(i + 1, room - c * weights[i])
        cur[i] = 0

    rec(0, cap)
    return out


def enumerate_bin_tuples(gi: GroupedInstance) -> list[tuple[int, ...]]:
    """All per-class counts that fit in one bin, in lexicographic order.

    >>> from .core import Weight as W
    >>> enumerate_bin_tuples(GroupedInstance((W(3, 3), W(3, 2)), (2, 1), 1))
    [(0, 0), (0, 1), (1, 0), (2, 0)]
    """
    if gi.k < 1:
        raise PreconditionError("need at least one weight class")
    weights, cap = gi.scaled()
    return _bin_tuples(weights, gi.multiplicities, cap)


def state_space_size(gi: GroupedInstance) -> int:
    return math.prod(c + 1 for c in gi.multiplicities) * (gi.m + 1)


@lru_cache(maxsize=512)
def _solve(weights: tuple[int, ...], mults: tuple[int, ...], m: int, cap: int) -> DPSolution:
    tuples = [(t, sum(t)) for t in _bin_tuples(weights, mults, cap)]
    k = len(weights)
    memo: dict[tuple[tuple[int, ...], int], int] = {}

    def upper(state: tuple[int, ...], bins: int) -> int:
        # smallest items first until the total capacity of `bins` runs out
        room = bins * cap
        count = 0
        for w, c in zip(weights, state):
            take = min(c, room // w)
            count += take
            room -= take * w
            if take < c:
                break
        return count

    def best(state: tuple[int, ...], bins: int) -> int:
        total = sum(state)
        if bins == 0 or total == 0:
            return 0
        if bins >= total:
            return total
        key = (state, bins)
        hit = memo.get(key)
        if hit is not None:
            return hit
        ub = upper(state, bins)
        value = -1
        for t, size in tuples:
            if any(t[i] > state[i] for i in range(k)):
                continue
            rest = tuple(state[i] - t[i] for i in range(k))
            v = size + best(rest, bins - 1)
            if v > value:
                value = v
                if value == ub:
                    break
        memo[key] = value
        return value

    state = mults
    top = best(state, m)
    contents = []
    for j in range(m):
        bins = m - j
        target = best(state, bins)
        for t, size in tuples:
            if any(t[i] > state[i] for i in range(k)):
                continue
            rest = tuple(state[i] - t[i] for i in range(k))
            if size + best(rest, bins - 1) == target:
                contents.append(t)
                state = rest
                break
    return DPSolution(top, tuple(contents))


def solve_grouped_dp(gi: GroupedInstance, max_states: int = DEFAULT_MAX_STATES) -> DPSolution:
    """Maximum number of items packable, with one optimal bin layout.

    ``bin_contents[j]`` is the per-class count placed in bin ``j``. Among
    optimal layouts the one returned is canonical: each bin in turn takes the
    lexicographically smallest tuple that still allows an optimum for the
    remaining bins. Independent callers with the same input therefore derive
    the same layout.
    """
    if gi.k < 1:
        raise PreconditionError("need at least one weight class")
    size = state_space_size(gi)
    if size > max_states:
        raise ResourceGuardError(
            f"DP state space {size} exceeds limit {max_states}; "
            "use the brute-force oracle or a larger epsilon"
        )
    weights, cap = gi.scaled()
    return _solve(weights, gi.multiplicities, gi.m, cap)


def expand_solution(gi: GroupedInstance, sol: DPSolution) -> tuple[Instance, Packing]:
    """Materialise a DP layout as an explicit instance and packing.

    Items are listed class by class; within a class they are handed to bins
    in bin order.
    """
    weights = []
    for w, c in zip(gi.weights, gi.multiplicities):
        weights.extend([w] * c)
    assignment: list[Optional[int]] = [REJECT] * len(weights)
    start = 0
    for cls, c in enumerate(gi.multiplicities):
        pos = start
        for b, t in enumerate(sol.bin_contents):
            for _ in range(t[cls]):
                assignment[pos] = b
                pos += 1
        start += c
    return Instance(tuple(weights), gi.m), Packing(tuple(assignment), gi.m)


def pack_all(items: Sequence[int], m: int, cap: int) -> Optional[list[int]]:
    """Bin index per item if all ``items`` fit into ``m`` bins, else ``None``.

    Depth-first search over items in decreasing size. Bins with equal load
    are interchangeable, so only one of them is tried per item; a branch is
    also cut when the remaining items exceed the free space in bins that can
    still take the smallest remaining item. Failed (item, load multiset)
    states are memoised.
    """
    n = len(items)
    if n == 0:
        return []
    if m == 0:
        return None
    order = sorted(range(n), key=lambda i: -items[i])
    ws = [items[i] for i in order]
    if ws[0] > cap:
        return None
    suffix = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] + ws[i]
    if suffix[0] > m * cap:
        return None
    smallest = ws[-1]
    loads = [0] * m
    where = [0] * n
    failed: set = set()

    def rec(i: int) -> bool:
        if i == n:
            return True
        usable = 0
        for load in loads:
            free = cap - load
            if free >= smallest:
                usable += free
        if suffix[i] > usable:
            return False
        key = (i, tuple(sorted(loads)))
        if key in failed:
            return False
        w = ws[i]
        tried = set()
        for b in range(m):
            load = loads[b]
            if load in tried or load + w > cap:
                continue
            tried.add(load)
            loads[b] = load + w
            where[i] = b
            if rec(i + 1):
                return True
            loads[b] = load
        failed.add(key)
        return False

    if not rec(0):
        return None
    out = [0] * n
    for pos, i in enumerate(order):
        out[i] = where[pos]
    return out


def _largest_packable_prefix(
    inst: Instance, indices: Sequence[int], limit: int
) -> tuple[int, list[Optional[int]]]:
    scaled = inst.scaled
    cap = inst.capacity
    order = ffi_order(inst, indices)
    top = 0
    running = 0
    for i in order:
        running += scaled[i]
        if running > limit:
            break
        top += 1
    assignment: list[Optional[int]] = [REJECT] * inst.n
    for count in range(top, -1, -1):
        chosen = order[:count]
        bins = pack_all([scaled[i] for i in chosen], inst.m, cap)
        if bins is not None:
            for i, b in zip(chosen, bins):
                assignment[i] = b
            return count, assignment
    raise AssertionError("the empty prefix always packs")


def brute_force_opt(inst: Instance, max_n: int = DEFAULT_MAX_ITEMS) -> tuple[int, Packing]:
    """Optimum count and a witness packing, by exhaustive search.

    Some optimum always consists of the smallest items, so the search
    scans prefix lengths of the weight-sorted sequence downward and asks
    the backtracking packer whether each prefix fits.
    """
    if inst.n > max_n:
        raise ResourceGuardError(f"brute force limited to {max_n} items, got {inst.n}")
    if inst.m == 0:
        return 0, Packing.empty(inst.n, 0)
    count, assignment = _largest_packable_prefix(inst, range(inst.n), inst.m * inst.capacity)
    return count, Packing(tuple(assignment), inst.m)


def brute_force_lfp(
    inst: Instance,
    indices: Sequence[int],
    budget: Weight,
    max_n: int = DEFAULT_MAX_ITEMS,
) -> tuple[int, Packing]:
    """Largest subset of ``indices`` that packs and weighs at most ``budget``."""
    if len(indices) > max_n:
        raise ResourceGuardError(f"brute force limited to {max_n} items, got {len(indices)}")
    if budget < 0 or inst.m == 0:
        return 0, Packing.empty(inst.n, inst.m)
    s = max(inst.s, budget.exponent)
    limit = budget.scaled(s) >> (s - inst.s)
    count, assignment = _largest_packable_prefix(inst, indices, min(limit, inst.m * inst.capacity))
    return count, Packing(tuple(assignment), inst.m)
