"""First Fit, First Fit Increasing and restricted-subsequence First Fit.

All three work on integer-scaled weights (numerators over ``2**s``) so that
the inner loops are plain integer comparisons.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .core import (
    REJECT,
    Instance,
    Packing,
    PreconditionError,
    Weight,
    verify_packing,
)


def ff_place(loads: list[int], w: int, cap: int | Sequence[int]) -> Optional[int]:
    """Put ``w`` into the lowest-index bin with room and return that bin.

    ``cap`` is either one capacity shared by all bins or a per-bin list
    (used when part of each bin is reserved). ``loads`` is updated in place.
    """
    for b, load in enumerate(loads):
        c = cap if isinstance(cap, int) else cap[b]
        if load + w <= c:
            loads[b] = load + w
            return b
    return REJECT


def first_fit_into(
    weights: Sequence[int],
    order: Iterable[int],
    loads: list[int],
    cap: int | Sequence[int],
    assignment: list[Optional[int]],
) -> None:
    """Run First Fit over ``order``, writing decisions into ``assignment``."""
    for i in order:
        assignment[i] = ff_place(loads, weights[i], cap)


def _initial_state(inst: Instance, initial: Packing | None) -> tuple[list, list[int]]:
    if initial is None:
        return [REJECT] * inst.n, [0] * inst.m
    report = verify_packing(inst, initial)
    if not report.feasible:
        raise PreconditionError("initial packing is infeasible")
    loads = [0] * inst.m
    for w, b in zip(inst.scaled, initial.assignment):
        if b is not REJECT:
            loads[b] += w
    return list(initial.assignment), loads


def first_fit(
    inst: Instance,
    initial: Packing | None = None,
    filter_max: Weight | None = None,
) -> Packing:
    """First Fit in arrival order, optionally completing ``initial``.

    Items already placed by ``initial`` stay where they are; items heavier
    than ``filter_max`` are rejected without being offered to any bin.

    >>> from .core import Weight as W
    >>> inst = Instance((W(3, 2), W(1, 1), W(1, 1)), 2)
    >>> first_fit(inst).assignment
    (0, 1, 1)
    """
    assignment, loads = _initial_state(inst, initial)
    scaled = inst.scaled
    order = [
        i
        for i, b in enumerate(assignment)
        if b is REJECT and (filter_max is None or inst.weights[i] <= filter_max)
    ]
    first_fit_into(scaled, order, loads, inst.capacity, assignment)
    return Packing(tuple(assignment), inst.m)


def ffi_order(inst: Instance, indices: Iterable[int] | None = None) -> list[int]:
    """Item indices by increasing weight, ties by original index."""
    if indices is None:
        indices = range(inst.n)
    scaled = inst.scaled
    return sorted(indices, key=lambda i: (scaled[i], i))


def first_fit_increasing(inst: Instance, indices: Iterable[int] | None = None) -> Packing:
    """First Fit over the items sorted by weight.

    With ``indices`` only those items are offered; the rest are rejected.
    The packing is always indexed by original item position.
    """
    assignment: list[Optional[int]] = [REJECT] * inst.n
    loads = [0] * inst.m
    first_fit_into(inst.scaled, ffi_order(inst, indices), loads, inst.capacity, assignment)
    return Packing(tuple(assignment), inst.m)


@dataclass(frozen=True)
class EtaResult:
    """Threshold found by :func:`rsff`; ``eta`` is ``None`` when no candidate works."""

    eta: Optional[Weight]
    packing: Packing


def rsff(inst: Instance) -> EtaResult:
    """Largest input weight ``eta`` such that FF packs every item ``<= eta``.

    Candidates are scanned in decreasing order; feasibility of the restricted
    subsequence is not monotone in ``eta`` in general, so there is no
    bisection.
    """
    candidates = sorted(set(inst.weights), reverse=True)
    for eta in candidates:
        p = first_fit(inst, filter_max=eta)
        if all(b is not REJECT for w, b in zip(inst.weights, p.assignment) if w <= eta):
            return EtaResult(eta, p)
    return EtaResult(None, Packing.empty(inst.n, inst.m))
