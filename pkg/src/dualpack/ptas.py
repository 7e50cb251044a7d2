"""Approximation scheme: small/large split, rounded DP for the large items,
then First Fit of the small items around the reserved space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .core import (
    REJECT,
    ONE,
    ZERO,
    Instance,
    Packing,
    PreconditionError,
    Weight,
    verify_packing,
    weight_sum,
)
from .exact import DEFAULT_MAX_STATES, DPSolution, GroupedInstance, solve_grouped_dp
from .greedy import ff_place, ffi_order, first_fit, first_fit_increasing, rsff


@dataclass(frozen=True)
class SplitResult:
    small: tuple[int, ...]
    large: tuple[int, ...]
    small_weight: Weight


@dataclass(frozen=True)
class GroupSpec:
    group_size: int
    group_sizes: tuple[int, ...]
    rounded_weights: tuple[Weight, ...]
    members: tuple[tuple[int, ...], ...]

    @property
    def k(self) -> int:
        return len(self.group_sizes)


@dataclass(frozen=True)
class PtasResult:
    packing: Packing
    branch: str
    split: SplitResult
    eta: Optional[Weight] = None
    l_prime: tuple[int, ...] = ()
    groups: Optional[GroupSpec] = None
    dp: Optional[DPSolution] = None

    def trace(self) -> dict:
        out = {
            "branch": self.branch,
            "small": len(self.split.small),
            "large": len(self.split.large),
            "l_prime": len(self.l_prime),
        }
        if self.eta is not None:
            out["eta"] = str(self.eta)
        if self.groups is not None:
            out["g"] = self.groups.group_size
            out["k"] = self.groups.k
        return out


def check_eps(eps: Weight) -> None:
    if not (ZERO < eps < ONE):
        raise PreconditionError(f"epsilon must lie in (0, 1), got {eps}")


def max_groups(eps: Weight) -> int:
    """Upper limit on the number of groups: ``ceil(1/eps^2) + 1``."""
    return math.ceil(1 / eps.as_fraction() ** 2) + 1


def split_small_large(inst: Instance, eps: Weight) -> SplitResult:
    """Items of weight at most ``eps`` are small, the rest large."""
    small = tuple(i for i, w in enumerate(inst.weights) if w <= eps)
    large = tuple(i for i, w in enumerate(inst.weights) if w > eps)
    return SplitResult(small, large, weight_sum(inst.weights[i] for i in small))


def lfp_budget(inst: Instance, eps: Weight, split: SplitResult) -> Weight:
    """Weight allowance for large items: ``m(1 - eps) - w(S)``; may be negative."""
    return (ONE - eps) * inst.m - split.small_weight


def select_l_prime(inst: Instance, large: Sequence[int], budget: Weight) -> tuple[int, ...]:
    """Longest run of the lightest large items whose total stays within ``budget``."""
    if budget < 0:
        return ()
    s = max(inst.s, budget.exponent)
    limit = budget.scaled(s) >> (s - inst.s)
    chosen = []
    running = 0
    for i in ffi_order(inst, large):
        running += inst.scaled[i]
        if running > limit:
            break
        chosen.append(i)
    return tuple(chosen)


def group_size_for(ell: int, m: int, eps: Weight) -> int:
    """Number of items per rounding group.

    Normally ``floor(eps*m)``. It is raised to 1 when ``eps*m < 1`` (each
    item is then its own group and no rounding happens), and to
    ``ceil(ell / (ceil(1/eps^2) + 1))`` when the floor would create more
    groups than the advice layout can describe; for the item sets built by
    the scheme that value never exceeds ``ceil(eps*m)``.
    """
    g = int((eps * m).as_fraction())
    cap = max_groups(eps)
    return max(1, g, -(-ell // cap))


def group_and_round(inst: Instance, l_prime: Sequence[int], eps: Weight) -> GroupSpec:
    """Cut the weight-sorted ``l_prime`` into consecutive groups and round up.

    Every group takes the weight of its heaviest member; only the last group
    may be short.
    """
    if not l_prime:
        raise PreconditionError("cannot group an empty item set")
    ordered = ffi_order(inst, l_prime)
    g = group_size_for(len(ordered), inst.m, eps)
    members = tuple(tuple(ordered[j : j + g]) for j in range(0, len(ordered), g))
    return GroupSpec(
        group_size=g,
        group_sizes=tuple(len(grp) for grp in members),
        rounded_weights=tuple(inst.weights[grp[-1]] for grp in members),
        members=members,
    )


def slot_layout(
    group_sizes: Sequence[int],
    rounded_weights: Sequence[Weight],
    m: int,
    max_states: int = DEFAULT_MAX_STATES,
) -> DPSolution:
    """The canonical DP layout of slots for the rounded large items."""
    gi = GroupedInstance(tuple(rounded_weights), tuple(group_sizes), m)
    return solve_grouped_dp(gi, max_states=max_states)


def reserved_space(sol: DPSolution, rounded_weights: Sequence[Weight], s: int) -> list[int]:
    """Per-bin reserved capacity, as integers over ``2**s``."""
    scaled = [w.scaled(s) for w in rounded_weights]
    return [sum(c * w for c, w in zip(t, scaled)) for t in sol.bin_contents]


def _fill_around_reservations(
    inst: Instance, small: Sequence[int], reserved: Sequence[int], assignment: list
) -> None:
    cap = [inst.capacity - r for r in reserved]
    loads = [0] * inst.m
    for i in small:
        assignment[i] = ff_place(loads, inst.scaled[i], cap)


def _rounded_branch(
    inst: Instance,
    eps: Weight,
    split: SplitResult,
    max_states: int,
) -> tuple[list, tuple[int, ...], Optional[GroupSpec], Optional[DPSolution]]:
    assignment: list[Optional[int]] = [REJECT] * inst.n
    l_prime = select_l_prime(inst, split.large, lfp_budget(inst, eps, split))
    spec = sol = None
    reserved = [0] * inst.m
    if l_prime and inst.m > 0:
        spec = group_and_round(inst, l_prime, eps)
        sol = slot_layout(spec.group_sizes, spec.rounded_weights, inst.m, max_states)
        for cls, grp in enumerate(spec.members):
            # slots of a class are filled by the group's lowest-index items
            pool = sorted(grp)
            pos = 0
            for b, t in enumerate(sol.bin_contents):
                for _ in range(t[cls]):
                    assignment[pool[pos]] = b
                    pos += 1
        reserved = reserved_space(sol, spec.rounded_weights, inst.s)
    _fill_around_reservations(inst, split.small, reserved, assignment)
    return assignment, l_prime, spec, sol


def effective_eta(inst: Instance) -> tuple[Optional[Weight], Packing, bool]:
    """RSFF threshold, falling back to the minimum weight when none exists.

    Returns ``(eta, packing, fell_back)``. When even the lightest items do
    not all fit (and there is at least one bin), every item of minimum
    weight is interchangeable and First Fit over them fills each bin with
    as many items as any packing can hold, so that packing is optimal.
    """
    r = rsff(inst)
    if r.eta is None and inst.m > 0 and inst.n > 0:
        eta = min(inst.weights)
        return eta, first_fit(inst, filter_max=eta), True
    return r.eta, r.packing, False


def ptas_solve(
    inst: Instance,
    eps: Weight,
    first_step: str = "ffi",
    max_states: int = DEFAULT_MAX_STATES,
) -> PtasResult:
    """Pack ``inst`` to within a ``1 + O(eps)`` factor of the optimum.

    ``first_step`` selects the certificate tried before the rounded DP:
    ``"ffi"`` runs First Fit Increasing on the small items and returns it if
    it rejects any of them; ``"rsff"`` uses the restricted-subsequence
    threshold instead and returns its packing when the threshold is at most
    ``eps``. The online advice scheme mirrors the ``"rsff"`` variant.
    """
    check_eps(eps)
    split = split_small_large(inst, eps)
    eta = None
    if first_step == "ffi":
        ffi = first_fit_increasing(inst, split.small)
        if ffi.packed_count < len(split.small):
            return PtasResult(ffi, "small-ffi", split)
    elif first_step == "rsff":
        eta, packing, fell_back = effective_eta(inst)
        if eta is None or eta <= eps or fell_back:
            return PtasResult(packing, "rsff-min" if fell_back else "small-rsff", split, eta)
    else:
        raise ValueError(f"unknown first step {first_step!r}")

    assignment, l_prime, spec, sol = _rounded_branch(inst, eps, split, max_states)
    packing = Packing(tuple(assignment), inst.m)
    assert verify_packing(inst, packing).feasible
    return PtasResult(packing, "rounded-dp", split, eta, l_prime, spec, sol)


def ratio_bound(eps: Weight) -> Fraction:
    """Multiplicative guarantee checked for the scheme: ``1 + 4 eps``."""
    return 1 + 4 * eps.as_fraction()
