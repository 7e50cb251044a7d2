import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dualpack.core import (
    Instance,
    PreconditionError,
    ResourceGuardError,
    Weight,
    sub_instance,
    verify_packing,
)
from dualpack.exact import (
    GroupedInstance,
    brute_force_lfp,
    brute_force_opt,
    enumerate_bin_tuples,
    expand_solution,
    pack_all,
    _solve,
    solve_grouped_dp,
)
from strategies import instances, naive_opt, weights

W = Weight.parse


def gi_of(ws, mults, m):
    return GroupedInstance(tuple(W(w) for w in ws), tuple(mults), m)


def test_tuples_single_half():
    assert enumerate_bin_tuples(gi_of(["1/2^1"], [3], 1)) == [(0,), (1,), (2,)]


def test_tuples_two_classes():
    got = enumerate_bin_tuples(gi_of(["3/2^3", "3/2^2"], [2, 1], 1))
    assert sorted(got) == [(0, 0), (0, 1), (1, 0), (2, 0)]


def test_tuples_unit_weight():
    assert enumerate_bin_tuples(gi_of(["1/2^0"], [5], 1)) == [(0,), (1,)]


def test_tuples_need_a_class():
    with pytest.raises(PreconditionError):
        enumerate_bin_tuples(GroupedInstance((), (), 1))


def test_dp_examples():
    sol = solve_grouped_dp(gi_of(["3/2^3", "3/2^2"], [3, 2], 2))
    assert sol.best_count == 3
    assert sorted(sol.bin_contents) == [(0, 1), (2, 0)]
    assert solve_grouped_dp(gi_of(["1/2^1"], [4], 2)).best_count == 4
    assert solve_grouped_dp(gi_of(["1/2^1", "3/2^2"], [4, 1], 0)).best_count == 0


def test_dp_guard():
    gi = gi_of(["1/2^3", "1/2^2", "3/2^3"], [30, 30, 30], 5)
    with pytest.raises(ResourceGuardError):
        solve_grouped_dp(gi, max_states=1000)


def test_brute_force_examples():
    inst = Instance(tuple(W(t) for t in ["3/2^3"] * 3 + ["3/2^2"] * 2), 2)
    count, p = brute_force_opt(inst)
    assert count == 3 and verify_packing(inst, p).packed_count == 3
    assert brute_force_opt(Instance((Weight(1),) * 5, 3))[0] == 3
    assert brute_force_opt(Instance((), 3))[0] == 0


def test_brute_force_guard():
    with pytest.raises(ResourceGuardError):
        brute_force_opt(Instance((Weight(1, 5),) * 31, 2))


def test_pack_all_basics():
    assert pack_all([], 0, 8) == []
    assert pack_all([5], 0, 8) is None
    assert pack_all([5, 3, 4, 4], 2, 8) is not None
    assert pack_all([5, 5, 5], 2, 8) is None


@settings(max_examples=150)
@given(instances(max_n=6, max_m=3, max_exp=3))
def test_brute_force_matches_exhaustive_assignment(inst):
    count, p = brute_force_opt(inst)
    assert count == naive_opt(inst)
    v = verify_packing(inst, p)
    assert v.feasible and v.packed_count == count


@st.composite
def grouped(draw, max_k=3, max_mult=4, max_m=3):
    k = draw(st.integers(1, max_k))
    ws = sorted(draw(st.lists(weights(4), min_size=k, max_size=k)))
    mults = draw(st.lists(st.integers(0, max_mult), min_size=k, max_size=k))
    return GroupedInstance(tuple(ws), tuple(mults), draw(st.integers(0, max_m)))


@settings(max_examples=150)
@given(grouped())
def test_dp_matches_brute_force(gi):
    sol = solve_grouped_dp(gi)
    inst, packing = expand_solution(gi, sol)
    assert sol.best_count == brute_force_opt(inst)[0]
    v = verify_packing(inst, packing)
    assert v.feasible and v.packed_count == sol.best_count
    assert len(sol.bin_contents) == gi.m


@given(grouped())
def test_dp_monotone_in_bins_and_items(gi):
    base = solve_grouped_dp(gi).best_count
    more_bins = GroupedInstance(gi.weights, gi.multiplicities, gi.m + 1)
    assert solve_grouped_dp(more_bins).best_count >= base
    bumped = (gi.multiplicities[0] + 1,) + gi.multiplicities[1:]
    more_items = GroupedInstance(gi.weights, bumped, gi.m)
    assert solve_grouped_dp(more_items).best_count >= base


@given(grouped())
def test_dp_layout_is_canonical(gi):
    first = solve_grouped_dp(gi)
    _solve.cache_clear()
    second = solve_grouped_dp(gi)
    assert first == second
    # every bin takes the lexicographically smallest tuple that still
    # leaves an optimum for the bins after it
    tuples = enumerate_bin_tuples(gi) if gi.k else []
    state = gi.multiplicities
    for j, chosen in enumerate(first.bin_contents):
        rest_bins = gi.m - j - 1
        target = solve_grouped_dp(GroupedInstance(gi.weights, state, gi.m - j)).best_count
        for t in tuples:
            if t >= chosen:
                break
            if any(a > b for a, b in zip(t, state)):
                continue
            rest = tuple(b - a for a, b in zip(t, state))
            sub = solve_grouped_dp(GroupedInstance(gi.weights, rest, rest_bins)).best_count
            assert sum(t) + sub < target
        state = tuple(b - a for a, b in zip(chosen, state))


@settings(max_examples=100)
@given(instances(max_n=6, max_m=2, max_exp=3), weights(2))
def test_lfp_oracle(inst, budget):
    budget = budget * 2
    count, p = brute_force_lfp(inst, range(inst.n), budget)
    v = verify_packing(inst, p)
    assert v.feasible and v.packed_count == count
    chosen = [i for i, b in enumerate(p.assignment) if b is not None]
    assert sum((inst.weights[i] for i in chosen), Weight(0)) <= budget
    best = 0
    for r in range(inst.n + 1):
        for subset in itertools.combinations(range(inst.n), r):
            sub = sub_instance(inst, subset)
            if sub.total() <= budget and naive_opt(sub) == r:
                best = r
    assert count == best


def test_lfp_negative_budget():
    inst = Instance((Weight(1, 2),), 1)
    assert brute_force_lfp(inst, [0], Weight(-1, 3))[0] == 0
