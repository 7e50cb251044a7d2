"""Shared hypothesis strategies and tiny independent oracles."""

from __future__ import annotations

import itertools

from hypothesis import strategies as st

from dualpack.core import Instance, Weight


def weights(max_exp: int = 4, lo: int = 1):
    """Item weights ``v/2^e`` in ``(0, 1]``."""
    return st.integers(0, max_exp).flatmap(
        lambda e: st.integers(lo, 1 << e).map(lambda v: Weight(v, e))
    )


def instances(max_n: int = 8, max_m: int = 3, max_exp: int = 4, min_m: int = 0):
    return st.builds(
        lambda ws, m: Instance(tuple(ws), m),
        st.lists(weights(max_exp), max_size=max_n),
        st.integers(min_m, max_m),
    )


def naive_opt(inst: Instance) -> int:
    """Try every assignment of items to bins or rejection."""
    best = 0
    caps = [0] * inst.m
    xs = inst.scaled
    cap = inst.capacity
    for choice in itertools.product(range(-1, inst.m), repeat=inst.n):
        loads = list(caps)
        ok = True
        for x, b in zip(xs, choice):
            if b >= 0:
                loads[b] += x
                if loads[b] > cap:
                    ok = False
                    break
        if ok:
            best = max(best, sum(1 for b in choice if b >= 0))
    return best


def random_weight(rng, s: int, lo=None, hi=None) -> Weight:
    """Uniform weight on the grid ``1/2^s`` within ``[lo, hi]`` (as fractions)."""
    from fractions import Fraction

    unit = 1 << s
    a = 1 if lo is None else max(1, -(-Fraction(lo) * unit // 1))
    b = unit if hi is None else int(Fraction(hi) * unit)
    return Weight(rng.randint(int(a), b), s)


def completion_config(rng, eps: Weight):
    """A packed set of large items and a set of small items within budget.

    Returns ``(inst, initial, small)``: the instance lists the large items
    first, ``initial`` packs exactly those, and ``small`` indexes the rest.
    """
    from dualpack.core import Packing

    m = rng.randint(1, 4)
    s = max(eps.exponent + 2, rng.randint(3, 6))
    unit = 1 << s
    eps_units = eps.scaled(s)
    budget = m * (unit - eps_units)
    small = []
    total_small = 0
    for _ in range(rng.randint(0, 14)):
        x = rng.randint(1, eps_units)
        if total_small + x > budget:
            break
        small.append(x)
        total_small += x
    room = budget - total_small
    loads = [0] * m
    large, bins = [], []
    for _ in range(rng.randint(0, 3 * m)):
        x = rng.randint(eps_units + 1, unit)
        fits = [b for b in range(m) if loads[b] + x <= unit]
        if x > room or not fits:
            continue
        b = rng.choice(fits)
        loads[b] += x
        room -= x
        large.append(x)
        bins.append(b)
    weights = tuple(Weight(x, s) for x in large + small)
    inst = Instance(weights, m)
    initial = Packing(tuple(bins) + (None,) * len(small), m)
    return inst, initial, list(range(len(large), len(weights)))
