from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dualpack.core import (
    ONE,
    ZERO,
    Instance,
    Packing,
    PackingStructureError,
    ParseError,
    Weight,
    parse_instance,
    serialize_instance,
    sub_instance,
    verify_packing,
    weight_sum,
)
from strategies import instances, weights

W = Weight.parse


def test_parse_two_halves():
    inst = parse_instance("2 1\n1/2^1\n1/2^1")
    assert (inst.n, inst.m, inst.s) == (2, 1, 1)
    assert inst.weights == (Weight(1, 1), Weight(1, 1))


def test_parse_three_quarters():
    inst = parse_instance("1 1\n3/2^2")
    assert (inst.n, inst.m, inst.s) == (1, 1, 2)
    assert inst.weights == (Weight(3, 2),)


def test_parse_rejects_heavy_item():
    with pytest.raises(ParseError) as info:
        parse_instance("1 1\n5/2^2")
    assert info.value.lineno == 2


@pytest.mark.parametrize(
    "text, line",
    [
        ("2 1\n1/2^1", None),
        ("1 1\n1/3^1", 2),
        ("1 1\n0/2^1", 2),
        ("1 -1\n1/2^1", 1),
        ("x\n", 1),
        ("1 1\n1/2^1\n1/2^1", None),
    ],
)
def test_parse_errors(text, line):
    with pytest.raises(ParseError) as info:
        parse_instance(text)
    if line is not None:
        assert info.value.lineno == line


def test_comments_and_blank_lines():
    inst = parse_instance("# header\n\n2 1\n# item\n1/2^2\n\n3/2^3\n")
    assert inst.weights == (Weight(1, 2), Weight(3, 3))


def test_canonical_form():
    w = Weight(4, 3)
    assert (w.numerator, w.exponent) == (1, 1)
    assert str(w) == "1/2^1"
    assert Weight(2, 1) == ONE and str(ONE) == "1/2^0"


def test_weight_sums():
    assert weight_sum([W("1/2^1"), W("1/2^2")]) == Weight(3, 2)
    assert weight_sum([]) == ZERO
    assert weight_sum([Weight(3, 2), Weight(3, 2)]) == Weight(3, 1)


def test_coerce_accepts_common_forms():
    assert Weight.coerce("1/4") == Weight(1, 2)
    assert Weight.coerce("0.125") == Weight(1, 3)
    assert Weight.coerce("3/2^3") == Weight(3, 3)
    with pytest.raises(ValueError):
        Weight.coerce("1/3")


def test_verify_exact_fill():
    inst = Instance((Weight(1, 1), Weight(1, 1)), 1)
    v = verify_packing(inst, Packing((0, 0), 1))
    assert v.feasible and v.packed_count == 2


def test_verify_overflow():
    inst = Instance((Weight(3, 2), Weight(1, 1)), 1)
    v = verify_packing(inst, Packing((0, 0), 1))
    assert not v.feasible
    assert [b for b, _ in v.violations] == [0]


def test_verify_with_reject():
    inst = Instance((Weight(3, 2), Weight(1, 1)), 1)
    v = verify_packing(inst, Packing((0, None), 1))
    assert v.feasible and v.packed_count == 1


def test_verify_structure_errors():
    inst = Instance((Weight(1, 1),), 1)
    with pytest.raises(PackingStructureError):
        verify_packing(inst, Packing((0, 0), 1))
    with pytest.raises(PackingStructureError):
        verify_packing(inst, Packing((1,), 1))


def test_sub_instance():
    inst = Instance((Weight(1, 1), Weight(1, 2), Weight(1, 3)), 2)
    assert sub_instance(inst, [2, 0]).weights == (Weight(1, 3), Weight(1, 1))


@given(instances(max_n=10, max_m=5, max_exp=8))
def test_serialize_round_trip(inst):
    assert parse_instance(serialize_instance(inst)) == inst


@given(weights(8), weights(8), weights(8))
def test_addition_laws(a, b, c):
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    assert (a + b).as_fraction() == a.as_fraction() + b.as_fraction()
    assert (a + b) - b == a


@given(weights(8), weights(8))
def test_order_matches_fractions(a, b):
    assert (a < b) == (a.as_fraction() < b.as_fraction())
    assert (a == b) == (a.as_fraction() == b.as_fraction())
    assert (hash(a) == hash(b)) or a != b


@given(weights(8), st.integers(0, 20))
def test_integer_scaling(a, k):
    assert (a * k).as_fraction() == k * a.as_fraction()
    assert Weight.from_fraction(a.as_fraction()) == a


@given(weights(8))
def test_parse_str_round_trip(a):
    assert Weight.parse(str(a)) == a
    assert eval(repr(a), {"Weight": Weight}) == a


def test_non_dyadic_fraction_rejected():
    with pytest.raises(ValueError):
        Weight.from_fraction(Fraction(1, 3))
