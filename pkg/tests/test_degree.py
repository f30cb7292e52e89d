import pytest
from hypothesis import given, strategies as st

from kgraphck.degree import Degree, join_all
from kgraphck.errors import DegreeOutOfRange

coords = st.lists(st.integers(min_value=0, max_value=6), min_size=2, max_size=3)
pairs = st.integers(min_value=2, max_value=3).flatmap(
    lambda k: st.tuples(
        st.lists(st.integers(0, 6), min_size=k, max_size=k),
        st.lists(st.integers(0, 6), min_size=k, max_size=k),
    )
)


def test_construction_and_equality():
    assert Degree(1, 0) == Degree((1, 0))
    assert Degree(1, 0) != Degree(0, 1)
    assert hash(Degree(2, 3)) == hash(Degree(2, 3))
    with pytest.raises(ValueError):
        Degree(-1, 0)
    with pytest.raises(ValueError):
        Degree()


def test_arithmetic():
    assert Degree(1, 2) + Degree(3, 0) == Degree(4, 2)
    assert Degree(3, 2) - Degree(1, 2) == Degree(2, 0)
    with pytest.raises(DegreeOutOfRange):
        Degree(1, 0) - Degree(0, 1)


def test_partial_order_is_not_total():
    assert Degree(1, 0) <= Degree(1, 1)
    assert not Degree(1, 0) <= Degree(0, 5)
    assert not Degree(0, 5) <= Degree(1, 0)


def test_below_enumerates_the_box():
    below = list(Degree(2, 1).below())
    assert len(below) == 6
    assert Degree(0, 0) in below and Degree(2, 1) in below


def test_join_all_empty_is_zero():
    assert join_all([], 3) == Degree(0, 0, 0)


@given(pairs)
def test_lattice_laws(pair):
    a, b = Degree(*pair[0]), Degree(*pair[1])
    assert a | b == b | a
    assert a & b == b & a
    assert a & b <= a <= a | b
    assert (a | b) + (a & b) == a + b


@given(pairs)
def test_order_agrees_with_join_meet(pair):
    a, b = Degree(*pair[0]), Degree(*pair[1])
    assert (a <= b) == (a | b == b) == (a & b == a)
