import pytest
from hypothesis import given
from hypothesis import strategies as st

from polyfeq.abelian import FinAbGroup
from polyfeq.aichinger import aichinger_system, characterize, find_decomposition, verify_decomposition
from polyfeq.errors import CapacityError
from polyfeq.functions import FunctionTable
from polyfeq.polynomial import is_degree_at_most

from .conftest import tables


def test_identity_on_z2_splits_at_order_one():
    G = FinAbGroup([2])
    f = FunctionTable(G, G, [[0], [1]])
    d = find_decomposition(f, 1)
    assert d is not None and verify_decomposition(f, d)
    assert characterize(f, 1)


def test_square_on_z3_needs_order_two():
    G = FinAbGroup([3])
    sq = FunctionTable.from_callable(G, G, lambda x: x.residues[0] ** 2)
    assert find_decomposition(sq, 1) is None
    assert characterize(sq, 2)


def test_system_shape():
    G = FinAbGroup([3])
    sys = aichinger_system(FunctionTable.zero(G, G), 2)
    assert sys.coeffs.shape == (27, 27)
    assert (sys.coeffs.sum(axis=1) == 3).all()


def test_capacity_limits():
    G = FinAbGroup([2])
    f = FunctionTable.zero(G, G)
    with pytest.raises(CapacityError):
        aichinger_system(f, 4)
    with pytest.raises(CapacityError):
        aichinger_system(FunctionTable.zero(FinAbGroup([12]), G), 3, max_rows=1000)
    with pytest.raises(ValueError):
        aichinger_system(f, -1)


@given(tables(), st.integers(0, 2))
def test_decomposition_exists_iff_degree_bounded(f, m):
    if f.domain.order ** (m + 1) > 2000:
        return
    ok, _ = is_degree_at_most(f, m)
    d = find_decomposition(f, m)
    assert (d is not None) == ok
    if d is not None:
        assert verify_decomposition(f, d)
