import pytest
from hypothesis import given
from hypothesis import strategies as st

from polyfeq.abelian import FinAbGroup, GroupError, GroupHom
from polyfeq.functions import FunctionTable, compose_with_hom, mixed_difference
from polyfeq.polynomial import (
    Degree,
    degree,
    degree_cap,
    degree_submodule_generators,
    degree_system,
    is_degree_at_most,
    mixed_difference_operator,
)
from polyfeq.verify import layered_degree, literal_at_most

from .conftest import tables


def power(G, k):
    return FunctionTable.from_callable(G, G, lambda x: x.residues[0] ** k)


def test_square_on_z5_has_degree_two_with_frozen_witness(z5):
    sq = power(z5, 2)
    ok, w = is_degree_at_most(sq, 1)
    assert not ok
    assert [e.residues[0] for e in w] == [1, 1, 0]
    assert mixed_difference(sq, w[:-1])(w[-1]) != z5.zero()
    assert is_degree_at_most(sq, 2) == (True, None)
    assert degree(sq).degree == 2


def test_cube_on_z7():
    assert degree(power(FinAbGroup([7]), 3)).degree == 3


def test_constant_and_zero(z5):
    assert degree(FunctionTable.constant(z5, z5, 3)).degree == 0
    zero = degree(FunctionTable.zero(z5, z5))
    assert zero.degree is Degree.MINUS_INFINITY and zero.at_most(0)


def test_degree_can_exceed_domain_order():
    # f(0) = 0, f(1) = 1 from Z2 to Z8: differences double each step, 8 = 0 after three
    Z2, Z8 = FinAbGroup([2]), FinAbGroup([8])
    f = FunctionTable(Z2, Z8, [[0], [1]])
    assert degree(f).degree == 3 > Z2.order
    assert degree_cap(Z2, Z8) == 6


def test_indicator_from_z3_to_z2_is_not_polynomial():
    f = FunctionTable(FinAbGroup([3]), FinAbGroup([2]), [[1], [0], [0]])
    rep = degree(f)
    assert rep.degree is Degree.NOT_POLYNOMIAL
    assert not rep.at_most(100)
    assert layered_degree(f) is Degree.NOT_POLYNOMIAL


def test_negative_bound_rejected(z5):
    with pytest.raises(ValueError):
        is_degree_at_most(power(z5, 1), -1)


def test_operator_expansion(z5):
    # Δ_1 Δ_1 = T_2 - 2 T_1 + T_0
    assert mixed_difference_operator(z5, (1, 1)) == {2: 1, 1: -2, 0: 1}


def test_submodule_generators_have_bounded_degree():
    G = FinAbGroup([7])
    for d in range(3):
        gens = degree_submodule_generators(G, G, d)
        assert len(gens) == d + 1  # polynomials of degree <= d over a prime field
        assert all(degree(g).at_most(d) for g in gens)
    assert degree_system(G, G, 0).num_unknowns == 7


@given(tables())
def test_recursive_degree_matches_definition(f):
    if f.codomain.order ** f.domain.order > 10**5:
        return
    assert degree(f).degree == layered_degree(f)


@given(tables(), st.integers(0, 2))
def test_at_most_matches_literal_sweep(f, m):
    if f.domain.order > 6:
        return
    assert is_degree_at_most(f, m)[0] == literal_at_most(f, m)


@given(tables(), st.data())
def test_automorphisms_preserve_degree(f, data):
    G = f.domain
    k = data.draw(st.integers(1, 11))
    try:
        c = GroupHom.scalar(G, k)
    except GroupError:
        return
    if len(set(c.index_map.tolist())) != G.order:
        return
    assert degree(compose_with_hom(f, c)).degree == degree(f).degree


@given(tables(), st.data())
def test_degree_of_sum_is_at_most_max(f, data):
    g = data.draw(tables(f.domain, f.codomain))
    df, dg, ds = degree(f), degree(g), degree(f + g)
    if isinstance(df.degree, int) and isinstance(dg.degree, int):
        assert ds.at_most(max(df.degree, dg.degree))
