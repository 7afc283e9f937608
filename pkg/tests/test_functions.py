import pytest
from hypothesis import given
from hypothesis import strategies as st

from polyfeq.abelian import FinAbGroup, GroupError, GroupHom, RingZm
from polyfeq.functions import (
    FunctionTable,
    MultiFunctionTable,
    compose_with_hom,
    difference,
    mixed_difference,
    outer_ring_product,
    pointwise_ring_product,
    swap_arguments,
    translate,
)

from .conftest import elements, tables


def test_square_table_and_difference(z5):
    sq = FunctionTable.from_callable(z5, z5, lambda x: x.residues[0] ** 2)
    assert sq.to_list() == [0, 1, 4, 4, 1]
    # Δ_1 x² = 2x + 1
    assert difference(sq, z5(1)).to_list() == [1, 3, 0, 2, 4]
    assert mixed_difference(sq, [z5(1), z5(1)]).to_list() == [2] * 5
    assert mixed_difference(sq, [z5(1), z5(1), z5(0)]).is_zero()


def test_values_are_reduced_and_read_only(z5):
    t = FunctionTable(z5, z5, [[7], [-1], [0], [5], [12]])
    assert t.to_list() == [2, 4, 0, 0, 2]
    with pytest.raises(ValueError):
        t.values[0, 0] = 1


def test_wrong_length_rejected(z5):
    with pytest.raises(GroupError):
        FunctionTable(z5, z5, [[0], [1]])


def test_ring_products():
    R = RingZm(5)
    x = FunctionTable.from_callable(R, R, lambda t: t.residues[0])
    assert pointwise_ring_product(x, x).to_list() == [0, 1, 4, 4, 1]
    o = outer_ring_product(x, x)
    assert isinstance(o, MultiFunctionTable) and o.arity == 2
    assert o.evaluate(R(2), R(3)) == R(1)
    with pytest.raises(GroupError):
        pointwise_ring_product(FunctionTable.zero(FinAbGroup([2]), FinAbGroup([2, 2])), FunctionTable.zero(FinAbGroup([2]), FinAbGroup([2, 2])))


def test_swap_arguments():
    A, B = FinAbGroup([2]), FinAbGroup([3])
    t = MultiFunctionTable((A, B), B, [[i] for i in range(6)])
    s = swap_arguments(t)
    assert s.factors == (B, A)
    for a in A:
        for b in B:
            assert s.evaluate(b, a) == t.evaluate(a, b)


@given(tables(), st.data())
def test_difference_is_translate_minus_self(f, data):
    h = data.draw(elements(f.domain))
    assert difference(f, h) == translate(f, h) - f
    x = data.draw(elements(f.domain))
    assert difference(f, h)(x) == f(x + h) - f(x)


@given(tables(), st.data())
def test_differences_commute(f, data):
    a, b = data.draw(elements(f.domain)), data.draw(elements(f.domain))
    assert mixed_difference(f, [a, b]) == mixed_difference(f, [b, a])


@given(tables(), tables(), st.data())
def test_difference_is_additive(f, g, data):
    if f.domain != g.domain or f.codomain != g.codomain:
        g = FunctionTable.zero(f.domain, f.codomain)
    h = data.draw(elements(f.domain))
    assert difference(f + g, h) == difference(f, h) + difference(g, h)


@given(tables(), st.data())
def test_compose_with_scalar_hom(f, data):
    k = data.draw(st.integers(0, 5))
    G = f.domain
    try:
        c = GroupHom.scalar(G, k)
    except GroupError:
        return
    g = compose_with_hom(f, c)
    x = data.draw(elements(G))
    assert g(x) == f(k * x)


def test_content_hash_distinguishes_codomains(z5):
    a = FunctionTable.zero(z5, z5)
    b = FunctionTable.zero(z5, FinAbGroup([7]))
    assert a.content_hash != b.content_hash
