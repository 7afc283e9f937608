import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from polyfeq.abelian import (
    FinAbGroup,
    GroupError,
    GroupHom,
    NotAnAutomorphism,
    RingZm,
    invert_automorphism,
    is_automorphism,
    product_group,
)

from .conftest import elements, groups


def test_enumeration_first_factor_fastest():
    G = FinAbGroup.parse("Z4 x Z2")
    assert G.order == 8
    assert [e.residues for e in G][:5] == [(0, 0), (1, 0), (2, 0), (3, 0), (0, 1)]
    assert G(3, 1).index == 7


def test_parse_is_whitespace_insensitive_and_drops_trivial_factors():
    assert FinAbGroup.parse("Z4xZ2 x  Z1") == FinAbGroup([4, 2])
    with pytest.raises(GroupError):
        FinAbGroup.parse("Z4 x Q2")


def test_trivial_group():
    G = FinAbGroup([1])
    assert G.order == 1 and G.rank == 0
    assert G.add_index.shape == (1, 1)


def test_order_limit():
    with pytest.raises(GroupError):
        FinAbGroup([1001, 1001])


def test_ill_defined_hom_rejected():
    # 1 -> 1 from Z2 to Z4 does not respect 2 = 0
    with pytest.raises(GroupError):
        GroupHom(FinAbGroup([2]), FinAbGroup([4]), [[1]])
    h = GroupHom(FinAbGroup([2]), FinAbGroup([4]), [[2]])
    assert h(FinAbGroup([2])(1)).residues == (2,)


def test_hom_shape_mismatch():
    G = FinAbGroup([5])
    with pytest.raises(GroupError):
        GroupHom(G, G, [[2, 0]])


def test_scalar_automorphisms_of_z5():
    G = FinAbGroup([5])
    for k in range(5):
        assert is_automorphism(GroupHom.scalar(G, k)) == (k != 0)


def test_inverse_of_swap_with_scaling():
    G = FinAbGroup([3, 3])
    a = GroupHom(G, G, [[0, 2], [1, 0]])
    inv = invert_automorphism(a)
    assert a.compose(inv).is_identity() and inv.compose(a).is_identity()


def test_not_an_automorphism():
    G = FinAbGroup([4])
    with pytest.raises(NotAnAutomorphism):
        invert_automorphism(GroupHom.scalar(G, 2))


def test_ring_mul_and_equality_with_additive_group():
    R = RingZm(7)
    assert R.mul(3, 5) == 1
    assert R == FinAbGroup([7])


def test_product_group():
    P = product_group([FinAbGroup([2]), FinAbGroup([3, 2])])
    assert P.moduli == (2, 3, 2)


@given(groups, st.data())
def test_group_axioms(G, data):
    a, b, c = (data.draw(elements(G)) for _ in range(3))
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert a + G.zero() == a
    assert (a + (-a)).is_zero()
    assert G.element(a.index) == a


@given(groups, st.data())
def test_hom_is_additive(G, data):
    m = np.array(data.draw(st.lists(st.integers(-5, 5), min_size=G.rank**2, max_size=G.rank**2))).reshape(G.rank, G.rank)
    try:
        h = GroupHom(G, G, m)
    except GroupError:
        return
    a, b = data.draw(elements(G)), data.draw(elements(G))
    assert h(a + b) == h(a) + h(b)
    assert h.index_map[(a + b).index] == G.add_index[h.index_map[a.index], h.index_map[b.index]]


@given(groups, st.data())
def test_automorphism_inverse_roundtrip(G, data):
    m = np.array(data.draw(st.lists(st.integers(0, 6), min_size=G.rank**2, max_size=G.rank**2))).reshape(G.rank, G.rank)
    try:
        h = GroupHom(G, G, m)
    except GroupError:
        return
    bijective = len(set(h.index_map.tolist())) == G.order
    assert is_automorphism(h) == bijective
    if bijective:
        inv = invert_automorphism(h)
        for e in G:
            assert inv(h(e)) == e
