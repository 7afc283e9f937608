import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from polyfeq.abelian import FinAbGroup
from polyfeq.linalg import IntLinearSystem, coset_contains, deduplicate, howell_form, solve, xgcd
from polyfeq.verify import random_system

from .conftest import small_moduli


def test_howell_forms():
    assert howell_form(np.array([[2, 1]]), 4).tolist() == [[2, 1], [0, 2]]
    assert howell_form(np.array([[4, 6], [2, 3]]), 8).tolist() == [[2, 3], [0, 4]]


def test_xgcd():
    g, s, t = xgcd(12, 42)
    assert g == 6 and 12 * s + 42 * t == 6


def test_zero_divisor_system():
    Z4 = FinAbGroup([4])
    cs = solve(IntLinearSystem(np.array([[2]]), np.array([[2]]), Z4))
    assert cs.particular.tolist() == [[1]]
    assert cs.generators.tolist() == [[[2]]]
    assert cs.size() == 2
    assert sorted(x.item() for x in cs) == [1, 3]
    assert solve(IntLinearSystem(np.array([[2]]), np.array([[1]]), Z4)).is_empty


def test_conflicting_duplicate_rows():
    Z5 = FinAbGroup([5])
    sys = IntLinearSystem(np.array([[1, 1], [1, 1]]), np.array([[0], [1]]), Z5)
    assert deduplicate(sys) is None
    assert solve(sys).is_empty


def test_product_value_group():
    G = FinAbGroup([2, 3])
    sys = IntLinearSystem(np.array([[1, 1]]), np.array([[1, 2]]), G)
    cs = solve(sys)
    assert cs.size() == 6
    for x in cs:
        assert sys.satisfied_by(x)


def test_membership_requires_length():
    cs = solve(IntLinearSystem(np.array([[1]]), np.array([[0]]), FinAbGroup([3])))
    with pytest.raises(ValueError):
        coset_contains(cs, [[0], [0]])


def _brute(sys):
    G = sys.value_group
    return {combo for combo in itertools.product(range(G.order), repeat=sys.num_unknowns) if sys.satisfied_by(G.residues[list(combo)])}


@given(st.integers(0, 2**32 - 1))
def test_random_systems_match_enumeration(seed):
    sys = random_system(np.random.default_rng(seed))
    G = sys.value_group
    cs = solve(sys)
    truth = _brute(sys)
    assert cs.size() == len(truth)
    got = {tuple(np.atleast_1d(G.index_of(x)).tolist()) for x in cs}
    assert got == truth
    for combo in itertools.product(range(G.order), repeat=sys.num_unknowns):
        assert coset_contains(cs, G.residues[list(combo)]) == (combo in truth)


@given(small_moduli, st.data())
def test_particular_solution_is_canonical(moduli, data):
    # the same coset written with permuted rows gives the same particular solution
    G = FinAbGroup(moduli)
    rows = data.draw(st.integers(1, 3))
    A = np.array(data.draw(st.lists(st.integers(-6, 6), min_size=rows * 2, max_size=rows * 2))).reshape(rows, 2)
    x = G.residues[data.draw(st.lists(st.integers(0, G.order - 1), min_size=2, max_size=2))]
    b = A @ x
    perm = data.draw(st.permutations(range(rows)))
    a = solve(IntLinearSystem(A, b, G))
    p = solve(IntLinearSystem(A[list(perm)], b[list(perm)], G))
    assert np.array_equal(a.particular, p.particular)
    assert coset_contains(a, x)
