import numpy as np
import pytest

from polyfeq.abelian import FinAbGroup, GroupError, GroupHom, RingZm
from polyfeq.equations import (
    Clause,
    LinearArg,
    LinearFunctionalEquation,
    Term,
    Unknown,
    build_ghurye_olkin,
    build_gffe,
    build_knw,
    build_lsd,
    build_cube_witness,
    build_wilson,
    check_hypotheses,
    instantiate,
    normalize_leading_homs,
    primitive_root_of_unity,
    reduction_step,
    satisfies,
    solve_equation,
    tables_from_vector,
    vector_from_tables,
)
from polyfeq.errors import CapacityError, HypothesisViolation, NotNormalized
from polyfeq.functions import FunctionTable, compose_with_hom
from polyfeq.polynomial import degree


def scalars(G, *ks):
    return [GroupHom.scalar(G, k) for k in ks]


def test_gffe_on_z3_instantiates_one_row_per_pair():
    sys = instantiate(build_gffe(FinAbGroup([3]), [0, 1, -2, 1]))
    assert sys.num_rows == 9 and sys.num_unknowns == 3


def test_go_homogeneous_frozen_solutions(z5):
    r = solve_equation(build_ghurye_olkin(scalars(z5, 1, 2)))
    assert r.coset.generators[:, :, 0].tolist() == [[1, 1, 1, 1, 1, 4, 4, 4, 4, 4]]
    assert r.bound_holds and r.hypotheses.satisfied


def test_knw_frozen_generators():
    r = solve_equation(build_knw(13, 3, 3))
    assert r.coset.generators[:, :, 0].tolist() == [
        [1, 0, 0, 1, 3, 6, 10, 2, 8, 2, 10, 6, 3],
        [0, 1, 0, 10, 5, 11, 2, 4, 4, 2, 11, 5, 10],
        [0, 0, 1, 3, 6, 10, 2, 8, 2, 10, 6, 3, 1],
    ]
    assert r.bound_holds and r.degrees["f"].max_degree() == 2


def test_knw_validation():
    assert primitive_root_of_unity(13, 3) == 3
    with pytest.raises(GroupError):
        build_knw(13, 3, 4)
    with pytest.raises(GroupError):
        build_knw(12, 3)
    with pytest.raises(GroupError):
        build_knw(13, 5)


def test_cube_witness_is_the_cube():
    eq = build_cube_witness(7)
    r = solve_equation(eq)
    assert r.particular_tables()["f1"].to_list() == [0, 1, 1, 6, 1, 6, 6]
    assert r.coset.rank == 0 and degree(r.particular_tables()["f1"]).degree == 3 == eq.claimed_bound


def test_wilson_and_lsd_bounds(z5):
    ident = GroupHom.identity(z5)
    w = solve_equation(build_wilson([ident, ident], scalars(z5, 1, 2)))
    assert w.bound_holds and w.coset.rank == 6
    lsd = build_lsd([ident, ident], scalars(z5, 1, 2))
    assert lsd.checked_unknowns() == ("P", "Q")
    assert solve_equation(lsd).bound_holds


def test_gffe_with_zero_shift_violates_hypotheses(z5):
    rep = check_hypotheses(build_gffe(z5, [1, 1, -2, 1]))
    assert not rep.satisfied
    assert "not an automorphism" in rep.violation


def test_normalization_moves_beta_into_delta(z5):
    eq = build_wilson(scalars(z5, 2), scalars(z5, 3))
    with pytest.raises(NotNormalized):
        check_hypotheses(eq)
    normed, sub = normalize_leading_homs(eq)
    assert str(normed.terms[0]) == "f1(x + 4*y)"
    r = solve_equation(normed)
    # solutions of the normalized equation pull back to solutions of the original
    for g in r.generator_tables():
        assert satisfies(eq, sub.pullback(g))


def test_reduction_step_on_solutions(z5):
    eq = build_ghurye_olkin(scalars(z5, 1, 2))
    cs = solve_equation(eq).coset
    for x in cs:
        tables = tables_from_vector(eq, x)
        assert satisfies(eq, tables)
        for h in z5:
            red = reduction_step(eq, h)
            assert [u.name for u in red.equation.unknowns] == ["delta2_f2"]
            assert satisfies(red.equation, red.lift(tables))


def test_reduction_refuses_violated_hypotheses():
    G = FinAbGroup([4])
    eq = build_ghurye_olkin(scalars(G, 1, 3))  # 3 - 1 = 2 is not invertible mod 4
    with pytest.raises(HypothesisViolation):
        reduction_step(eq, G(1))


def test_vector_table_roundtrip(z5):
    eq = build_ghurye_olkin(scalars(z5, 1, 2))
    v = np.arange(10).reshape(10, 1) % 5
    assert np.array_equal(vector_from_tables(eq, tables_from_vector(eq, v)), v)


def test_capacity_error():
    G = FinAbGroup([100])
    with pytest.raises(CapacityError):
        instantiate(build_gffe(G, [0, 1, -1]), max_rows=100)


def test_validation_errors(z5):
    u = Unknown("f", z5, z5)
    ident = GroupHom.identity(z5)
    with pytest.raises(GroupError):
        LinearFunctionalEquation((u,), (Clause((("x", z5),), (Term(1, "g", LinearArg.of(("x", ident))),)),))
    with pytest.raises(GroupError):
        LinearFunctionalEquation((u,), (Clause((("x", z5),), (Term(1, "f", LinearArg.of(("y", ident))),)),))


def test_go_with_polynomial_rhs():
    R = RingZm(5)
    x = FunctionTable.from_callable(R, R, lambda t: t.residues[0])
    one = FunctionTable.constant(R, R, 1)
    eq = build_ghurye_olkin(scalars(R, 1, 2), p_pairs=[(x, one)], q_pairs=[(one, x)])
    assert eq.claimed_bound == 1 + 0 + 2
    r = solve_equation(eq)
    assert r.solvable and r.bound_holds


def test_known_table_above_declared_cap_rejected():
    R = RingZm(5)
    sq = FunctionTable.from_callable(R, R, lambda t: t.residues[0] ** 2)
    with pytest.raises(GroupError):
        build_ghurye_olkin(scalars(R, 1), p_pairs=[(sq, sq)], r=1)


def test_solutions_closed_under_automorphism_of_argument(z5):
    # f solves Jensen-type GFFE, so does f∘(mult by 2)
    eq = build_gffe(z5, [0, 1, -2, 1])
    r = solve_equation(eq)
    for g in r.generator_tables():
        assert satisfies(eq, {"f": compose_with_hom(g["f"], GroupHom.scalar(z5, 2))})
