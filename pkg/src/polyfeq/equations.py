"""Linear functional equations over finite abelian groups, the named instances, and their degree bounds.

An equation is a list of clauses.  Each clause quantifies over some variables and
states ``Σ λ·u(A·vars) = rhs`` where ``u`` ranges over unknown functions, every
argument is a sum of homomorphic images of the variables, and ``rhs`` is a known
table (or zero).  Instantiating every assignment of the variables turns the
clauses into one integer linear system over the table entries of the unknowns.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

import numpy as np

from .abelian import FinAbGroup, GroupError, GroupHom, RingZm, invert_automorphism, is_automorphism
from .errors import CapacityError, HypothesisViolation, NotAnAutomorphism, NotNormalized
from .functions import FunctionTable, MultiFunctionTable, compose_with_hom, difference, outer_ring_product
from .linalg import IntLinearSystem, ModuleCoset, solve
from .polynomial import Degree, DegreeReport, degree

DEFAULT_MAX_ROWS = 10**6
# dense coefficient matrix entries
DEFAULT_MAX_CELLS = 5 * 10**7


@dataclass(frozen=True)
class Unknown:
    name: str
    domain: FinAbGroup
    codomain: FinAbGroup


@dataclass(frozen=True)
class LinearArg:
    """``Σ hom_v(v)`` over named variables; a zero hom still counts as a mention of its variable."""

    parts: tuple[tuple[str, GroupHom], ...]

    @classmethod
    def of(cls, *parts: tuple[str, GroupHom]) -> "LinearArg":
        return cls(tuple(parts))

    def variables(self) -> list[str]:
        return [v for v, _ in self.parts]

    def hom_for(self, var: str) -> GroupHom | None:
        homs = [h for v, h in self.parts if v == var]
        if not homs:
            return None
        out = homs[0]
        for h in homs[1:]:
            out = out + h
        return out

    def mentions(self, var: str) -> bool:
        return any(v == var for v, _ in self.parts)

    def precompose_target(self, c: GroupHom) -> "LinearArg":
        """Argument ``c(arg)``."""
        return LinearArg(tuple((v, c.compose(h)) for v, h in self.parts))

    def __str__(self):
        out = []
        for v, h in self.parts:
            k = h.scalar_value()
            if h.is_identity():
                out.append(v)
            elif k is not None:
                out.append(f"{k}*{v}")
            else:
                out.append(f"{h.matrix.tolist()}({v})")
        return " + ".join(out)


@dataclass(frozen=True)
class Term:
    coefficient: int
    unknown: str
    argument: LinearArg

    def __str__(self):
        c = "" if self.coefficient == 1 else ("-" if self.coefficient == -1 else f"{self.coefficient}*")
        return f"{c}{self.unknown}({self.argument})"


@dataclass(frozen=True)
class Clause:
    variables: tuple[tuple[str, FinAbGroup], ...]
    terms: tuple[Term, ...]
    rhs: MultiFunctionTable | None = None

    @property
    def num_assignments(self) -> int:
        return int(np.prod([G.order for _, G in self.variables])) if self.variables else 1

    def variable_group(self, name: str) -> FinAbGroup:
        for v, G in self.variables:
            if v == name:
                return G
        raise GroupError(f"variable {name!r} is not quantified in this clause")

    def is_homogeneous(self) -> bool:
        return self.rhs is None or self.rhs.is_zero()

    def __str__(self):
        vars_ = " ".join(v for v, _ in self.variables)
        lhs = " + ".join(str(t) for t in self.terms) or "0"
        rhs = "0" if self.rhs is None else "<table>"
        return f"forall {vars_} . {lhs} = {rhs}"


@dataclass(frozen=True)
class LinearFunctionalEquation:
    unknowns: tuple[Unknown, ...]
    clauses: tuple[Clause, ...]
    name: str = "equation"
    claimed_bound: int | None = None
    bounded_unknowns: tuple[str, ...] | None = None

    def __post_init__(self):
        names = [u.name for u in self.unknowns]
        if len(set(names)) != len(names):
            raise GroupError(f"duplicate unknown names in {names}")
        if not self.unknowns:
            raise GroupError("an equation needs at least one unknown")
        H = self.value_group
        by_name = {u.name: u for u in self.unknowns}
        for u in self.unknowns:
            if u.codomain != H:
                raise GroupError(f"unknown {u.name} has codomain {u.codomain}, expected {H}")
        for clause in self.clauses:
            groups = dict(clause.variables)
            if len(groups) != len(clause.variables):
                raise GroupError("duplicate variable names in a clause")
            for t in clause.terms:
                if t.unknown not in by_name:
                    raise GroupError(f"term refers to undeclared unknown {t.unknown!r}")
                target = by_name[t.unknown].domain
                for v, h in t.argument.parts:
                    if v not in groups:
                        raise GroupError(f"variable {v!r} is not quantified")
                    if h.domain != groups[v] or h.codomain != target:
                        raise GroupError(f"hom {h} does not map {groups[v]} into {target} in term {t}")
            if clause.rhs is not None:
                if clause.rhs.factors != tuple(G for _, G in clause.variables) or clause.rhs.codomain != H:
                    raise GroupError("right-hand side table does not match the clause variables and value group")
        if self.bounded_unknowns is not None:
            for n in self.bounded_unknowns:
                if n not in by_name:
                    raise GroupError(f"bound refers to undeclared unknown {n!r}")

    # single-clause views
    @property
    def variables(self):
        return self.clauses[0].variables

    @property
    def terms(self):
        return self.clauses[0].terms

    @property
    def rhs(self):
        return self.clauses[0].rhs

    @property
    def value_group(self) -> FinAbGroup:
        return self.unknowns[0].codomain

    def unknown(self, name: str) -> Unknown:
        for u in self.unknowns:
            if u.name == name:
                return u
        raise KeyError(name)

    def offsets(self) -> dict[str, int]:
        out, pos = {}, 0
        for u in self.unknowns:
            out[u.name] = pos
            pos += u.domain.order
        return out

    @property
    def num_slots(self) -> int:
        return sum(u.domain.order for u in self.unknowns)

    def is_homogeneous(self) -> bool:
        return all(c.is_homogeneous() for c in self.clauses)

    def checked_unknowns(self) -> tuple[str, ...]:
        return self.bounded_unknowns if self.bounded_unknowns is not None else tuple(u.name for u in self.unknowns)

    def __str__(self):
        return "; ".join(str(c) for c in self.clauses)


# ---------------------------------------------------------------------------
# instantiation and evaluation


def _assignment_indices(clause: Clause) -> dict[str, np.ndarray]:
    total = clause.num_assignments
    idx = np.arange(total, dtype=np.int64)
    out, stride = {}, 1
    for v, G in clause.variables:
        out[v] = (idx // stride) % G.order
        stride *= G.order
    return out


def _argument_index(term: Term, target: FinAbGroup, clause: Clause, assign: dict[str, np.ndarray]) -> np.ndarray:
    res = np.zeros((clause.num_assignments, target.rank), dtype=np.int64)
    for v, h in term.argument.parts:
        G = clause.variable_group(v)
        res += G.residues[assign[v]] @ h.matrix.T
    out = target.index_of(res)
    return np.broadcast_to(np.asarray(out, dtype=np.int64), (clause.num_assignments,))


def instantiate(
    eq: LinearFunctionalEquation, max_rows: int = DEFAULT_MAX_ROWS, max_cells: int = DEFAULT_MAX_CELLS
) -> IntLinearSystem:
    """One row per clause assignment, one unknown per table entry (rows are deduplicated by the solver)."""
    rows = sum(c.num_assignments for c in eq.clauses)
    if rows > max_rows:
        raise CapacityError(f"{eq.name} instantiates to {rows} rows, above the limit {max_rows}")
    if rows * eq.num_slots > max_cells:
        raise CapacityError(f"{eq.name} needs a {rows}x{eq.num_slots} matrix, above {max_cells} entries")
    H = eq.value_group
    offsets = eq.offsets()
    coeffs = np.zeros((rows, eq.num_slots), dtype=np.int64)
    rhs = np.zeros((rows, H.rank), dtype=np.int64)
    start = 0
    for clause in eq.clauses:
        n = clause.num_assignments
        assign = _assignment_indices(clause)
        row_ids = np.arange(start, start + n)
        for t in clause.terms:
            target = eq.unknown(t.unknown).domain
            cols = offsets[t.unknown] + _argument_index(t, target, clause, assign)
            np.add.at(coeffs, (row_ids, cols), t.coefficient)
        if clause.rhs is not None:
            rhs[start : start + n] = clause.rhs.values
        start += n
    return IntLinearSystem(coeffs, rhs, H)


def tables_from_vector(eq: LinearFunctionalEquation, vec: np.ndarray) -> dict[str, FunctionTable]:
    out = {}
    for u, off in zip(eq.unknowns, eq.offsets().values()):
        out[u.name] = FunctionTable(u.domain, u.codomain, vec[off : off + u.domain.order])
    return out


def vector_from_tables(eq: LinearFunctionalEquation, tables: Mapping[str, FunctionTable]) -> np.ndarray:
    return np.concatenate([tables[u.name].values for u in eq.unknowns], axis=0)


def satisfies(eq: LinearFunctionalEquation, tables: Mapping[str, FunctionTable]) -> bool:
    """Evaluate every clause at every assignment directly from the tables."""
    H = eq.value_group
    for clause in eq.clauses:
        assign = _assignment_indices(clause)
        acc = np.zeros((clause.num_assignments, H.rank), dtype=np.int64)
        for t in clause.terms:
            table = tables[t.unknown]
            acc += t.coefficient * table.values[_argument_index(t, table.domain, clause, assign)]
        if clause.rhs is not None:
            acc -= clause.rhs.values
        if H.reduce(acc).any():
            return False
    return True


# ---------------------------------------------------------------------------
# hypotheses


@dataclass(frozen=True)
class TermVerdict:
    term: int
    unknown: str
    hom: GroupHom
    automorphism: bool


@dataclass(frozen=True)
class PairVerdict:
    first: int
    second: int
    difference_automorphism: bool


@dataclass(frozen=True)
class HypothesisReport:
    terms: tuple[TermVerdict, ...]
    pairs: tuple[PairVerdict, ...]
    satisfied: bool
    violation: str | None = None


def _split_terms(eq: LinearFunctionalEquation) -> tuple[str, str, list[int], list[int]]:
    """Names of (x, y), indices of terms mentioning y, and of the remaining one-variable terms."""
    clause = eq.clauses[0]
    if len(clause.variables) != 2:
        raise NotNormalized(f"{eq.name}: hypotheses are stated for two quantified variables, found {len(clause.variables)}")
    (x, _), (y, _) = clause.variables
    two, one = [], []
    for i, t in enumerate(clause.terms):
        # terms in one variable alone are separated right-hand-side functions
        (two if t.argument.mentions(y) and t.argument.mentions(x) else one).append(i)
    return x, y, two, one


def go_homs(eq: LinearFunctionalEquation) -> list[tuple[int, GroupHom]]:
    """``(term index, c_i)`` for every term ``f_i(x + c_i(y))``; raises unless normalized."""
    x, y, two, _ = _split_terms(eq)
    out = []
    for i in two:
        t = eq.clauses[0].terms[i]
        bx = t.argument.hom_for(x)
        if not bx.is_identity():
            raise NotNormalized(f"{eq.name}: term {t} is not of the form u(x + c(y)); apply normalize_leading_homs")
        out.append((i, t.argument.hom_for(y)))
    return out


def check_hypotheses(eq: LinearFunctionalEquation) -> HypothesisReport:
    """Every ``c_i`` and every ``c_i - c_j`` (``i < j``) must be an automorphism."""
    homs = go_homs(eq)
    terms = tuple(
        TermVerdict(i, eq.clauses[0].terms[i].unknown, c, is_automorphism(c)) for i, c in homs
    )
    pairs = tuple(
        PairVerdict(i, j, is_automorphism(ci - cj))
        for a, (i, ci) in enumerate(homs)
        for j, cj in homs[a + 1 :]
    )
    violation = None
    for tv in terms:
        if not tv.automorphism:
            violation = f"term {tv.term} ({eq.clauses[0].terms[tv.term]}): c is not an automorphism"
            break
    if violation is None:
        for pv in pairs:
            if not pv.difference_automorphism:
                violation = f"terms {pv.first} and {pv.second}: c_i - c_j is not an automorphism"
                break
    return HypothesisReport(terms, pairs, violation is None, violation)


# ---------------------------------------------------------------------------
# normalization (substituting f_i = g_i ∘ β_i^{-1})


@dataclass(frozen=True)
class Substitution:
    """Per-unknown automorphisms ``β``: normalized unknown ``g = f ∘ β``."""

    betas: Mapping[str, GroupHom]

    def pushforward(self, tables: Mapping[str, FunctionTable]) -> dict[str, FunctionTable]:
        return {n: compose_with_hom(t, self.betas[n]) if n in self.betas else t for n, t in tables.items()}

    def pullback(self, tables: Mapping[str, FunctionTable]) -> dict[str, FunctionTable]:
        return {
            n: compose_with_hom(t, invert_automorphism(self.betas[n])) if n in self.betas else t
            for n, t in tables.items()
        }


def normalize_leading_homs(eq: LinearFunctionalEquation) -> tuple[LinearFunctionalEquation, Substitution]:
    """Rewrite ``f_i(β_i(x) + δ_i(y))`` as ``g_i(x + (β_i^{-1}∘δ_i)(y))`` with ``g_i = f_i ∘ β_i``."""
    x, y, two, _ = _split_terms(eq)
    betas: dict[str, GroupHom] = {}
    for i in two:
        t = eq.clauses[0].terms[i]
        b = t.argument.hom_for(x)
        if t.unknown in betas and betas[t.unknown] != b:
            raise NotNormalized(f"{eq.name}: unknown {t.unknown} appears with two different x-homs")
        betas[t.unknown] = b
    inverses = {}
    for n, b in betas.items():
        if not is_automorphism(b):
            raise NotAnAutomorphism(f"{eq.name}: the x-hom of {n} is not an automorphism")
        inverses[n] = invert_automorphism(b)
    clauses = []
    for clause in eq.clauses:
        terms = tuple(
            replace(t, argument=t.argument.precompose_target(inverses[t.unknown])) if t.unknown in inverses else t
            for t in clause.terms
        )
        clauses.append(replace(clause, terms=terms))
    return replace(eq, clauses=tuple(clauses)), Substitution(betas)


# ---------------------------------------------------------------------------
# the reduction operator Δ_{(h, -c_1^{-1}(h))}


@dataclass(frozen=True)
class ReducedEquation:
    """The reduced equation and, per new unknown, the old unknown and the increment it is differenced by."""

    equation: LinearFunctionalEquation
    sources: tuple[tuple[str, str, object], ...]

    def lift(self, tables: Mapping[str, FunctionTable]) -> dict[str, FunctionTable]:
        return {new: difference(tables[old], k) for new, old, k in self.sources}


def reduction_step(eq: LinearFunctionalEquation, h) -> ReducedEquation:
    """Apply ``F(x, y) -> F(x + h, y - c_1^{-1}(h)) - F(x, y)`` to ``Σ λ_i f_i(x + c_i(y)) = 0``.

    Term i becomes ``λ_i (Δ_{k_i} f_i)(x + c_i(y))`` with ``k_i = (1 - c_i∘c_1^{-1})(h)``;
    the first term drops out.
    """
    if len(eq.clauses) != 1 or not eq.is_homogeneous():
        raise GroupError(f"{eq.name}: reduction needs a single homogeneous clause")
    homs = go_homs(eq)
    clause = eq.clauses[0]
    if len(homs) != len(clause.terms):
        raise NotNormalized(f"{eq.name}: every term must have the form u(x + c(y))")
    if len(homs) < 2:
        raise GroupError(f"{eq.name}: reduction needs at least two terms")
    report = check_hypotheses(eq)
    if not report.satisfied:
        raise HypothesisViolation(report.violation)
    (x, Gx), (y, _) = clause.variables
    c1_inv = invert_automorphism(homs[0][1])
    ident = GroupHom.identity(Gx)
    new_terms, unknowns, sources = [], [], []
    for i, c in homs[1:]:
        t = clause.terms[i]
        k = (ident - c.compose(c1_inv))(h)
        name = f"delta{i + 1}_{t.unknown}"
        old = eq.unknown(t.unknown)
        unknowns.append(Unknown(name, old.domain, old.codomain))
        sources.append((name, t.unknown, k))
        new_terms.append(Term(t.coefficient, name, t.argument))
    reduced = LinearFunctionalEquation(
        tuple(unknowns),
        (Clause(clause.variables, tuple(new_terms), None),),
        name=f"{eq.name}/reduced",
        claimed_bound=None if eq.claimed_bound is None else eq.claimed_bound - 1,
    )
    return ReducedEquation(reduced, tuple(sources))


# ---------------------------------------------------------------------------
# solving with degree certification


@dataclass(frozen=True)
class UnknownDegrees:
    particular: DegreeReport
    generators: tuple[DegreeReport, ...]

    def max_degree(self) -> int | Degree:
        reports = (self.particular,) + self.generators
        if any(r.degree is Degree.NOT_POLYNOMIAL for r in reports):
            return Degree.NOT_POLYNOMIAL
        finite = [r.degree for r in reports if isinstance(r.degree, int)]
        return max(finite) if finite else Degree.MINUS_INFINITY


@dataclass(frozen=True)
class SolutionReport:
    equation: LinearFunctionalEquation = field(repr=False)
    coset: ModuleCoset = field(repr=False)
    degree_bound_claimed: int | None
    degrees: Mapping[str, UnknownDegrees]
    bound_holds: bool
    hypotheses: HypothesisReport | None = None

    @property
    def solvable(self) -> bool:
        return not self.coset.is_empty

    def particular_tables(self) -> dict[str, FunctionTable] | None:
        if self.coset.is_empty:
            return None
        return tables_from_vector(self.equation, self.coset.particular)

    def generator_tables(self) -> list[dict[str, FunctionTable]]:
        return [tables_from_vector(self.equation, g) for g in self.coset.generators]


def solve_equation(
    eq: LinearFunctionalEquation,
    claimed_bound: int | None = None,
    max_rows: int = DEFAULT_MAX_ROWS,
    check: bool = True,
) -> SolutionReport:
    """Solve exactly and take the degree of every solution component.

    ``bound_holds`` refers to the unknowns in ``eq.checked_unknowns()``; it is
    vacuously true when no bound is claimed.
    """
    bound = eq.claimed_bound if claimed_bound is None else claimed_bound
    cs = solve(instantiate(eq, max_rows=max_rows))
    degrees: dict[str, UnknownDegrees] = {}
    checked = set(eq.checked_unknowns())
    if cs.is_empty:
        return SolutionReport(eq, cs, bound, {}, True, _safe_hypotheses(eq) if check else None)
    particular = tables_from_vector(eq, cs.particular)
    gens = [tables_from_vector(eq, g) for g in cs.generators]
    holds = True
    for u in eq.unknowns:
        part = degree(particular[u.name])
        greps = tuple(degree(g[u.name]) for g in gens)
        degrees[u.name] = UnknownDegrees(part, greps)
        if bound is not None and u.name in checked:
            holds = holds and all(r.at_most(bound) for r in (part,) + greps)
    return SolutionReport(eq, cs, bound, degrees, holds, _safe_hypotheses(eq) if check else None)


def _safe_hypotheses(eq: LinearFunctionalEquation) -> HypothesisReport | None:
    """Hypothesis verdicts, normalizing first when possible; ``None`` when they do not apply."""
    try:
        return check_hypotheses(eq)
    except NotNormalized:
        pass
    try:
        normalized, _ = normalize_leading_homs(eq)
        return check_hypotheses(normalized)
    except (NotNormalized, NotAnAutomorphism):
        return None


# ---------------------------------------------------------------------------
# builders


def _xy(G: FinAbGroup, x: str = "x", y: str = "y") -> tuple[tuple[str, FinAbGroup], ...]:
    return ((x, G), (y, G))


def build_ghurye_olkin(
    cs: Sequence[GroupHom],
    codomain: FinAbGroup | None = None,
    p_pairs: Sequence[tuple[FunctionTable, FunctionTable]] = (),
    q_pairs: Sequence[tuple[FunctionTable, FunctionTable]] = (),
    r: int | None = None,
    s: int | None = None,
) -> LinearFunctionalEquation:
    """``Σ_i f_i(x + c_i(y)) = Σ_j p_j(x) a_j(y) + Σ_k q_k(y) b_k(x)``.

    ``q_pairs`` holds ``(q_k, b_k)``.  The claimed bound is ``r + s + n``, or
    ``n - 1`` when every ``p_j`` and ``q_k`` vanishes.
    """
    if not cs:
        raise GroupError("need at least one hom c_i")
    S = cs[0].domain
    for c in cs:
        if c.domain != S or c.codomain != S:
            raise GroupError(f"hom {c} is not an endomorphism of {S}")
    pairs = list(p_pairs) + list(q_pairs)
    if codomain is None:
        codomain = pairs[0][0].codomain if pairs else S
    for t in (t for pair in pairs for t in pair):
        if t.domain != S or t.codomain != codomain:
            raise GroupError(f"known table {t} is not a function {S} -> {codomain}")
    if pairs and not isinstance(codomain, RingZm):
        raise GroupError("products p_j(x) a_j(y) need a ring codomain")
    r = _validated_cap([p for p, _ in p_pairs], r, "p")
    s = _validated_cap([q for q, _ in q_pairs], s, "q")
    homogeneous = all(p.is_zero() for p, _ in p_pairs) and all(q.is_zero() for q, _ in q_pairs)
    rhs = None
    if pairs:
        acc = np.zeros((S.order * S.order, 1), dtype=np.int64)
        for p, a in p_pairs:
            acc += outer_ring_product(p, a).values
        for q, b in q_pairs:
            acc += outer_ring_product(b, q).values
        rhs = MultiFunctionTable((S, S), codomain, acc)
    n = len(cs)
    unknowns = tuple(Unknown(f"f{i + 1}", S, codomain) for i in range(n))
    ident = GroupHom.identity(S)
    terms = tuple(Term(1, u.name, LinearArg.of(("x", ident), ("y", c))) for u, c in zip(unknowns, cs))
    bound = n - 1 if homogeneous else r + s + n
    name = "split_rhs" if n == 1 and not homogeneous else "ghurye_olkin"
    return LinearFunctionalEquation(unknowns, (Clause(_xy(S), terms, rhs),), name=name, claimed_bound=bound)


def _validated_cap(tables: Sequence[FunctionTable], cap: int | None, label: str) -> int:
    degs = [degree(t) for t in tables]
    for t, d in zip(tables, degs):
        if d.degree is Degree.NOT_POLYNOMIAL:
            raise GroupError(f"known table {label} = {t} is not a polynomial function")
    finite = [d.degree for d in degs if isinstance(d.degree, int)]
    actual = max(finite, default=0)
    if cap is None:
        return actual
    if actual > cap:
        raise GroupError(f"known {label}-table has degree {actual}, above the declared cap {cap}")
    return cap


def build_wilson(
    betas: Sequence[GroupHom], deltas: Sequence[GroupHom], codomain: FinAbGroup | None = None
) -> LinearFunctionalEquation:
    """``Σ_i f_i(β_i(x) + δ_i(y)) = a(x) + b(y)`` with claimed bound ``n``."""
    if len(betas) != len(deltas) or not betas:
        raise GroupError("need matching, non-empty lists of betas and deltas")
    S = betas[0].domain
    H = S if codomain is None else codomain
    n = len(betas)
    fs = tuple(Unknown(f"f{i + 1}", S, H) for i in range(n))
    unknowns = fs + (Unknown("a", S, H), Unknown("b", S, H))
    ident = GroupHom.identity(S)
    terms = tuple(Term(1, f.name, LinearArg.of(("x", b), ("y", d))) for f, b, d in zip(fs, betas, deltas))
    terms += (Term(-1, "a", LinearArg.of(("x", ident))), Term(-1, "b", LinearArg.of(("y", ident))))
    return LinearFunctionalEquation(unknowns, (Clause(_xy(S), terms),), name="wilson", claimed_bound=n)


def build_gffe(G: FinAbGroup, coefficients: Sequence[int], codomain: FinAbGroup | None = None) -> LinearFunctionalEquation:
    """``Σ_k a_k f(x + k·h) = 0`` over ``x, h``; claimed bound ``#{k : a_k != 0} - 1``.

    Every term with ``a_k != 0`` keeps ``k·h`` as an explicit hom, including ``k = 0``.
    """
    H = G if codomain is None else codomain
    support = [(k, int(a)) for k, a in enumerate(coefficients) if int(a) != 0]
    if not support:
        raise GroupError("all coefficients are zero")
    ident = GroupHom.identity(G)
    terms = tuple(Term(a, "f", LinearArg.of(("x", ident), ("h", GroupHom.scalar(G, k)))) for k, a in support)
    return LinearFunctionalEquation(
        (Unknown("f", G, H),), (Clause(_xy(G, "x", "h"), terms),), name="gffe", claimed_bound=len(support) - 1
    )


def _proper_divisors(n: int) -> list[int]:
    return [d for d in range(1, n) if n % d == 0]


def primitive_root_of_unity(p: int, N: int) -> int:
    """Smallest primitive N-th root of unity modulo the prime ``p``."""
    if (p - 1) % N:
        raise GroupError(f"Z{p} has no primitive {N}-th root of unity: {N} does not divide {p - 1}")
    for w in range(1, p):
        if _is_primitive_root(w, N, p):
            return w
    raise GroupError(f"no primitive {N}-th root of unity mod {p}")


def _is_primitive_root(w: int, N: int, p: int) -> bool:
    return pow(w, N, p) == 1 and all(pow(w, d, p) != 1 for d in _proper_divisors(N))


def build_knw(p: int, N: int, w: int | None = None) -> LinearFunctionalEquation:
    """``Σ_{k<N} f(z + w^k h) - N f(z) = 0`` on the field ``Z/p``; claimed bound ``N``.

    Finite stand-in for the complex equation: ``w`` is a primitive N-th root of unity
    mod p, and the mean's ``1/N`` is cleared by multiplying through by ``N``.
    """
    from sympy import isprime

    if not isprime(p):
        raise GroupError(f"{p} is not prime")
    if N < 1:
        raise GroupError("N must be positive")
    if N % p == 0:
        raise GroupError(f"N={N} is not a unit mod {p}")
    if w is None:
        w = primitive_root_of_unity(p, N)
    elif not _is_primitive_root(w % p, N, p):
        raise GroupError(f"w={w} is not a primitive {N}-th root of unity mod {p} (w^{N} = {pow(w, N, p)})")
    F = RingZm(p)
    ident = GroupHom.identity(F)
    terms = tuple(
        Term(1, "f", LinearArg.of(("z", ident), ("h", GroupHom.scalar(F, pow(w, k, p))))) for k in range(N)
    )
    terms += (Term(-N, "f", LinearArg.of(("z", ident))),)
    return LinearFunctionalEquation(
        (Unknown("f", F, F),), (Clause(_xy(F, "z", "h"), terms),), name="knw", claimed_bound=N
    )


def build_lsd(
    betas: Sequence[GroupHom], deltas: Sequence[GroupHom], codomain: FinAbGroup | None = None
) -> LinearFunctionalEquation:
    """``Σ f_i(β_i x + δ_i y) = P(x) + Q(y)`` with ``P = Σ f_i∘β_i`` and ``Q = Σ f_i∘δ_i``.

    ``P`` and ``Q`` are extra unknowns tied by two further clauses; the claimed
    bound ``n`` applies to them.
    """
    if len(betas) != len(deltas) or not betas:
        raise GroupError("need matching, non-empty lists of betas and deltas")
    S = betas[0].domain
    H = S if codomain is None else codomain
    n = len(betas)
    fs = tuple(Unknown(f"f{i + 1}", S, H) for i in range(n))
    unknowns = fs + (Unknown("P", S, H), Unknown("Q", S, H))
    ident = GroupHom.identity(S)
    main = tuple(Term(1, f.name, LinearArg.of(("x", b), ("y", d))) for f, b, d in zip(fs, betas, deltas))
    main += (Term(-1, "P", LinearArg.of(("x", ident))), Term(-1, "Q", LinearArg.of(("y", ident))))
    tie_p = (Term(1, "P", LinearArg.of(("x", ident))),) + tuple(
        Term(-1, f.name, LinearArg.of(("x", b))) for f, b in zip(fs, betas)
    )
    tie_q = (Term(1, "Q", LinearArg.of(("y", ident))),) + tuple(
        Term(-1, f.name, LinearArg.of(("y", d))) for f, d in zip(fs, deltas)
    )
    clauses = (Clause(_xy(S), main), Clause((("x", S),), tie_p), Clause((("y", S),), tie_q))
    return LinearFunctionalEquation(unknowns, clauses, name="lsd", claimed_bound=n, bounded_unknowns=("P", "Q"))


def build_cube_witness(p: int = 7) -> LinearFunctionalEquation:
    """``f(x + y) = (x + y)^3`` split as ``3x·y² + 1·y³ + 1·x³ + 3y·x²`` over ``Z/p`` with ``r = s = 1``.

    The unique solution ``f(t) = t³`` has degree 3, so the bound ``r + s + 1`` is attained.
    """
    R = RingZm(p)

    def tab(fn):
        return FunctionTable.from_callable(R, R, lambda t: fn(t.residues[0]))

    p_pairs = [(tab(lambda t: 3 * t), tab(lambda t: t * t)), (tab(lambda t: 1), tab(lambda t: t**3))]
    q_pairs = [(tab(lambda t: 1), tab(lambda t: t**3)), (tab(lambda t: 3 * t), tab(lambda t: t * t))]
    return build_ghurye_olkin([GroupHom.identity(R)], R, p_pairs, q_pairs, r=1, s=1)


__all__ = [
    "Clause",
    "HypothesisReport",
    "LinearArg",
    "LinearFunctionalEquation",
    "ReducedEquation",
    "SolutionReport",
    "Substitution",
    "Term",
    "Unknown",
    "build_ghurye_olkin",
    "build_gffe",
    "build_knw",
    "build_lsd",
    "build_cube_witness",
    "build_wilson",
    "check_hypotheses",
    "instantiate",
    "normalize_leading_homs",
    "reduction_step",
    "satisfies",
    "solve_equation",
]
