"""End-to-end verification suites, one per acceptance criterion.

Each suite is deterministic given ``seed`` and returns a :class:`CheckResult`.
``run_suites`` drives them for ``polyfeq verify``.
"""

from __future__ import annotations

import contextlib
import io
import itertools
import tempfile
import time
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Callable

import numpy as np

from . import dsl
from .abelian import FinAbGroup, GroupHom, RingZm
from .aichinger import characterize
from .equations import (
    build_ghurye_olkin,
    build_gffe,
    build_knw,
    build_cube_witness,
    build_wilson,
    reduction_step,
    satisfies,
    solve_equation,
    tables_from_vector,
)
from .errors import TheoremViolation
from .functions import FunctionTable, compose_with_hom, mixed_difference
from .linalg import IntLinearSystem, coset_contains, solve
from .polynomial import Degree, degree, degree_submodule_generators, is_degree_at_most


@dataclass(frozen=True)
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number:2d} {self.name}: {self.detail} ({self.seconds:.2f}s)"


def all_functions(G: FinAbGroup, H: FinAbGroup):
    """Every table ``G -> H``, in lexicographic order of value indices."""
    for combo in itertools.product(range(H.order), repeat=G.order):
        yield FunctionTable(G, H, H.residues[list(combo)])


def random_function(G: FinAbGroup, H: FinAbGroup, rng: np.random.Generator) -> FunctionTable:
    return FunctionTable(G, H, H.residues[rng.integers(0, H.order, size=G.order)])


# ---------------------------------------------------------------------------
# equivalence of the two degree characterizations


def _characterize_all(functions, orders) -> tuple[int, str | None]:
    calls = 0
    for f in functions:
        for m in orders:
            try:
                characterize(f, m)
            except TheoremViolation as exc:
                return calls, str(exc)
            calls += 1
    return calls, None


def check_equivalence_exhaustive(seed: int = 0) -> tuple[bool, str]:
    cases = [(FinAbGroup([3]), FinAbGroup([3])), (FinAbGroup([4]), FinAbGroup([2])), (FinAbGroup([2, 2]), FinAbGroup([2]))]
    total = 0
    for G, H in cases:
        calls, err = _characterize_all(all_functions(G, H), range(4))
        total += calls
        if err:
            return False, err
    return True, f"{total} exhaustive checks agree"


def check_equivalence_random(seed: int = 0, count: int = 500) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    total = 0
    for G, H in ((FinAbGroup([6]), FinAbGroup([4])), (FinAbGroup([5]), FinAbGroup([5]))):
        fs = [random_function(G, H, rng) for _ in range(count)]
        calls, err = _characterize_all(fs, range(3))
        total += calls
        if err:
            return False, err
    return True, f"{total} random checks agree"


# ---------------------------------------------------------------------------
# linear algebra against brute force


def random_system(rng: np.random.Generator) -> IntLinearSystem:
    n = int(rng.integers(1, 4))
    rows = int(rng.integers(1, 5))
    if rng.random() < 0.25:
        moduli = [int(rng.integers(2, 7)), int(rng.integers(2, 7))]
    else:
        moduli = [int(rng.integers(2, 13))]
    G = FinAbGroup(moduli)
    coeffs = rng.integers(-12, 13, size=(rows, n))
    if rng.random() < 0.5:
        # a consistent right-hand side
        x = G.residues[rng.integers(0, G.order, size=n)]
        rhs = coeffs @ x
    else:
        rhs = G.residues[rng.integers(0, G.order, size=rows)]
    return IntLinearSystem(coeffs, rhs, G)


def check_linalg_oracle(seed: int = 0, count: int = 200) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    for k in range(count):
        sys = random_system(rng)
        G = sys.value_group
        cs = solve(sys)
        n = sys.num_unknowns
        found = 0
        for combo in itertools.product(range(G.order), repeat=n):
            x = G.residues[list(combo)]
            truth = sys.satisfied_by(x)
            found += truth
            if coset_contains(cs, x) != truth:
                return False, f"system {k}: membership of {x.tolist()} disagrees with enumeration"
        if cs.size() != found:
            return False, f"system {k}: coset size {cs.size()} but {found} solutions by enumeration"
    return True, f"{count} systems match enumeration"


# ---------------------------------------------------------------------------
# degree against the definition


def layered_degree(f: FunctionTable) -> int | Degree:
    """Degree from the definition alone: grow the set of distinct k-fold differences until it empties or repeats."""
    if f.is_zero():
        return Degree.MINUS_INFINITY
    G, H = f.domain, f.codomain
    n, r = G.order, H.rank
    shifted = G.add_index.T  # shifted[h, x] = index of x + h
    layer = f.values.reshape(1, n, r)
    seen: set[bytes] = set()
    k = 0
    while True:
        diffs = layer[:, shifted, :] - layer[:, None, :, :]
        flat = H.reduce(diffs).reshape(-1, n * r)
        flat = np.unique(flat[flat.any(axis=1)], axis=0)
        if not len(flat):
            return k
        key = flat.tobytes()
        if key in seen:
            return Degree.NOT_POLYNOMIAL
        seen.add(key)
        layer = flat.reshape(-1, n, r)
        k += 1


def literal_at_most(f: FunctionTable, m: int) -> bool:
    """Every ``(m+1)``-tuple of increments, every point."""
    G = list(f.domain)
    return all(mixed_difference(f, hs).is_zero() for hs in itertools.product(G, repeat=m + 1))


SMALL_GROUPS = [[1], [2], [3], [4], [2, 2], [5], [6], [7], [8], [2, 4], [2, 2, 2]]
SMALL_CODOMAINS = [[2], [3], [4], [2, 2], [5], [6], [8]]
ORACLE_LIMIT = 4096  # functions per (G, H) pair


def degree_oracle_pairs():
    for gm in SMALL_GROUPS:
        G = FinAbGroup(gm)
        for hm in SMALL_CODOMAINS:
            H = FinAbGroup(hm)
            if H.order**G.order <= ORACLE_LIMIT:
                yield G, H


def check_degree_oracle(seed: int = 0) -> tuple[bool, str]:
    total = 0
    for G, H in degree_oracle_pairs():
        for f in all_functions(G, H):
            fast = degree(f).degree
            slow = layered_degree(f)
            if fast != slow:
                return False, f"{f}: recursive degree {fast}, definition gives {slow}"
            if G.order <= 4 and H.order <= 4:
                for m in range(3):
                    if is_degree_at_most(f, m)[0] != literal_at_most(f, m):
                        return False, f"{f}: tuple sweep disagrees at m={m}"
            total += 1
    return True, f"{total} functions over groups of order <= 8 agree"


# ---------------------------------------------------------------------------
# named equation instances


def _bound_check(eq, label: str) -> tuple[bool, str]:
    r = solve_equation(eq)
    worst = {n: str(d.max_degree()) for n, d in r.degrees.items() if n in eq.checked_unknowns()}
    return r.bound_holds and r.solvable, f"{label}: bound {eq.claimed_bound}, max degrees {worst}, rank {r.coset.rank}"


def go_instance():
    G = FinAbGroup([5])
    return build_ghurye_olkin([GroupHom.scalar(G, 1), GroupHom.scalar(G, 2)])


def check_go_homogeneous(seed: int = 0) -> tuple[bool, str]:
    return _bound_check(go_instance(), "Z5, c = (1, 2)")


def check_wilson(seed: int = 0) -> tuple[bool, str]:
    G = FinAbGroup([5])
    ident = GroupHom.identity(G)
    eq = build_wilson([ident, ident], [GroupHom.scalar(G, 1), GroupHom.scalar(G, 2)])
    return _bound_check(eq, "Z5, beta = id, delta = (1, 2)")


def check_gffe(seed: int = 0) -> tuple[bool, str]:
    eq = build_gffe(FinAbGroup([5]), [0, 1, -2, 1])
    ok, detail = _bound_check(eq, "Z5, a = (1, -2, 1)")
    hyp = solve_equation(eq).hypotheses
    satisfied = hyp is not None and hyp.satisfied
    return ok and satisfied, f"{detail}, hypotheses {'satisfied' if satisfied else 'violated'}"


def check_knw(seed: int = 0) -> tuple[bool, str]:
    return _bound_check(build_knw(13, 3, 3), "F13, N = 3, w = 3")


def check_attainment(seed: int = 0) -> tuple[bool, str]:
    eq = build_cube_witness(7)
    r = solve_equation(eq)
    R = RingZm(7)
    cube = FunctionTable.from_callable(R, R, lambda t: t.residues[0] ** 3)
    tables = r.particular_tables()
    if tables is None:
        return False, "no solution"
    f = tables["f1"]
    d = degree(f).degree
    ok = f == cube and r.coset.rank == 0 and d == 3 == eq.claimed_bound
    return ok, f"unique solution {f.to_list()}, degree {d}, bound {eq.claimed_bound}"


def check_automorphism_invariance(seed: int = 0, count: int = 100) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    G = FinAbGroup([7])
    checked = 0
    for m in range(3):
        gens = degree_submodule_generators(G, G, m)
        for _ in range(count):
            coeffs = rng.integers(0, 7, size=len(gens))
            g = FunctionTable.zero(G, G)
            for c, t in zip(coeffs, gens):
                g = g + int(c) * t
            alpha = GroupHom.scalar(G, int(rng.integers(1, 7)))
            before, after = degree(g).degree, degree(compose_with_hom(g, alpha)).degree
            if before != after or not degree(g).at_most(m):
                return False, f"{g} has degree {before}, composed with {alpha} gives {after}"
            checked += 1
    return True, f"{checked} compositions keep their degree"


def check_reduction(seed: int = 0) -> tuple[bool, str]:
    eq = go_instance()
    cs = solve_equation(eq, check=False).coset
    G = FinAbGroup([5])
    n = 0
    for x in cs:
        tables = tables_from_vector(eq, x)
        for h in G:
            red = reduction_step(eq, h)
            if not satisfies(red.equation, red.lift(tables)):
                return False, f"solution {x.ravel().tolist()} fails the reduced equation at h={h}"
            n += 1
    return n > 0, f"{n} (solution, h) pairs satisfy the reduced equation"


# ---------------------------------------------------------------------------
# DSL and CLI


def golden_specs() -> dict[str, str]:
    root = resources.files("polyfeq") / "specs"
    return {p.name: p.read_text(encoding="utf-8") for p in sorted(root.iterdir(), key=lambda p: p.name) if p.name.endswith(".feq")}


def fuzz_inputs(seed: int, count: int) -> list[bytes]:
    rng = np.random.default_rng(seed)
    corpus = [t.encode() for t in golden_specs().values()]
    alphabet = b"Zxgroupringhomknownunknownequationforallclaimdegreetable;:=[](),+-*.<>#0123456789 \n"
    out = []
    for k in range(count):
        mode = k % 3
        if mode == 0:
            out.append(rng.integers(0, 256, size=int(rng.integers(0, 4097)), dtype=np.uint8).tobytes())
        elif mode == 1:
            n = int(rng.integers(0, 200))
            out.append(bytes(alphabet[i] for i in rng.integers(0, len(alphabet), size=n)))
        else:
            base = bytearray(corpus[int(rng.integers(0, len(corpus)))])
            for _ in range(int(rng.integers(1, 6))):
                pos = int(rng.integers(0, len(base) + 1))
                op = rng.integers(0, 3)
                if op == 0 and base:
                    del base[min(pos, len(base) - 1)]
                elif op == 1:
                    base.insert(pos, int(rng.integers(0, 256)))
                else:
                    base[pos:pos] = bytes(alphabet[i] for i in rng.integers(0, len(alphabet), size=3))
            out.append(bytes(base[:4096]))
    return out


def _cli_exit(argv: list[str]) -> int:
    from .cli import main

    with contextlib.redirect_stdout(io.StringIO()), contextlib.redirect_stderr(io.StringIO()):
        return main(argv)


CLI_FIXTURES = {
    "identity_z2.feq": "group G = Z2;\nknown id : G -> G = table [0, 1];\n",
    "square_z3.feq": "ring R = Z3;\nknown sq : R -> R = table [0, 1, 1];\n",
    "square_z5.feq": "ring R = Z5;\nknown sq : R -> R = table [0, 1, 4, 4, 1];\nknown one : R -> R = table [1, 1, 1, 1, 1];\nknown zero : R -> R = table [0, 0, 0, 0, 0];\n",
}


def cli_contract_cases(workdir: Path) -> list[tuple[list[str], int]]:
    specs = golden_specs()
    for name, text in {**specs, **CLI_FIXTURES}.items():
        (workdir / name).write_text(text, encoding="utf-8")
    (workdir / "broken.feq").write_text("group G = Z5\n", encoding="utf-8")
    w = str(workdir)
    return [
        (["solve", f"{w}/knw_13_3.feq"], 0),
        (["solve", "--json", f"{w}/knw_13_3.feq"], 0),
        (["solve", f"{w}/wilson_false_claim.feq"], 2),
        (["solve", f"{w}/does_not_exist.feq"], 1),
        (["solve", f"{w}/broken.feq"], 1),
        (["degree", f"{w}/square_z5.feq", "--fn", "sq"], 0),
        (["degree", f"{w}/square_z5.feq", "--fn", "missing"], 1),
        (["decompose", f"{w}/identity_z2.feq", "--fn", "id", "--order", "1"], 0),
        (["decompose", f"{w}/square_z3.feq", "--fn", "sq", "--order", "1"], 0),
        (["decompose", f"{w}/identity_z2.feq", "--fn", "id", "--order", "9"], 1),
        (["verify", "--suite", "unknown"], 1),
        (["verify", "--suite", "attainment"], 0),
        (["frobnicate"], 1),
    ]


def check_dsl(seed: int = 0, fuzz_count: int = 10_000) -> tuple[bool, str]:
    specs = golden_specs()
    for name, text in specs.items():
        doc = dsl.parse(text.encode())
        if dsl.print_document(doc) != text or dsl.parse(dsl.print_document(doc)) != doc:
            return False, f"{name} does not round-trip"
    errors = 0
    for data in fuzz_inputs(seed, fuzz_count):
        try:
            dsl.parse(data)
        except dsl.ParseError:
            errors += 1
        except Exception as exc:  # noqa: BLE001 - any other exception is the failure being tested for
            return False, f"parser crashed with {type(exc).__name__}: {exc} on {data[:60]!r}"
    with tempfile.TemporaryDirectory() as tmp:
        for argv, expected in cli_contract_cases(Path(tmp)):
            got = _cli_exit(argv)
            if got != expected:
                return False, f"`polyfeq {' '.join(argv)}` exited {got}, expected {expected}"
    return True, f"{len(specs)} golden specs round-trip, {fuzz_count} fuzzed inputs ({errors} rejected) without crashes, CLI exit codes as documented"


# ---------------------------------------------------------------------------

SUITES: dict[str, tuple[int, Callable[..., tuple[bool, str]]]] = {
    "equivalence-exhaustive": (1, check_equivalence_exhaustive),
    "equivalence-random": (2, check_equivalence_random),
    "linalg-oracle": (3, check_linalg_oracle),
    "degree-oracle": (4, check_degree_oracle),
    "go-homogeneous": (5, check_go_homogeneous),
    "wilson": (6, check_wilson),
    "gffe": (7, check_gffe),
    "knw": (8, check_knw),
    "attainment": (9, check_attainment),
    "automorphism-invariance": (10, check_automorphism_invariance),
    "reduction": (11, check_reduction),
    "dsl": (12, check_dsl),
}


def resolve_suites(selection: str) -> list[str]:
    """``paper`` for everything, otherwise a comma-separated list of suite names."""
    if selection == "paper":
        return list(SUITES)
    names = [s.strip() for s in selection.split(",") if s.strip()]
    unknown = [n for n in names if n not in SUITES]
    if unknown or not names:
        raise KeyError(f"unknown suite(s) {unknown or [selection]}; choose 'paper' or any of {', '.join(SUITES)}")
    return names


def run_suite(name: str, seed: int = 0) -> CheckResult:
    number, fn = SUITES[name]
    start = time.perf_counter()
    try:
        passed, detail = fn(seed)
    except Exception as exc:  # noqa: BLE001 - a crashing suite is reported as a failure
        passed, detail = False, f"raised {type(exc).__name__}: {exc}"
    return CheckResult(number, name, bool(passed), detail, time.perf_counter() - start)


def run_suites(names: list[str], seed: int = 0) -> list[CheckResult]:
    return [run_suite(n, seed) for n in names]
