"""``polyfeq`` command line: solve, degree, decompose, verify.

Exit codes: 0 success (all claims hold), 2 a claim or verification failed,
1 usage, parse, lowering or capacity errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

from . import dsl
from .aichinger import DEFAULT_MAX_ORDER, find_decomposition
from .equations import DEFAULT_MAX_ROWS, SolutionReport, instantiate, solve_equation
from .errors import CapacityError, GroupError
from .polynomial import degree

REPORT_VERSION = 1
EXIT_OK, EXIT_USAGE, EXIT_FAILED = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _degree_value(d):
    return d if isinstance(d, int) else str(d)


def _load(path: str) -> tuple[bytes, dsl.Program]:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None
    doc = dsl.parse(data)
    return data, dsl.lower(doc)


def _claim_verdict(claim: dsl.Claim, r: SolutionReport) -> dict:
    worst = {}
    holds = True
    for n in claim.names:
        d = r.degrees.get(n)
        if d is None:  # no solutions, so nothing to bound
            worst[n] = "minus-infinity"
            continue
        reports = (d.particular,) + d.generators
        holds = holds and all(rep.at_most(claim.bound) for rep in reports)
        worst[n] = _degree_value(d.max_degree())
    return {"claim": str(claim), "unknowns": list(claim.names), "bound": claim.bound, "holds": holds, "worst": worst}


def _hypotheses(r: SolutionReport):
    h = r.hypotheses
    if h is None:
        return None
    return {
        "satisfied": h.satisfied,
        "violation": h.violation,
        "terms": [
            {"term": t.term, "unknown": t.unknown, "hom": t.hom.matrix.tolist(), "automorphism": t.automorphism}
            for t in h.terms
        ],
        "pairs": [{"first": p.first, "second": p.second, "difference_automorphism": p.difference_automorphism} for p in h.pairs],
    }


def build_report(data: bytes, prog: dsl.Program, max_rows: int) -> dict:
    """Solve and collect the machine report; keys are in their final order except ``timing``."""
    eq = prog.equation
    if eq is None:
        raise UsageError("the document declares no equation")
    system = instantiate(eq, max_rows=max_rows)
    r = solve_equation(eq, max_rows=max_rows)
    particular = r.particular_tables()
    degrees = []
    for u in eq.unknowns:
        d = r.degrees.get(u.name)
        degrees.append(
            {
                "unknown": u.name,
                "particular": _degree_value(d.particular.degree) if d else None,
                "generators": [_degree_value(g.degree) for g in d.generators] if d else [],
                "max": _degree_value(d.max_degree()) if d else "minus-infinity",
            }
        )
    claims = [_claim_verdict(c, r) for c in prog.claims]
    return {
        "report_version": REPORT_VERSION,
        "command": "solve",
        "input_sha256": hashlib.sha256(data).hexdigest(),
        "equation": {
            "name": eq.name,
            "unknowns": [{"name": u.name, "domain": str(u.domain), "codomain": str(u.codomain)} for u in eq.unknowns],
            "clauses": len(eq.clauses),
            "rows": system.num_rows,
            "homogeneous": eq.is_homogeneous(),
        },
        "hypotheses": _hypotheses(r),
        "solution": {
            "solvable": r.solvable,
            "rank": r.coset.rank,
            "size": str(r.coset.size()),
            "particular": {n: t.to_list() for n, t in particular.items()} if particular else None,
        },
        "degrees": degrees,
        "claims": claims,
        "all_claims_hold": all(c["holds"] for c in claims),
    }


def _text_table(rows: list[list]) -> str:
    return "\n".join("\t".join(str(c) for c in row) for row in rows)


def render_text(report: dict) -> str:
    eq = report["equation"]
    hyp = report["hypotheses"]
    if hyp is None:
        hyp_text = "not applicable"
    else:
        hyp_text = "satisfied" if hyp["satisfied"] else f"violated: {hyp['violation']}"
    sol = report["solution"]
    lines = [
        _text_table(
            [
                ["equation", eq["name"]],
                ["sha256", report["input_sha256"]],
                ["rows", eq["rows"]],
                ["hypotheses", hyp_text],
                ["solvable", "yes" if sol["solvable"] else "no"],
                ["rank", sol["rank"]],
                ["solutions", sol["size"]],
            ]
        ),
        "",
        _text_table(
            [["unknown", "particular", "max", "generators"]]
            + [[d["unknown"], d["particular"], d["max"], ",".join(str(g) for g in d["generators"]) or "-"] for d in report["degrees"]]
        ),
    ]
    if report["claims"]:
        lines += [
            "",
            _text_table(
                [["claim", "bound", "verdict"]]
                + [[c["claim"], c["bound"], "holds" if c["holds"] else "FAILS"] for c in report["claims"]]
            ),
        ]
    return "\n".join(lines)


def cmd_solve(args) -> int:
    start = time.perf_counter()
    data, prog = _load(args.path)
    report = build_report(data, prog, args.max_rows)
    report["timing"] = {"seconds": round(time.perf_counter() - start, 6)}
    if args.figure:
        from .plotting import degree_figure

        degree_figure(report, args.figure)
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        print(render_text(report))
    return EXIT_OK if report["all_claims_hold"] else EXIT_FAILED


def _known(prog: dsl.Program, name: str):
    if name not in prog.knowns:
        raise UsageError(f"no known table named {name!r}; declared: {', '.join(prog.knowns) or 'none'}")
    return prog.knowns[name]


def cmd_degree(args) -> int:
    _, prog = _load(args.path)
    f = _known(prog, args.fn)
    rep = degree(f)
    witness = [list(e.residues) for e in rep.witness] if rep.witness else None
    if args.json:
        out = {"report_version": REPORT_VERSION, "command": "degree", "function": args.fn, "degree": _degree_value(rep.degree), "witness": witness}
        print(json.dumps(out, indent=2))
    else:
        rows = [["function", args.fn], ["degree", _degree_value(rep.degree)]]
        if witness:
            rows.append(["witness", " ".join(",".join(str(v) for v in w) for w in witness)])
        print(_text_table(rows))
    return EXIT_OK


def cmd_decompose(args) -> int:
    _, prog = _load(args.path)
    f = _known(prog, args.fn)
    dec = find_decomposition(f, args.order, max_order=DEFAULT_MAX_ORDER, max_rows=args.max_rows)
    if dec is None:
        if args.json:
            print(json.dumps({"report_version": REPORT_VERSION, "command": "decompose", "function": args.fn, "order": args.order, "parts": None}, indent=2))
        else:
            print("none")
        return EXIT_OK
    if args.json:
        parts = [g.to_list() for g in dec.parts]
        print(json.dumps({"report_version": REPORT_VERSION, "command": "decompose", "function": args.fn, "order": args.order, "parts": parts}, indent=2))
    else:
        rows = [["part", "values"]]
        rows += [[f"g{i + 1}", " ".join(str(v) for v in g.to_list())] for i, g in enumerate(dec.parts)]
        print(_text_table(rows))
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import resolve_suites, run_suites

    try:
        names = resolve_suites(args.suite)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    results = run_suites(names, args.seed)
    for r in results:
        print(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAILED


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="polyfeq", description="Solve linear functional equations on finite abelian groups and check degree claims.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="solve the equation in a .feq file and check its claims")
    s.add_argument("path")
    s.add_argument("--json", action="store_true", help="print the machine report")
    s.add_argument("--max-rows", type=int, default=DEFAULT_MAX_ROWS)
    s.add_argument("--figure", metavar="PATH", help="also draw degrees against claimed bounds")
    s.set_defaults(run=cmd_solve)

    d = sub.add_parser("degree", help="degree of a known table")
    d.add_argument("path")
    d.add_argument("--fn", required=True)
    d.add_argument("--json", action="store_true")
    d.set_defaults(run=cmd_degree)

    c = sub.add_parser("decompose", help="split a known table as a sum of functions of m variables")
    c.add_argument("path")
    c.add_argument("--fn", required=True)
    c.add_argument("--order", type=int, required=True)
    c.add_argument("--max-rows", type=int, default=DEFAULT_MAX_ROWS)
    c.add_argument("--json", action="store_true")
    c.set_defaults(run=cmd_decompose)

    v = sub.add_parser("verify", help="run the built-in verification suites")
    v.add_argument("--suite", default="paper", help="'paper' for all suites or a comma-separated list")
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(run=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    try:
        args = make_parser().parse_args(argv)
        return args.run(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    except dsl.ParseError as exc:
        print(f"{getattr(args, 'path', '<input>')}:{exc}", file=sys.stderr)
    except (dsl.LoweringError, CapacityError, GroupError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
