"""The ``.feq`` text format: declarations of groups, homs, tables, unknowns, equations and claims.

Parsing resolves every name and checks matrix and table shapes, so a parsed
:class:`SpecDocument` is always lowerable up to builder-specific validation.
See ``docs/dsl.md`` for the grammar.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from . import equations as eqs
from .abelian import FinAbGroup, GroupError, GroupHom, RingZm
from .functions import FunctionTable, MultiFunctionTable

BUILDERS = ("knw", "gffe", "wilson", "lsd", "ghurye_olkin")
KEYWORDS = frozenset({"group", "ring", "hom", "known", "unknown", "equation", "forall", "in", "claim", "degree", "table"})
_CYCLIC = re.compile(r"Z([0-9]+)")
_GROUP_LITERAL = re.compile(r"Z[0-9]+(?:xZ[0-9]+)*")


# ---------------------------------------------------------------------------
# errors


class ParseError(ValueError):
    """Any failure to turn text into a document; always carries a position and expected tokens."""

    kind = "syntax"

    def __init__(self, message: str, line: int, column: int, expected=()):
        self.message = message
        self.line = line
        self.column = column
        self.expected = frozenset(expected) or frozenset({"<valid input>"})
        super().__init__(str(self))

    def __str__(self):
        exp = ", ".join(sorted(self.expected))
        return f"{self.line}:{self.column}: {self.kind} error: {self.message} (expected {exp})"


class LexError(ParseError):
    kind = "lexical"


class ResolutionError(ParseError):
    kind = "resolution"


class ShapeError(ParseError):
    kind = "shape"


class LoweringError(ValueError):
    """Semantic problem found while building equation objects from a valid document."""


# ---------------------------------------------------------------------------
# lexer


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT, INT, PUNCT, EOF
    text: str
    pos: int


_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r\n]+)|(?P<comment>#[^\n]*)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<int>[0-9]+)"
    r"|(?P<punct>->|<=|[;:=\[\](),+\-*.])"
)


def tokenize(text: str) -> list[Token]:
    out = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            line, col = _line_col(text, pos)
            raise LexError(f"unexpected character {text[pos]!r}", line, col, {"identifier", "integer", "punctuation"})
        kind = m.lastgroup
        if kind == "ident":
            out.append(Token("IDENT", m.group(), pos))
        elif kind == "int":
            out.append(Token("INT", m.group(), pos))
        elif kind == "punct":
            out.append(Token("PUNCT", m.group(), pos))
        pos = m.end()
    out.append(Token("EOF", "", n))
    return out


def _line_col(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


# ---------------------------------------------------------------------------
# syntax tree


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class HomApp:
    hom: str
    arg: "Expr"


@dataclass(frozen=True)
class Paren:
    inner: "Expr"


Atom = Union[Var, HomApp, Paren]


@dataclass(frozen=True)
class Expr:
    """``Σ coefficient·atom``."""

    terms: tuple[tuple[int, Atom], ...]


@dataclass(frozen=True)
class App:
    func: str
    arg: Expr


@dataclass(frozen=True)
class Monomial:
    coefficient: int
    factors: tuple[App, ...]


@dataclass(frozen=True)
class Side:
    """A sum of monomials; empty means ``0``."""

    monomials: tuple[Monomial, ...]


Span = tuple[int, int]


@dataclass(frozen=True)
class GroupDecl:
    name: str
    moduli: tuple[int, ...]
    span: Span = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class RingDecl:
    name: str
    modulus: int
    span: Span = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class HomDecl:
    name: str
    domain: str
    codomain: str
    matrix: tuple[tuple[int, ...], ...]
    span: Span = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class KnownDecl:
    name: str
    domain: str
    codomain: str
    values: tuple  # ints, or tuples of ints for non-cyclic codomains
    span: Span = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class UnknownDecl:
    name: str
    domain: str
    codomain: str
    span: Span = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class EquationDecl:
    variables: tuple[str, ...]
    group: str | None
    lhs: Side
    rhs: Side
    span: Span = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class ClaimDecl:
    names: tuple[str, ...]
    bound: int
    span: Span = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class BuilderDecl:
    builder: str
    args: tuple[tuple[str, object], ...]
    span: Span = field(default=(0, 0), compare=False)


Declaration = Union[GroupDecl, RingDecl, HomDecl, KnownDecl, UnknownDecl, EquationDecl, ClaimDecl, BuilderDecl]


@dataclass(frozen=True)
class Product:
    """``left*right`` inside a builder argument list."""

    left: str
    right: str


@dataclass(frozen=True)
class SpecDocument:
    declarations: tuple[Declaration, ...]

    def of_type(self, cls):
        return [d for d in self.declarations if isinstance(d, cls)]


# ---------------------------------------------------------------------------
# parser


@dataclass
class _Scope:
    groups: dict[str, FinAbGroup] = field(default_factory=dict)
    homs: dict[str, GroupHom] = field(default_factory=dict)
    knowns: dict[str, tuple[FinAbGroup, FinAbGroup]] = field(default_factory=dict)
    unknowns: dict[str, tuple[FinAbGroup, FinAbGroup]] = field(default_factory=dict)
    builder_seen: bool = False
    equation_seen: bool = False

    def callable_kind(self, name: str) -> str | None:
        for kind, table in (("hom", self.homs), ("known", self.knowns), ("unknown", self.unknowns)):
            if name in table:
                return kind
        return None


_BUILDER_ARGS = {
    "knw": ({"p", "N"}, {"w"}),
    "gffe": ({"group", "coeffs"}, {"codomain"}),
    "wilson": ({"beta", "delta"}, {"codomain"}),
    "lsd": ({"beta", "delta"}, {"codomain"}),
    "ghurye_olkin": ({"c"}, {"p", "q", "r", "s", "codomain"}),
}


class Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.scope = _Scope()

    # -- token helpers ------------------------------------------------------
    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def _error(self, cls, message: str, expected=(), tok: Token | None = None):
        tok = tok or self.tok
        line, col = _line_col(self.text, tok.pos)
        return cls(message, line, col, expected)

    def _describe(self, tok: Token) -> str:
        return "end of input" if tok.kind == "EOF" else repr(tok.text)

    def at(self, text: str) -> bool:
        return self.tok.kind in ("PUNCT", "IDENT") and self.tok.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self._error(ParseError, f"unexpected {self._describe(self.tok)}", {repr(text)})
        tok = self.tok
        self.i += 1
        return tok

    def ident(self, what: str = "identifier") -> str:
        if self.tok.kind != "IDENT" or self.tok.text in KEYWORDS:
            raise self._error(ParseError, f"unexpected {self._describe(self.tok)}", {what})
        t = self.tok.text
        self.i += 1
        return t

    def integer(self) -> int:
        sign = 1
        if self.at("-"):
            self.i += 1
            sign = -1
        if self.tok.kind != "INT":
            raise self._error(ParseError, f"unexpected {self._describe(self.tok)}", {"integer"})
        v = int(self.tok.text)
        self.i += 1
        return sign * v

    # -- document -----------------------------------------------------------
    def parse(self) -> SpecDocument:
        decls = []
        while self.tok.kind != "EOF":
            decls.append(self.declaration())
        return SpecDocument(tuple(decls))

    def declaration(self) -> Declaration:
        start = self.tok.pos
        t = self.tok
        if t.kind == "IDENT" and t.text == "group":
            d = self.group_decl(start)
        elif t.kind == "IDENT" and t.text == "ring":
            d = self.ring_decl(start)
        elif t.kind == "IDENT" and t.text == "hom":
            d = self.hom_decl(start)
        elif t.kind == "IDENT" and t.text == "known":
            d = self.known_decl(start)
        elif t.kind == "IDENT" and t.text == "unknown":
            d = self.unknown_decl(start)
        elif t.kind == "IDENT" and t.text == "equation":
            d = self.equation_decl(start)
        elif t.kind == "IDENT" and t.text == "claim":
            d = self.claim_decl(start)
        elif t.kind == "IDENT" and t.text in BUILDERS:
            d = self.builder_decl(start)
        else:
            expected = {"'group'", "'ring'", "'hom'", "'known'", "'unknown'", "'equation'", "'claim'"} | {
                f"'{b}'" for b in BUILDERS
            }
            raise self._error(ParseError, f"unexpected {self._describe(t)} at start of declaration", expected)
        return d

    def _end(self, start: int) -> Span:
        tok = self.expect(";")
        return (start, tok.pos + 1)

    def _new_group_name(self) -> tuple[str, Token]:
        tok = self.tok
        name = self.ident("group name")
        if _CYCLIC.fullmatch(name):
            raise self._error(ResolutionError, f"{name!r} is reserved for cyclic group literals", {"group name"}, tok)
        if name in self.scope.groups:
            raise self._error(ResolutionError, f"group {name!r} is already declared", {"new group name"}, tok)
        return name, tok

    def _cyclic(self) -> int:
        tok = self.tok
        m = _CYCLIC.fullmatch(tok.text) if tok.kind == "IDENT" else None
        if m is None:
            raise self._error(ParseError, f"unexpected {self._describe(tok)}", {"cyclic factor like Z4"})
        n = int(m.group(1))
        if n < 1:
            raise self._error(ShapeError, "cyclic factor order must be at least 1", {"Z<n> with n >= 1"})
        self.i += 1
        return n

    def _group_literal(self) -> list[int]:
        # whitespace-insensitive: "Z4xZ2", "Z4 xZ2" and "Z4 x Z2" are the same literal
        first = self.tok
        pieces = []
        while self.tok.kind == "IDENT":
            pieces.append(self.tok.text)
            self.i += 1
        text = "".join(pieces)
        if not _GROUP_LITERAL.fullmatch(text):
            self.i -= len(pieces)
            raise self._error(ParseError, f"unexpected {self._describe(first)}", {"group literal like Z4 x Z2"}, first)
        moduli = [int(n) for n in _CYCLIC.findall(text)]
        if min(moduli) < 1:
            raise self._error(ShapeError, "cyclic factor order must be at least 1", {"Z<n> with n >= 1"}, first)
        return moduli

    def group_decl(self, start: int) -> GroupDecl:
        self.expect("group")
        name, tok = self._new_group_name()
        self.expect("=")
        moduli = self._group_literal()
        span = self._end(start)
        try:
            self.scope.groups[name] = FinAbGroup(moduli)
        except GroupError as exc:
            raise self._error(ShapeError, str(exc), {"smaller group"}, tok) from None
        return GroupDecl(name, tuple(moduli), span)

    def ring_decl(self, start: int) -> RingDecl:
        self.expect("ring")
        name, tok = self._new_group_name()
        self.expect("=")
        m = self._cyclic()
        span = self._end(start)
        if m < 2:
            raise self._error(ShapeError, "ring modulus must be at least 2", {"Z<m> with m >= 2"}, tok)
        self.scope.groups[name] = RingZm(m)
        return RingDecl(name, m, span)

    def group_ref(self) -> tuple[str, FinAbGroup]:
        tok = self.tok
        name = self.ident("group name")
        if name not in self.scope.groups:
            raise self._error(ResolutionError, f"undefined group {name!r}", {"declared group"}, tok)
        return name, self.scope.groups[name]

    def _new_callable(self, what: str) -> tuple[str, Token]:
        tok = self.tok
        name = self.ident(f"{what} name")
        if self.scope.callable_kind(name) is not None:
            raise self._error(ResolutionError, f"{name!r} is already declared", {f"new {what} name"}, tok)
        return name, tok

    def _signature(self) -> tuple[str, FinAbGroup, str, FinAbGroup]:
        self.expect(":")
        dn, D = self.group_ref()
        self.expect("->")
        cn, C = self.group_ref()
        return dn, D, cn, C

    def hom_decl(self, start: int) -> HomDecl:
        self.expect("hom")
        name, tok = self._new_callable("hom")
        dn, D, cn, C = self._signature()
        self.expect("=")
        mtok = self.tok
        self.expect("[")
        rows = [self.int_row()]
        while self.at(","):
            self.i += 1
            rows.append(self.int_row())
        self.expect("]")
        span = self._end(start)
        shape = (C.rank, D.rank)
        if len(rows) != shape[0] or any(len(r) != shape[1] for r in rows):
            got = f"{len(rows)}x{len(rows[0]) if rows else 0}"
            raise self._error(ShapeError, f"hom {name} needs a {shape[0]}x{shape[1]} matrix, got {got}", {f"{shape[0]}x{shape[1]} matrix"}, mtok)
        try:
            self.scope.homs[name] = GroupHom(D, C, rows)
        except GroupError as exc:
            raise self._error(ShapeError, str(exc), {"well-defined matrix"}, mtok) from None
        return HomDecl(name, dn, cn, tuple(tuple(r) for r in rows), span)

    def int_row(self) -> list[int]:
        self.expect("[")
        vals = [self.integer()]
        while self.at(","):
            self.i += 1
            vals.append(self.integer())
        self.expect("]")
        return vals

    def known_decl(self, start: int) -> KnownDecl:
        self.expect("known")
        name, tok = self._new_callable("known")
        dn, D, cn, C = self._signature()
        self.expect("=")
        self.expect("table")
        ttok = self.tok
        self.expect("[")
        vals = [self.table_value()]
        while self.at(","):
            self.i += 1
            vals.append(self.table_value())
        self.expect("]")
        span = self._end(start)
        if len(vals) != D.order:
            raise self._error(ShapeError, f"table {name} needs {D.order} values, got {len(vals)}", {f"{D.order} values"}, ttok)
        for v in vals:
            arity = len(v) if isinstance(v, tuple) else 1
            if arity != max(C.rank, 1) or (isinstance(v, tuple) and C.rank == 1):
                raise self._error(ShapeError, f"table {name} values must have {C.rank} components", {f"{C.rank}-component values"}, ttok)
        self.scope.knowns[name] = (D, C)
        return KnownDecl(name, dn, cn, tuple(vals), span)

    def table_value(self):
        if self.at("("):
            self.i += 1
            vals = [self.integer()]
            while self.at(","):
                self.i += 1
                vals.append(self.integer())
            self.expect(")")
            return tuple(vals)
        return self.integer()

    def unknown_decl(self, start: int) -> UnknownDecl:
        self.expect("unknown")
        name, tok = self._new_callable("unknown")
        dn, D, cn, C = self._signature()
        span = self._end(start)
        self.scope.unknowns[name] = (D, C)
        return UnknownDecl(name, dn, cn, span)

    def claim_decl(self, start: int) -> ClaimDecl:
        self.expect("claim")
        self.expect("degree")
        names = [self._unknown_ref()]
        while self.at(","):
            self.i += 1
            names.append(self._unknown_ref())
        self.expect("<=")
        bound = self.integer()
        span = self._end(start)
        if bound < 0:
            raise self._error(ShapeError, "degree bound must be non-negative", {"non-negative integer"})
        return ClaimDecl(tuple(names), bound, span)

    def _unknown_ref(self) -> str:
        tok = self.tok
        name = self.ident("unknown name")
        if name not in self.scope.unknowns:
            raise self._error(ResolutionError, f"undefined unknown {name!r}", {"declared unknown"}, tok)
        return name

    # -- equations ----------------------------------------------------------
    def equation_decl(self, start: int) -> EquationDecl:
        etok = self.tok
        self.expect("equation")
        if self.scope.builder_seen:
            raise self._error(ResolutionError, "explicit equations cannot follow a builder", {"'claim'"}, etok)
        self.expect("forall")
        variables = [self.ident("variable name")]
        while self.tok.kind == "IDENT" and self.tok.text not in KEYWORDS:
            variables.append(self.ident("variable name"))
        if len(set(variables)) != len(variables):
            raise self._error(ResolutionError, "repeated quantified variable", {"distinct variable names"}, etok)
        group = None
        if self.at("in"):
            self.i += 1
            group, _ = self.group_ref()
        self.expect(".")
        lhs = self.side()
        self.expect("=")
        rhs = self.side()
        span = self._end(start)
        self._check_equation(variables, group, lhs, rhs, etok)
        self.scope.equation_seen = True
        return EquationDecl(tuple(variables), group, lhs, rhs, span)

    def side(self) -> Side:
        if self.tok.kind == "INT" and self.tok.text == "0" and self.tokens[self.i + 1].text != "*":
            self.i += 1
            return Side(())
        monos = []
        sign = 1
        if self.at("-"):
            self.i += 1
            sign = -1
        monos.append(self.monomial(sign))
        while self.at("+") or self.at("-"):
            sign = 1 if self.tok.text == "+" else -1
            self.i += 1
            monos.append(self.monomial(sign))
        return Side(tuple(monos))

    def monomial(self, sign: int) -> Monomial:
        coeff = 1
        if self.tok.kind == "INT":
            coeff = self.integer()
            self.expect("*")
        factors = [self.app()]
        while self.at("*"):
            self.i += 1
            factors.append(self.app())
        return Monomial(sign * coeff, tuple(factors))

    def app(self) -> App:
        tok = self.tok
        name = self.ident("function name")
        kind = self.scope.callable_kind(name)
        if kind not in ("known", "unknown"):
            raise self._error(ResolutionError, f"undefined function {name!r}", {"declared known or unknown"}, tok)
        self.expect("(")
        e = self.expr()
        self.expect(")")
        return App(name, e)

    def expr(self) -> Expr:
        terms = []
        sign = 1
        if self.at("-"):
            self.i += 1
            sign = -1
        terms.append(self.eterm(sign))
        while self.at("+") or self.at("-"):
            sign = 1 if self.tok.text == "+" else -1
            self.i += 1
            terms.append(self.eterm(sign))
        return Expr(tuple(terms))

    def eterm(self, sign: int) -> tuple[int, Atom]:
        coeff = 1
        if self.tok.kind == "INT":
            coeff = self.integer()
            self.expect("*")
        return sign * coeff, self.atom()

    def atom(self) -> Atom:
        if self.at("("):
            self.i += 1
            e = self.expr()
            self.expect(")")
            return Paren(e)
        tok = self.tok
        name = self.ident("variable or hom name")
        if self.at("("):
            if name not in self.scope.homs:
                raise self._error(ResolutionError, f"undefined hom {name!r}", {"declared hom"}, tok)
            self.i += 1
            e = self.expr()
            self.expect(")")
            return HomApp(name, e)
        return Var(name)

    # -- equation typing ----------------------------------------------------
    def _check_equation(self, variables, group, lhs: Side, rhs: Side, etok: Token):
        types: dict[str, FinAbGroup] = {v: self.scope.groups[group] for v in variables} if group else {}
        value_group = None
        for side in (lhs, rhs):
            for mono in side.monomials:
                unknown_factors = [a for a in mono.factors if a.func in self.scope.unknowns]
                if unknown_factors and len(mono.factors) > 1:
                    raise self._error(ShapeError, "an unknown cannot be multiplied by another function", {"linear term"}, etok)
                for a in mono.factors:
                    D, C = self.scope.unknowns.get(a.func) or self.scope.knowns[a.func]
                    if value_group is None:
                        value_group = C
                    elif C != value_group:
                        raise self._error(ShapeError, f"{a.func} maps into {C}, expected {value_group}", {f"function into {value_group}"}, etok)
                    self._type_expr(a.arg, D, types, variables, etok)
        for v in variables:
            if v not in types:
                raise self._error(ResolutionError, f"cannot infer the group of variable {v!r}", {"'in' group annotation"}, etok)

    def _type_expr(self, e: Expr, target: FinAbGroup, types, variables, etok):
        for _, atom in e.terms:
            if isinstance(atom, Var):
                if atom.name not in variables:
                    raise self._error(ResolutionError, f"undefined variable {atom.name!r}", {"quantified variable"}, etok)
                if types.setdefault(atom.name, target) != target:
                    raise self._error(ShapeError, f"variable {atom.name} used in {types[atom.name]} and {target}", {f"element of {target}"}, etok)
            elif isinstance(atom, HomApp):
                h = self.scope.homs[atom.hom]
                if h.codomain != target:
                    raise self._error(ShapeError, f"hom {atom.hom} lands in {h.codomain}, expected {target}", {f"hom into {target}"}, etok)
                self._type_expr(atom.arg, h.domain, types, variables, etok)
            else:
                self._type_expr(atom.inner, target, types, variables, etok)

    # -- builders -----------------------------------------------------------
    def builder_decl(self, start: int) -> BuilderDecl:
        btok = self.tok
        name = self.tok.text
        self.i += 1
        if self.scope.builder_seen or self.scope.equation_seen:
            raise self._error(ResolutionError, "only one equation source (builder or explicit equations) is allowed", {"'claim'"}, btok)
        self.expect("(")
        args = []
        if not self.at(")"):
            args.append(self.builder_arg())
            while self.at(","):
                self.i += 1
                args.append(self.builder_arg())
        self.expect(")")
        span = self._end(start)
        required, optional = _BUILDER_ARGS[name]
        keys = [k for k, _ in args]
        for k in keys:
            if k not in required | optional or keys.count(k) > 1:
                raise self._error(ResolutionError, f"bad or repeated argument {k!r} for {name}", {repr(a) for a in sorted(required | optional)}, btok)
        missing = required - set(keys)
        if missing:
            raise self._error(ResolutionError, f"{name} is missing {sorted(missing)}", {repr(a) for a in sorted(missing)}, btok)
        for k, v in args:
            self._resolve_builder_value(k, v, btok)
        self.scope.builder_seen = True
        for u in _builder_unknowns(name, dict(args)):
            self.scope.unknowns[u] = (None, None)
        return BuilderDecl(name, tuple(args), span)

    def builder_arg(self) -> tuple[str, object]:
        if self.tok.kind != "IDENT":
            raise self._error(ParseError, f"unexpected {self._describe(self.tok)}", {"argument name"})
        key = self.tok.text
        self.i += 1
        self.expect("=")
        return key, self.builder_value()

    def builder_value(self):
        if self.at("["):
            self.i += 1
            vals = []
            if not self.at("]"):
                vals.append(self.builder_value())
                while self.at(","):
                    self.i += 1
                    vals.append(self.builder_value())
            self.expect("]")
            return tuple(vals)
        if self.tok.kind == "INT" or self.at("-"):
            return self.integer()
        name = self.ident("name or integer")
        if self.at("*"):
            self.i += 1
            return Product(name, self.ident("known table name"))
        return name

    def _resolve_builder_value(self, key: str, v, tok: Token):
        if isinstance(v, tuple):
            for x in v:
                self._resolve_builder_value(key, x, tok)
        elif isinstance(v, Product):
            for n in (v.left, v.right):
                if n not in self.scope.knowns:
                    raise self._error(ResolutionError, f"undefined known table {n!r}", {"declared known"}, tok)
        elif isinstance(v, str):
            if key in ("group", "codomain"):
                if v not in self.scope.groups:
                    raise self._error(ResolutionError, f"undefined group {v!r}", {"declared group"}, tok)
            elif v not in self.scope.homs:
                raise self._error(ResolutionError, f"undefined hom {v!r}", {"declared hom"}, tok)


def _builder_unknowns(name: str, args: dict) -> list[str]:
    if name in ("knw", "gffe"):
        return ["f"]
    if name in ("wilson", "lsd"):
        n = len(args.get("beta", ()))
        return [f"f{i + 1}" for i in range(n)] + (["a", "b"] if name == "wilson" else ["P", "Q"])
    n = len(args.get("c", ()))
    return [f"f{i + 1}" for i in range(n)]


def parse(text: bytes | str) -> SpecDocument:
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as exc:
            prefix = bytes(text)[: exc.start].decode("utf-8", errors="replace")
            line, col = _line_col(prefix, len(prefix))
            raise LexError("input is not valid UTF-8", line, col, {"UTF-8 text"}) from None
    return Parser(text).parse()


# ---------------------------------------------------------------------------
# canonical printer


def _print_expr(e: Expr) -> str:
    out = []
    for k, (coeff, atom) in enumerate(e.terms):
        body = _print_atom(atom)
        mag = abs(coeff)
        piece = body if mag == 1 else f"{mag}*{body}"
        if k == 0:
            out.append(("-" if coeff < 0 else "") + piece)
        else:
            out.append((" - " if coeff < 0 else " + ") + piece)
    return "".join(out)


def _print_atom(a: Atom) -> str:
    if isinstance(a, Var):
        return a.name
    if isinstance(a, HomApp):
        return f"{a.hom}({_print_expr(a.arg)})"
    return f"({_print_expr(a.inner)})"


def _print_side(s: Side) -> str:
    if not s.monomials:
        return "0"
    out = []
    for k, m in enumerate(s.monomials):
        body = "*".join(f"{a.func}({_print_expr(a.arg)})" for a in m.factors)
        mag = abs(m.coefficient)
        piece = body if mag == 1 else f"{mag}*{body}"
        if k == 0:
            out.append(("-" if m.coefficient < 0 else "") + piece)
        else:
            out.append((" - " if m.coefficient < 0 else " + ") + piece)
    return "".join(out)


def _print_value(v) -> str:
    if isinstance(v, tuple):
        return "[" + ", ".join(_print_value(x) for x in v) + "]"
    if isinstance(v, Product):
        return f"{v.left}*{v.right}"
    return str(v)


def _print_table_value(v) -> str:
    return "(" + ", ".join(str(x) for x in v) + ")" if isinstance(v, tuple) else str(v)


def print_declaration(d: Declaration) -> str:
    if isinstance(d, GroupDecl):
        return f"group {d.name} = " + " x ".join(f"Z{n}" for n in d.moduli) + ";"
    if isinstance(d, RingDecl):
        return f"ring {d.name} = Z{d.modulus};"
    if isinstance(d, HomDecl):
        mat = "[" + ", ".join("[" + ", ".join(str(v) for v in row) + "]" for row in d.matrix) + "]"
        return f"hom {d.name} : {d.domain} -> {d.codomain} = {mat};"
    if isinstance(d, KnownDecl):
        vals = ", ".join(_print_table_value(v) for v in d.values)
        return f"known {d.name} : {d.domain} -> {d.codomain} = table [{vals}];"
    if isinstance(d, UnknownDecl):
        return f"unknown {d.name} : {d.domain} -> {d.codomain};"
    if isinstance(d, EquationDecl):
        typed = f" in {d.group}" if d.group else ""
        return f"equation forall {' '.join(d.variables)}{typed} . {_print_side(d.lhs)} = {_print_side(d.rhs)};"
    if isinstance(d, ClaimDecl):
        return f"claim degree {', '.join(d.names)} <= {d.bound};"
    if isinstance(d, BuilderDecl):
        return f"{d.builder}(" + ", ".join(f"{k}={_print_value(v)}" for k, v in d.args) + ");"
    raise TypeError(f"not a declaration: {d!r}")


def print_document(doc: SpecDocument) -> str:
    return "".join(print_declaration(d) + "\n" for d in doc.declarations)


# ---------------------------------------------------------------------------
# lowering


@dataclass(frozen=True)
class Claim:
    names: tuple[str, ...]
    bound: int

    def __str__(self):
        return f"degree {', '.join(self.names)} <= {self.bound}"


@dataclass(frozen=True)
class Program:
    """A lowered document: the equation (if any), claims and the declared objects."""

    equation: eqs.LinearFunctionalEquation | None
    claims: tuple[Claim, ...]
    groups: dict
    homs: dict
    knowns: dict


def _lower_expr(e: Expr, outer: GroupHom, homs) -> list[tuple[str, GroupHom]]:
    out = []
    for coeff, atom in e.terms:
        scaled = coeff * outer
        if isinstance(atom, Var):
            out.append((atom.name, scaled))
        elif isinstance(atom, HomApp):
            h = homs[atom.hom]
            out.extend(_lower_expr(atom.arg, scaled.compose(h), homs))
        else:
            out.extend(_lower_expr(atom.inner, scaled, homs))
    return out


def _infer_types(d: EquationDecl, groups, homs, signatures) -> dict[str, FinAbGroup]:
    if d.group:
        return {v: groups[d.group] for v in d.variables}
    types: dict[str, FinAbGroup] = {}

    def walk(e: Expr, target: FinAbGroup):
        for _, atom in e.terms:
            if isinstance(atom, Var):
                types.setdefault(atom.name, target)
            elif isinstance(atom, HomApp):
                walk(atom.arg, homs[atom.hom].domain)
            else:
                walk(atom.inner, target)

    for side in (d.lhs, d.rhs):
        for m in side.monomials:
            for a in m.factors:
                walk(a.arg, signatures[a.func][0])
    return types


def _lower_equation(d: EquationDecl, groups, homs, knowns, unknowns) -> tuple[eqs.Clause, FinAbGroup]:
    signatures = {n: (t.domain, t.codomain) for n, t in knowns.items()}
    signatures.update({n: (u.domain, u.codomain) for n, u in unknowns.items()})
    types = _infer_types(d, groups, homs, signatures)
    variables = tuple((v, types[v]) for v in d.variables)
    terms = []
    H = None
    rhs_terms = []  # (coefficient, factors as (table, LinearArg))
    for side, sign in ((d.lhs, 1), (d.rhs, -1)):
        for m in side.monomials:
            lowered = []
            for a in m.factors:
                D, C = signatures[a.func]
                H = H or C
                parts = _lower_expr(a.arg, GroupHom.identity(D), homs)
                lowered.append((a.func, eqs.LinearArg(tuple(parts))))
            if len(lowered) == 1 and lowered[0][0] in unknowns:
                terms.append(eqs.Term(sign * m.coefficient, lowered[0][0], lowered[0][1]))
            else:
                rhs_terms.append((-sign * m.coefficient, lowered))
    clause = eqs.Clause(variables, tuple(terms), None)
    if rhs_terms:
        acc = np.zeros((clause.num_assignments, H.rank), dtype=np.int64)
        assign = eqs._assignment_indices(clause)
        for coeff, factors in rhs_terms:
            if len(factors) > 1 and not isinstance(H, RingZm):
                raise LoweringError(f"products of known tables need a ring codomain, found {H}")
            prod = None
            for name, arg in factors:
                t = knowns[name]
                vals = t.values[eqs._argument_index(eqs.Term(1, name, arg), t.domain, clause, assign)]
                prod = vals if prod is None else prod * vals
            acc += coeff * prod
        clause = eqs.Clause(variables, tuple(terms), MultiFunctionTable(tuple(G for _, G in variables), H, acc))
    return clause, H


def _lower_builder(d: BuilderDecl, groups, homs, knowns) -> eqs.LinearFunctionalEquation:
    a = dict(d.args)

    def hom_list(key):
        return [homs[n] for n in a[key]]

    codomain = groups[a["codomain"]] if "codomain" in a else None
    try:
        if d.builder == "knw":
            return eqs.build_knw(a["p"], a["N"], a.get("w"))
        if d.builder == "gffe":
            return eqs.build_gffe(groups[a["group"]], list(a["coeffs"]), codomain)
        if d.builder == "wilson":
            return eqs.build_wilson(hom_list("beta"), hom_list("delta"), codomain)
        if d.builder == "lsd":
            return eqs.build_lsd(hom_list("beta"), hom_list("delta"), codomain)
        p_pairs = [(knowns[p.left], knowns[p.right]) for p in a.get("p", ())]
        q_pairs = [(knowns[q.left], knowns[q.right]) for q in a.get("q", ())]
        return eqs.build_ghurye_olkin(hom_list("c"), codomain, p_pairs, q_pairs, a.get("r"), a.get("s"))
    except (GroupError, TypeError, KeyError) as exc:
        raise LoweringError(f"{d.builder}: {exc}") from None


def lower(doc: SpecDocument) -> Program:
    groups: dict[str, FinAbGroup] = {}
    homs: dict[str, GroupHom] = {}
    knowns: dict[str, FunctionTable] = {}
    unknowns: dict[str, eqs.Unknown] = {}
    clauses = []
    claims = []
    built = None
    value_group = None
    for d in doc.declarations:
        if isinstance(d, GroupDecl):
            groups[d.name] = FinAbGroup(d.moduli)
        elif isinstance(d, RingDecl):
            groups[d.name] = RingZm(d.modulus)
        elif isinstance(d, HomDecl):
            homs[d.name] = GroupHom(groups[d.domain], groups[d.codomain], d.matrix)
        elif isinstance(d, KnownDecl):
            D, C = groups[d.domain], groups[d.codomain]
            knowns[d.name] = FunctionTable(D, C, [v if isinstance(v, tuple) else (v,) for v in d.values])
        elif isinstance(d, UnknownDecl):
            unknowns[d.name] = eqs.Unknown(d.name, groups[d.domain], groups[d.codomain])
        elif isinstance(d, EquationDecl):
            clause, H = _lower_equation(d, groups, homs, knowns, unknowns)
            if value_group is not None and H != value_group:
                raise LoweringError(f"equations use different value groups {value_group} and {H}")
            value_group = H
            clauses.append(clause)
        elif isinstance(d, ClaimDecl):
            claims.append(Claim(d.names, d.bound))
        elif isinstance(d, BuilderDecl):
            built = _lower_builder(d, groups, homs, knowns)
    equation = None
    if built is not None:
        equation = built
        claims.insert(0, Claim(built.checked_unknowns(), built.claimed_bound))
    elif clauses:
        used = {t.unknown for c in clauses for t in c.terms}
        declared = tuple(u for u in unknowns.values() if u.name in used)
        try:
            equation = eqs.LinearFunctionalEquation(declared, tuple(clauses), name="document")
        except GroupError as exc:
            raise LoweringError(str(exc)) from None
        if claims:
            first = claims[0]
            equation = eqs.LinearFunctionalEquation(
                equation.unknowns, equation.clauses, "document", first.bound, first.names
            )
    for c in claims:
        if equation is not None:
            missing = [n for n in c.names if n not in {u.name for u in equation.unknowns}]
            if missing:
                raise LoweringError(f"claim mentions {missing}, which the equation does not constrain")
    return Program(equation, tuple(claims), groups, homs, knowns)


def load(path) -> tuple[SpecDocument, Program]:
    with open(path, "rb") as fh:
        data = fh.read()
    doc = parse(data)
    return doc, lower(doc)
