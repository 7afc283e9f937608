"""Degrees of generalized polynomial functions.

``f`` has degree at most ``m`` when every ``(m+1)``-fold mixed difference
``Δ_{h_1}⋯Δ_{h_{m+1}} f`` vanishes.  The check recurses on ``Δ_h f`` for every
``h`` in the domain, memoized on table content.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass

import numpy as np

from .abelian import Element, FinAbGroup
from .functions import FunctionTable, difference
from .linalg import IntLinearSystem, solve


class Degree(enum.Enum):
    MINUS_INFINITY = "minus-infinity"
    NOT_POLYNOMIAL = "not-polynomial"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class DegreeReport:
    """Minimal degree of a table.

    ``witness`` is ``(h_1, ..., h_k, x)`` with a nonzero k-fold mixed difference at
    ``x``: for a finite degree ``d`` it has ``k = d`` (so the degree is not smaller);
    for ``NOT_POLYNOMIAL`` it refutes the degree cap.
    """

    degree: int | Degree
    witness: tuple[Element, ...] | None = None

    def at_most(self, m: int) -> bool:
        if self.degree is Degree.MINUS_INFINITY:
            return True
        if self.degree is Degree.NOT_POLYNOMIAL:
            return False
        return self.degree <= m

    def __str__(self):
        return str(self.degree)


_MEMO: dict[tuple[bytes, int], tuple[int, ...] | None] = {}
_MEMO_LIMIT = 500_000


def clear_memo() -> None:
    _MEMO.clear()


def _first_nonzero(f: FunctionTable) -> int | None:
    nz = np.flatnonzero(f.values.any(axis=1))
    return int(nz[0]) if nz.size else None


def _refute(f: FunctionTable, m: int) -> tuple[int, ...] | None:
    """Index witness ``(h_1..h_{m+1}, x)`` against ``deg f <= m``, or ``None`` if it holds."""
    if m < 0:
        x = _first_nonzero(f)
        return None if x is None else (x,)
    key = (f.content_hash, m)
    if key in _MEMO:
        return _MEMO[key]
    result = None
    if not f.is_zero():
        G = f.domain
        for h in range(1, G.order):
            w = _refute(difference(f, G.element(h)), m - 1)
            if w is not None:
                result = (h,) + w
                break
    if len(_MEMO) > _MEMO_LIMIT:
        _MEMO.clear()
    _MEMO[key] = result
    return result


def _witness_elements(f: FunctionTable, w: tuple[int, ...]) -> tuple[Element, ...]:
    G = f.domain
    return tuple(G.element(i) for i in w)


def is_degree_at_most(f: FunctionTable, m: int) -> tuple[bool, tuple[Element, ...] | None]:
    """``(True, None)`` or ``(False, (h_1, ..., h_{m+1}, x))`` with a nonzero mixed difference."""
    if m < 0:
        raise ValueError("degree bound must be >= 0")
    w = _refute(f, m)
    return (True, None) if w is None else (False, _witness_elements(f, w))


def degree_cap(G: FinAbGroup, H: FinAbGroup) -> int:
    """Largest degree a polynomial ``G -> H`` can have.

    The subgroups ``V_k`` spanned by all k-fold mixed differences of ``f`` form a
    chain that strictly decreases until it reaches 0 or stalls for good, and any
    strict chain in ``H^G`` has length at most ``|G| * Ω(|H|)``.
    """
    from sympy import factorint

    omega = sum(factorint(H.order).values()) if H.order > 1 else 0
    return max(G.order * omega, 0)


def degree(f: FunctionTable) -> DegreeReport:
    if f.is_zero():
        return DegreeReport(Degree.MINUS_INFINITY)
    cap = degree_cap(f.domain, f.codomain)
    previous = (_first_nonzero(f),)
    for m in range(cap + 1):
        w = _refute(f, m)
        if w is None:
            return DegreeReport(m, _witness_elements(f, previous))
        previous = w
    return DegreeReport(Degree.NOT_POLYNOMIAL, _witness_elements(f, previous))


def mixed_difference_operator(G: FinAbGroup, hs: tuple[int, ...]) -> dict[int, int]:
    """``Δ_{h_1}⋯Δ_{h_k}`` as ``{shift index: coefficient}``; ``x -> Σ c f(x + shift)``."""
    terms = {0: 1}
    for h in hs:
        nxt: dict[int, int] = {}
        for s, c in terms.items():
            t = int(G.add_index[s, h])
            nxt[t] = nxt.get(t, 0) + c
            nxt[s] = nxt.get(s, 0) - c
        terms = {s: c for s, c in nxt.items() if c}
    return terms


def degree_system(G: FinAbGroup, H: FinAbGroup, d: int) -> IntLinearSystem:
    """Homogeneous system "every (d+1)-fold mixed difference vanishes", one unknown per point of G."""
    ops = {}
    # operators commute, so multisets of increments give every distinct row
    for hs in itertools.combinations_with_replacement(range(1, G.order), d + 1):
        op = mixed_difference_operator(G, hs)
        if op:
            ops[tuple(sorted(op.items()))] = op
    rows = []
    for op in ops.values():
        for x in range(G.order):
            row = np.zeros(G.order, dtype=np.int64)
            for s, c in op.items():
                row[G.add_index[x, s]] += c
            rows.append(row)
    coeffs = np.array(rows, dtype=np.int64).reshape(len(rows), G.order)
    return IntLinearSystem(coeffs, np.zeros((len(rows), H.rank), dtype=np.int64), H)


def degree_submodule_generators(G: FinAbGroup, H: FinAbGroup, d: int) -> list[FunctionTable]:
    """Generators of the subgroup ``{f : G -> H, deg f <= d}``."""
    if d < 0:
        raise ValueError("degree bound must be >= 0")
    cs = solve(degree_system(G, H, d))
    return [FunctionTable(G, H, g) for g in cs.generators]
