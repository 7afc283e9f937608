"""Exact linear systems with integer coefficients and unknowns in a finite abelian group.

Each cyclic factor ``Z_m`` of the value group is solved separately through the
Howell normal form of ``[A^T | I]`` over ``Z/m``.  The rows of that form whose
left block vanishes span the kernel of ``A`` (the Howell property guarantees
the span is complete even with zero divisors), and reducing ``(b, 0)`` by the
remaining rows yields a particular solution.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import Sequence

import numpy as np

from .abelian import Element, FinAbGroup, GroupError


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """``(g, s, t)`` with ``s*a + t*b == g == gcd(a, b)``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    return a, s0, t0


def unit_normalizer(a: int, N: int) -> int:
    """A unit ``u`` mod ``N`` with ``u*a == gcd(a, N) (mod N)``."""
    a %= N
    g, s, _ = xgcd(a, N)
    if g == 0:
        return 1
    step = N // g
    u = s % N
    while gcd(u, N) != 1:
        u = (u + step) % N
    return u


def howell_form(A: np.ndarray, N: int) -> np.ndarray:
    """Howell normal form of the row span of ``A`` over ``Z/N`` (zero rows dropped).

    Pivots divide ``N`` and entries above a pivot are reduced into ``[0, pivot)``,
    so equal row spans give identical outputs.
    """
    A = np.asarray(A, dtype=np.int64) % N
    nrows, ncols = A.shape
    # every pivot appends at most one annihilator row
    W = np.zeros((nrows + ncols, ncols), dtype=np.int64)
    W[:nrows] = A
    total = nrows
    r = 0
    for c in range(ncols):
        if r >= total:
            break
        below = r + np.flatnonzero(W[r:total, c])
        if below.size == 0:
            continue
        if below[0] != r:
            W[[r, below[0]]] = W[[below[0], r]]
        for i in below:
            if i == r:
                continue
            a, b = int(W[r, c]), int(W[i, c])
            if b == 0:
                continue
            g, s, t = xgcd(a, b)
            row_r, row_i = W[r].copy(), W[i].copy()
            W[r] = (s * row_r + t * row_i) % N
            W[i] = ((-b // g) * row_r + (a // g) * row_i) % N
        p = int(W[r, c])
        if p == 0:
            continue
        u = unit_normalizer(p, N)
        if u != 1:
            W[r] = (W[r] * u) % N
        p = int(W[r, c])
        for i in range(r):
            q = int(W[i, c]) // p
            if q:
                W[i] = (W[i] - q * W[r]) % N
        ann = (W[r] * (N // p)) % N
        if ann.any():
            W[total] = ann
            total += 1
        r += 1
    H = W[:r]
    return H[H.any(axis=1)] if r else np.zeros((0, ncols), dtype=np.int64)


def _pivot(row: np.ndarray) -> int:
    return int(np.flatnonzero(row)[0])


def reduce_by_rows(v: np.ndarray, rows: np.ndarray, N: int) -> np.ndarray:
    """Reduce ``v`` by echelon ``rows`` with pivot-dividing quotients (canonical remainder)."""
    v = np.asarray(v, dtype=np.int64) % N
    for row in rows:
        c = _pivot(row)
        q = int(v[c]) // int(row[c])
        if q:
            v = (v - q * row) % N
    return v


@dataclass(frozen=True)
class _Factorization:
    """Howell data for one coefficient matrix modulo one ``N``."""

    N: int
    num_rows: int
    num_unknowns: int
    image_rows: np.ndarray  # rows with a nonzero left block
    kernel_rows: np.ndarray  # right blocks of rows with a zero left block


@lru_cache(maxsize=128)
def _factor_cached(key: bytes, shape: tuple[int, int], N: int) -> _Factorization:
    A = np.frombuffer(key, dtype=np.int64).reshape(shape)
    rows, n = shape
    W = np.concatenate([A.T % N, np.eye(n, dtype=np.int64)], axis=1)
    H = howell_form(W, N)
    left_zero = ~H[:, :rows].any(axis=1) if rows else np.ones(len(H), dtype=bool)
    return _Factorization(N, rows, n, H[~left_zero], H[left_zero][:, rows:])


def _factor(A: np.ndarray, N: int) -> _Factorization:
    A = np.ascontiguousarray(A % N, dtype=np.int64)
    return _factor_cached(A.tobytes(), A.shape, N)


def _particular(fac: _Factorization, b: np.ndarray) -> np.ndarray | None:
    N, rows, n = fac.N, fac.num_rows, fac.num_unknowns
    v = np.concatenate([np.asarray(b, dtype=np.int64) % N, np.zeros(n, dtype=np.int64)])
    for row in fac.image_rows:
        c = _pivot(row)
        p = int(row[c])
        if v[c] % p:
            return None
        q = int(v[c]) // p
        if q:
            v = (v - q * row) % N
    if v[:rows].any():
        return None
    x = (-v[rows:]) % N
    return reduce_by_rows(x, fac.kernel_rows, N)


@dataclass(frozen=True)
class IntLinearSystem:
    """``coeffs @ x == rhs`` with ``x`` a vector of elements of ``value_group``.

    ``coeffs`` is ``(rows, num_unknowns)``; ``rhs`` is ``(rows, value_group.rank)``.
    """

    coeffs: np.ndarray
    rhs: np.ndarray
    value_group: FinAbGroup

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=np.int64)
        if coeffs.ndim != 2:
            raise GroupError("coefficient matrix must be two dimensional")
        rhs = np.asarray(self.rhs, dtype=np.int64).reshape(coeffs.shape[0], self.value_group.rank)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "rhs", self.value_group.reduce(rhs))

    @classmethod
    def from_rows(cls, num_unknowns: int, rows: Sequence[tuple[Sequence[int], Element]], value_group: FinAbGroup):
        coeffs = np.zeros((len(rows), num_unknowns), dtype=np.int64)
        rhs = np.zeros((len(rows), value_group.rank), dtype=np.int64)
        for i, (c, b) in enumerate(rows):
            if len(c) != num_unknowns:
                raise GroupError(f"row {i} has {len(c)} coefficients, expected {num_unknowns}")
            if b.group != value_group:
                raise GroupError(f"row {i} right-hand side is not in {value_group}")
            coeffs[i] = c
            rhs[i] = b.residues
        return cls(coeffs, rhs, value_group)

    @property
    def num_unknowns(self) -> int:
        return self.coeffs.shape[1]

    @property
    def num_rows(self) -> int:
        return self.coeffs.shape[0]

    @property
    def rows(self) -> list[tuple[list[int], Element]]:
        return [
            (row.tolist(), Element(self.value_group, tuple(int(v) for v in b)))
            for row, b in zip(self.coeffs, self.rhs)
        ]

    def residual(self, x: np.ndarray) -> np.ndarray:
        """``coeffs @ x - rhs`` reduced; ``x`` is ``(num_unknowns, rank)``."""
        x = np.asarray(x, dtype=np.int64).reshape(self.num_unknowns, self.value_group.rank)
        return self.value_group.reduce(self.coeffs @ x - self.rhs)

    def satisfied_by(self, x) -> bool:
        return not self.residual(x).any()


def deduplicate(sys: IntLinearSystem) -> IntLinearSystem | None:
    """Drop repeated and zero coefficient rows; ``None`` when repeated rows disagree.

    Uniqueness is by coefficient row only, so the reduced matrix does not depend
    on the right-hand side.
    """
    if sys.num_rows == 0:
        return sys
    uniq, inverse = np.unique(sys.coeffs, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    first = np.full(len(uniq), -1, dtype=np.int64)
    first[inverse[::-1]] = np.arange(sys.num_rows)[::-1]
    rhs = sys.rhs[first]
    if not np.array_equal(rhs[inverse], sys.rhs):
        return None
    keep = uniq.any(axis=1)
    if np.any(rhs[~keep]):
        return None
    return IntLinearSystem(uniq[keep], rhs[keep], sys.value_group)


@dataclass(frozen=True)
class ModuleCoset:
    """``particular + span(generators)``; ``particular is None`` for the empty set.

    ``particular`` is ``(n, rank)`` and ``generators`` is ``(g, n, rank)``.  Each
    generator is supported on a single cyclic factor of the value group.
    """

    system: IntLinearSystem = field(repr=False)
    particular: np.ndarray | None
    generators: np.ndarray
    kernel_rows: tuple[np.ndarray, ...] = field(repr=False)

    @property
    def is_empty(self) -> bool:
        return self.particular is None

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def num_unknowns(self) -> int:
        return self.system.num_unknowns

    def _elements(self, vec: np.ndarray) -> list[Element]:
        G = self.system.value_group
        return [Element(G, tuple(int(v) for v in row)) for row in vec]

    def particular_elements(self) -> list[Element] | None:
        return None if self.particular is None else self._elements(self.particular)

    def generator_elements(self) -> list[list[Element]]:
        return [self._elements(g) for g in self.generators]

    def size(self) -> int:
        """Number of solutions."""
        if self.particular is None:
            return 0
        total = 1
        for N, K in zip(self.system.value_group.moduli, self.kernel_rows):
            for row in K:
                total *= N // int(row[_pivot(row)])
        return total

    def __iter__(self):
        """Every solution, as ``(n, rank)`` arrays; only sensible for small cosets."""
        if self.particular is None:
            return
        G = self.system.value_group
        per_factor = []
        for t, (N, K) in enumerate(zip(G.moduli, self.kernel_rows)):
            span = {tuple([0] * self.num_unknowns)}
            for row in K:
                span = {tuple((np.array(s) + k * row) % N) for s in span for k in range(N // int(row[_pivot(row)]))}
            per_factor.append(sorted(span))
        for combo in itertools.product(*per_factor):
            x = self.particular.copy()
            for t, comp in enumerate(combo):
                x[:, t] = (x[:, t] + np.array(comp, dtype=np.int64)) % G.moduli[t]
            yield x


def solve(sys: IntLinearSystem) -> ModuleCoset:
    G = sys.value_group
    n = sys.num_unknowns
    empty = ModuleCoset(sys, None, np.zeros((0, n, G.rank), dtype=np.int64), tuple())
    reduced = deduplicate(sys)
    if reduced is None:
        return empty
    particular = np.zeros((n, G.rank), dtype=np.int64)
    gens = []
    kernels = []
    for t, N in enumerate(G.moduli):
        fac = _factor(reduced.coeffs, N)
        x = _particular(fac, reduced.rhs[:, t])
        if x is None:
            return empty
        particular[:, t] = x
        kernels.append(fac.kernel_rows)
        for row in fac.kernel_rows:
            g = np.zeros((n, G.rank), dtype=np.int64)
            g[:, t] = row
            gens.append(g)
    gens_arr = np.array(gens, dtype=np.int64).reshape(len(gens), n, G.rank)
    return ModuleCoset(sys, particular, gens_arr, tuple(kernels))


def coset_contains(cs: ModuleCoset, v) -> bool:
    """Membership decided from the generators alone, without consulting the system rows."""
    G = cs.system.value_group
    if isinstance(v, (list, tuple)) and v and isinstance(v[0], Element):
        v = np.array([e.residues for e in v], dtype=np.int64)
    v = np.asarray(v, dtype=np.int64).reshape(-1, G.rank) if G.rank else np.zeros((len(v), 0), dtype=np.int64)
    if v.shape[0] != cs.num_unknowns:
        raise GroupError(f"vector has {v.shape[0]} entries, expected {cs.num_unknowns}")
    if cs.particular is None:
        return False
    for t, (N, K) in enumerate(zip(G.moduli, cs.kernel_rows)):
        d = (v[:, t] - cs.particular[:, t]) % N
        if reduce_by_rows(d, K, N).any():
            return False
    return True
