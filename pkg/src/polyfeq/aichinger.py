"""Aichinger decompositions ``f(x_1+...+x_{m+1}) = Σ_i g_i(x_1, ..., x̂_i, ..., x_{m+1})``."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .abelian import FinAbGroup
from .errors import CapacityError, TheoremViolation
from .functions import FunctionTable, MultiFunctionTable
from .linalg import IntLinearSystem, solve
from .polynomial import is_degree_at_most

DEFAULT_MAX_ORDER = 4  # bound on m + 1
DEFAULT_MAX_ROWS = 10**6


@dataclass(frozen=True)
class AichingerDecomposition:
    order: int
    parts: tuple[MultiFunctionTable, ...]

    def __post_init__(self):
        if len(self.parts) != self.order + 1:
            raise ValueError(f"order {self.order} needs {self.order + 1} parts, got {len(self.parts)}")


@lru_cache(maxsize=32)
def _tuple_indices(G: FinAbGroup, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Rows of ``G^{m+1}`` (lexicographic, first variable fastest) as per-variable indices, and the sum index."""
    n = G.order
    grids = np.indices((n,) * (m + 1)).reshape(m + 1, -1)[::-1]
    total = np.zeros(grids.shape[1], dtype=np.int64)
    for g in grids:
        total = G.add_index[total, g]
    return grids, total


def aichinger_system(f: FunctionTable, m: int, max_order: int = DEFAULT_MAX_ORDER, max_rows: int = DEFAULT_MAX_ROWS) -> IntLinearSystem:
    if m < 0:
        raise ValueError("order must be >= 0")
    G = f.domain
    rows = G.order ** (m + 1)
    if m + 1 > max_order:
        raise CapacityError(f"order m={m} needs m+1={m + 1} variables, above the bound {max_order}")
    if rows > max_rows:
        raise CapacityError(f"order m={m} over {G} needs {rows} constraint rows, above the limit {max_rows}")
    grids, total = _tuple_indices(G, m)
    part_size = G.order**m
    coeffs = np.zeros((rows, (m + 1) * part_size), dtype=np.int64)
    strides = G.order ** np.arange(m, dtype=np.int64)
    row_ids = np.arange(rows)
    for i in range(m + 1):
        rest = np.delete(grids, i, axis=0)
        flat = (rest * strides[:, None]).sum(axis=0) if m else np.zeros(rows, dtype=np.int64)
        coeffs[row_ids, i * part_size + flat] = 1
    return IntLinearSystem(coeffs, f.values[total], f.codomain)


def find_decomposition(
    f: FunctionTable, m: int, max_order: int = DEFAULT_MAX_ORDER, max_rows: int = DEFAULT_MAX_ROWS
) -> AichingerDecomposition | None:
    sys = aichinger_system(f, m, max_order, max_rows)
    cs = solve(sys)
    if cs.is_empty:
        return None
    G = f.domain
    size = G.order**m
    parts = tuple(
        MultiFunctionTable((G,) * m, f.codomain, cs.particular[i * size : (i + 1) * size]) for i in range(m + 1)
    )
    return AichingerDecomposition(m, parts)


def verify_decomposition(f: FunctionTable, d: AichingerDecomposition) -> bool:
    """Evaluate the defining identity at every point of ``G^{m+1}``."""
    G, m = f.domain, d.order
    for g in d.parts:
        if g.factors != (G,) * m or g.codomain != f.codomain:
            raise ValueError("decomposition parts do not match the function's groups")
    grids, total = _tuple_indices(G, m)
    strides = G.order ** np.arange(m, dtype=np.int64)
    acc = np.zeros((grids.shape[1], f.codomain.rank), dtype=np.int64)
    for i, g in enumerate(d.parts):
        rest = np.delete(grids, i, axis=0)
        flat = (rest * strides[:, None]).sum(axis=0) if m else np.zeros(grids.shape[1], dtype=np.int64)
        acc += g.values[flat]
    return not f.codomain.reduce(acc - f.values[total]).any()


def characterize(f: FunctionTable, m: int, max_order: int = DEFAULT_MAX_ORDER, max_rows: int = DEFAULT_MAX_ROWS) -> bool:
    """``deg f <= m``, cross-checked against the existence of an order-m decomposition."""
    by_degree, _ = is_degree_at_most(f, m)
    dec = find_decomposition(f, m, max_order, max_rows)
    if by_degree != (dec is not None):
        raise TheoremViolation(
            f"degree test says {by_degree} but decomposition search says {dec is not None} for {f} at m={m}"
        )
    if dec is not None and not verify_decomposition(f, dec):
        raise TheoremViolation(f"solver returned an invalid decomposition for {f} at m={m}")
    return by_degree
