"""Dense value tables for functions between finite abelian groups, and difference calculus."""

from __future__ import annotations

import hashlib
from functools import cached_property, reduce
from typing import Callable, Sequence

import numpy as np

from .abelian import Element, FinAbGroup, GroupError, GroupHom, RingZm, product_group


class FunctionTable:
    """A total function ``domain -> codomain`` stored as residues in enumeration order.

    ``values`` has shape ``(domain.order, codomain.rank)``.  Tables are immutable
    and compare by pointwise equality.
    """

    def __init__(self, domain: FinAbGroup, codomain: FinAbGroup, values):
        arr = np.array(values, dtype=np.int64)
        if arr.ndim == 1 and codomain.rank == 1:
            arr = arr[:, None]
        if arr.ndim == 1 and codomain.rank == 0:
            arr = arr.reshape(-1, 0)
        if arr.shape != (domain.order, codomain.rank):
            raise GroupError(
                f"table for {domain} -> {codomain} needs shape {(domain.order, codomain.rank)}, got {arr.shape}"
            )
        arr = codomain.reduce(arr)
        arr.flags.writeable = False
        self.domain = domain
        self.codomain = codomain
        self.values = arr

    # -- construction -------------------------------------------------------
    @classmethod
    def from_callable(cls, domain: FinAbGroup, codomain: FinAbGroup, fn: Callable[[Element], object]):
        rows = []
        for x in domain:
            v = fn(x)
            if isinstance(v, Element):
                v = v.residues
            rows.append(v if isinstance(v, (tuple, list)) else (v,))
        return cls(domain, codomain, np.array(rows, dtype=np.int64).reshape(domain.order, codomain.rank))

    @classmethod
    def zero(cls, domain: FinAbGroup, codomain: FinAbGroup):
        return cls(domain, codomain, np.zeros((domain.order, codomain.rank), dtype=np.int64))

    @classmethod
    def constant(cls, domain: FinAbGroup, codomain: FinAbGroup, value):
        v = value.residues if isinstance(value, Element) else np.atleast_1d(value)
        return cls(domain, codomain, np.tile(np.asarray(v, dtype=np.int64), (domain.order, 1)))

    def _like(self, values) -> "FunctionTable":
        return FunctionTable(self.domain, self.codomain, values)

    # -- evaluation ---------------------------------------------------------
    def __call__(self, x: Element) -> Element:
        if x.group != self.domain:
            raise GroupError(f"{x} is not in {self.domain}")
        return self.at(x.index)

    def at(self, index: int) -> Element:
        return Element(self.codomain, tuple(int(v) for v in self.values[index]))

    def to_list(self) -> list:
        """Plain values: ints for a cyclic codomain, tuples otherwise."""
        if self.codomain.rank == 1:
            return [int(v) for v in self.values[:, 0]]
        return [tuple(int(v) for v in row) for row in self.values]

    # -- comparison and hashing ---------------------------------------------
    def __eq__(self, other):
        return (
            isinstance(other, FunctionTable)
            and self.domain == other.domain
            and self.codomain == other.codomain
            and np.array_equal(self.values, other.values)
        )

    def __hash__(self):
        return hash(self.content_hash)

    @cached_property
    def content_hash(self) -> bytes:
        h = hashlib.blake2b(digest_size=16)
        h.update(repr((self.domain.moduli, self.codomain.moduli)).encode())
        h.update(np.ascontiguousarray(self.values).tobytes())
        return h.digest()

    def __repr__(self):
        return f"FunctionTable({self.domain} -> {self.codomain}, {self.to_list()})"

    def is_zero(self) -> bool:
        return not self.values.any()

    # -- group structure on tables ------------------------------------------
    def _check_same(self, other: "FunctionTable"):
        if not isinstance(other, FunctionTable) or (self.domain, self.codomain) != (other.domain, other.codomain):
            raise GroupError("tables have different domain or codomain")

    def __add__(self, other):
        self._check_same(other)
        return self._like(self.values + other.values)

    def __sub__(self, other):
        self._check_same(other)
        return self._like(self.values - other.values)

    def __neg__(self):
        return self._like(-self.values)

    def __rmul__(self, k: int):
        return self._like(int(k) * self.values)

    # -- operators ----------------------------------------------------------
    def translate(self, h: Element) -> "FunctionTable":
        return translate(self, h)

    def difference(self, h: Element) -> "FunctionTable":
        return difference(self, h)


class MultiFunctionTable(FunctionTable):
    """A function ``G_1 x ... x G_m -> H`` over the product enumeration (first argument fastest)."""

    def __init__(self, factors: Sequence[FinAbGroup], codomain: FinAbGroup, values):
        self.factors = tuple(factors)
        super().__init__(product_group(self.factors), codomain, values)

    @property
    def arity(self) -> int:
        return len(self.factors)

    def _like(self, values):
        return MultiFunctionTable(self.factors, self.codomain, values)

    @cached_property
    def _strides(self) -> np.ndarray:
        orders = [F.order for F in self.factors]
        return np.array([int(np.prod(orders[:i])) for i in range(len(orders))], dtype=np.int64)

    def flat_index(self, arg_indices: Sequence) -> np.ndarray | int:
        """Flat table index from per-argument enumeration indices (arrays broadcast)."""
        if not self.factors:
            return 0
        return sum(np.asarray(a, dtype=np.int64) * s for a, s in zip(arg_indices, self._strides))

    def evaluate(self, *args: Element) -> Element:
        if len(args) != self.arity or any(a.group != F for a, F in zip(args, self.factors)):
            raise GroupError(f"expected arguments in {[str(F) for F in self.factors]}")
        return self.at(int(self.flat_index([a.index for a in args])))

    def __repr__(self):
        args = " x ".join(f"({F})" for F in self.factors) or "()"
        return f"MultiFunctionTable({args} -> {self.codomain}, {self.to_list()})"


def _shift_index(G: FinAbGroup, h: Element) -> np.ndarray:
    if h.group != G:
        raise GroupError(f"increment {h} is not in {G}")
    return G.add_index[:, h.index] if G.order <= 2048 else G.index_of(G.residues + np.array(h.residues))


def translate(f: FunctionTable, h: Element) -> FunctionTable:
    """``x -> f(x + h)``."""
    return f._like(f.values[_shift_index(f.domain, h)])


def difference(f: FunctionTable, h: Element) -> FunctionTable:
    """``x -> f(x + h) - f(x)``."""
    return f._like(f.values[_shift_index(f.domain, h)] - f.values)


def mixed_difference(f: FunctionTable, hs: Sequence[Element]) -> FunctionTable:
    return reduce(difference, hs, f)


def compose_with_hom(f: FunctionTable, c: GroupHom) -> FunctionTable:
    """``x -> f(c(x))``."""
    if c.codomain != f.domain:
        raise GroupError(f"{c} does not land in the domain {f.domain}")
    return FunctionTable(c.domain, f.codomain, f.values[c.index_map])


def pointwise_ring_product(u: FunctionTable, v: FunctionTable) -> FunctionTable:
    for t in (u, v):
        if not isinstance(t.codomain, RingZm):
            raise GroupError(f"codomain {t.codomain} is not a ring")
    u._check_same(v)
    return u._like(u.values * v.values)


def outer_ring_product(u: FunctionTable, v: FunctionTable) -> MultiFunctionTable:
    """``(x, y) -> u(x) * v(y)`` as a two-argument table."""
    for t in (u, v):
        if not isinstance(t.codomain, RingZm):
            raise GroupError(f"codomain {t.codomain} is not a ring")
    if u.codomain != v.codomain:
        raise GroupError("ring products need a common ring")
    prod = (v.values[:, 0][:, None] * u.values[:, 0][None, :]).reshape(-1, 1)
    return MultiFunctionTable((u.domain, v.domain), u.codomain, prod)


def swap_arguments(t: MultiFunctionTable) -> MultiFunctionTable:
    """``(x, y) -> t(y, x)`` for a two-argument table."""
    if t.arity != 2:
        raise GroupError("swap needs a two-argument table")
    A, B = t.factors
    vals = t.values.reshape(B.order, A.order, -1).transpose(1, 0, 2).reshape(-1, t.codomain.rank)
    return MultiFunctionTable((B, A), t.codomain, vals)
