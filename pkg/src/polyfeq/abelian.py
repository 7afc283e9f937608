"""Finite abelian groups as products of cyclic groups, their elements and homomorphisms.

Elements of ``Z_{n_1} x ... x Z_{n_k}`` are residue vectors.  Every group has a
fixed mixed-radix enumeration (first factor varies fastest), so an element can
be addressed either by its residues or by its index in ``range(order)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd, prod
from typing import Iterable, Iterator, Sequence

import numpy as np

MAX_ORDER = 10**6

_FACTOR_RE = re.compile(r"Z(\d+)")


class GroupError(ValueError):
    """Structural mismatch between groups, elements or homomorphisms."""


class NotAnAutomorphism(GroupError):
    pass


class FinAbGroup:
    """``Z_{n_1} x ... x Z_{n_k}``; factors of order 1 are dropped.

    >>> G = FinAbGroup([4, 2])
    >>> G.order
    8
    >>> [e.residues for e in G][:3]
    [(0, 0), (1, 0), (2, 0)]
    """

    def __init__(self, moduli: Iterable[int] = ()):
        mods = []
        for n in moduli:
            n = int(n)
            if n < 1:
                raise GroupError(f"cyclic factor order must be >= 1, got {n}")
            if n > 1:
                mods.append(n)
        self.moduli: tuple[int, ...] = tuple(mods)
        self.order: int = prod(self.moduli)
        if self.order > MAX_ORDER:
            raise GroupError(f"group order {self.order} exceeds the limit {MAX_ORDER}")

    @classmethod
    def parse(cls, text: str) -> "FinAbGroup":
        """Parse a literal such as ``"Z4 x Z2 x Z3"``."""
        parts = [p.strip() for p in text.split("x")]
        mods = []
        for p in parts:
            m = _FACTOR_RE.fullmatch(p.replace(" ", ""))
            if m is None:
                raise GroupError(f"bad cyclic factor {p!r} in group literal {text!r}")
            mods.append(int(m.group(1)))
        return cls(mods)

    # identity is by moduli, so a RingZm compares equal to its additive group
    def __eq__(self, other):
        return isinstance(other, FinAbGroup) and self.moduli == other.moduli

    def __hash__(self):
        return hash(("FinAbGroup", self.moduli))

    def __repr__(self):
        return f"FinAbGroup({list(self.moduli)})"

    def __str__(self):
        return " x ".join(f"Z{n}" for n in self.moduli) if self.moduli else "Z1"

    def __len__(self):
        return self.order

    def __iter__(self) -> Iterator["Element"]:
        return iter(self.enumerate())

    @property
    def rank(self) -> int:
        return len(self.moduli)

    @cached_property
    def _mod_array(self) -> np.ndarray:
        return np.array(self.moduli, dtype=np.int64)

    @cached_property
    def strides(self) -> np.ndarray:
        s = np.ones(self.rank, dtype=np.int64)
        for i in range(1, self.rank):
            s[i] = s[i - 1] * self.moduli[i - 1]
        return s

    @cached_property
    def residues(self) -> np.ndarray:
        """``(order, rank)`` array of every element's residues in enumeration order."""
        idx = np.arange(self.order, dtype=np.int64)
        out = np.empty((self.order, self.rank), dtype=np.int64)
        for i, n in enumerate(self.moduli):
            out[:, i] = (idx // self.strides[i]) % n
        out.flags.writeable = False
        return out

    def reduce(self, residues) -> np.ndarray:
        arr = np.asarray(residues, dtype=np.int64)
        return arr % self._mod_array if self.rank else arr

    def index_of(self, residues) -> np.ndarray | int:
        """Enumeration index of (an array of) residue vectors; reduces first."""
        arr = self.reduce(residues)
        if self.rank == 0:
            return 0 if arr.ndim <= 1 else np.zeros(arr.shape[:-1], dtype=np.int64)
        out = arr @ self.strides
        return int(out) if np.ndim(out) == 0 else out

    def element(self, index: int) -> "Element":
        if not 0 <= index < self.order:
            raise IndexError(f"index {index} out of range for {self}")
        return Element(self, tuple(int(v) for v in self.residues[index]))

    def __call__(self, *residues) -> "Element":
        """``G(1, 0)`` or ``G((1, 0))`` builds an element, reducing residues."""
        if len(residues) == 1 and isinstance(residues[0], (tuple, list, np.ndarray)):
            residues = tuple(residues[0])
        if len(residues) != self.rank:
            raise GroupError(f"{self} needs {self.rank} residues, got {len(residues)}")
        return Element(self, tuple(int(r) % n for r, n in zip(residues, self.moduli)))

    def zero(self) -> "Element":
        return Element(self, (0,) * self.rank)

    def enumerate(self) -> list["Element"]:
        return [self.element(i) for i in range(self.order)]

    def generators(self) -> list["Element"]:
        """Unit vectors of the cyclic factors."""
        return [Element(self, tuple(int(i == j) for j in range(self.rank))) for i in range(self.rank)]

    @cached_property
    def add_index(self) -> np.ndarray:
        """``add_index[i, j]`` is the index of ``element(i) + element(j)``."""
        r = self.residues
        return self.index_of(r[:, None, :] + r[None, :, :])

    @cached_property
    def neg_index(self) -> np.ndarray:
        return self.index_of(-self.residues)

    def exponent(self) -> int:
        e = 1
        for n in self.moduli:
            e = e * n // gcd(e, n)
        return e


class RingZm(FinAbGroup):
    """``Z/m`` with residue multiplication; additively it is ``FinAbGroup([m])``."""

    def __init__(self, modulus: int):
        if modulus < 2:
            raise GroupError(f"ring modulus must be >= 2, got {modulus}")
        super().__init__([modulus])
        self.modulus = int(modulus)

    def __repr__(self):
        return f"RingZm({self.modulus})"

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.modulus


@dataclass(frozen=True)
class Element:
    group: FinAbGroup = field(repr=False)
    residues: tuple[int, ...]

    def __post_init__(self):
        if len(self.residues) != self.group.rank or any(
            not 0 <= r < n for r, n in zip(self.residues, self.group.moduli)
        ):
            raise GroupError(f"{self.residues} is not a reduced element of {self.group}")

    def _check(self, other: "Element"):
        if not isinstance(other, Element) or other.group != self.group:
            raise GroupError(f"cannot combine elements of {self.group} and {getattr(other, 'group', other)}")

    def __add__(self, other: "Element") -> "Element":
        self._check(other)
        return self.group(tuple(a + b for a, b in zip(self.residues, other.residues)))

    def __sub__(self, other: "Element") -> "Element":
        self._check(other)
        return self.group(tuple(a - b for a, b in zip(self.residues, other.residues)))

    def __neg__(self) -> "Element":
        return self.group(tuple(-a for a in self.residues))

    def __rmul__(self, k: int) -> "Element":
        return self.group(tuple(int(k) * a for a in self.residues))

    @property
    def index(self) -> int:
        return self.group.index_of(self.residues)

    def is_zero(self) -> bool:
        return not any(self.residues)

    def __str__(self):
        return str(self.residues[0]) if len(self.residues) == 1 else str(self.residues)


def add(a: Element, b: Element) -> Element:
    return a + b


class GroupHom:
    """Homomorphism given by an integer matrix; entry ``[i][j]`` maps factor j into factor i.

    A matrix is only a valid hom when ``a_ij * n_j == 0 (mod m_i)`` for every
    domain modulus ``n_j`` and codomain modulus ``m_i``.
    """

    def __init__(self, domain: FinAbGroup, codomain: FinAbGroup, matrix: Sequence[Sequence[int]]):
        shape = (codomain.rank, domain.rank)
        mat = np.array(matrix, dtype=np.int64)
        if mat.size == 0 and 0 in shape:
            mat = np.zeros(shape, dtype=np.int64)
        elif mat.shape != shape:
            raise GroupError(
                f"hom {domain} -> {codomain} needs a {shape[0]}x{shape[1]} matrix, got shape {mat.shape}"
            )
        for i, m in enumerate(codomain.moduli):
            mat[i] %= m
            for j, n in enumerate(domain.moduli):
                if (int(mat[i, j]) * n) % m:
                    raise GroupError(
                        f"matrix entry [{i}][{j}]={mat[i, j]} is not well defined from Z{n} to Z{m}"
                    )
        mat.flags.writeable = False
        self.domain = domain
        self.codomain = codomain
        self.matrix = mat

    @classmethod
    def identity(cls, G: FinAbGroup) -> "GroupHom":
        return cls(G, G, np.eye(G.rank, dtype=np.int64))

    @classmethod
    def scalar(cls, G: FinAbGroup, k: int) -> "GroupHom":
        """Multiplication by the integer ``k``."""
        return cls(G, G, int(k) * np.eye(G.rank, dtype=np.int64))

    @classmethod
    def zero(cls, G: FinAbGroup, H: FinAbGroup | None = None) -> "GroupHom":
        H = G if H is None else H
        return cls(G, H, np.zeros((H.rank, G.rank), dtype=np.int64))

    @classmethod
    def from_images(cls, domain: FinAbGroup, codomain: FinAbGroup, images: Sequence[Element]) -> "GroupHom":
        """Hom sending the j-th factor generator to ``images[j]``."""
        cols = [img.residues for img in images]
        mat = np.array(cols, dtype=np.int64).T.reshape(codomain.rank, domain.rank)
        return cls(domain, codomain, mat)

    def __eq__(self, other):
        return (
            isinstance(other, GroupHom)
            and self.domain == other.domain
            and self.codomain == other.codomain
            and np.array_equal(self.matrix, other.matrix)
        )

    def __hash__(self):
        return hash((self.domain, self.codomain, self.matrix.tobytes()))

    def __repr__(self):
        return f"GroupHom({self.domain} -> {self.codomain}, {self.matrix.tolist()})"

    def __call__(self, x: Element) -> Element:
        return apply_hom(self, x)

    @cached_property
    def index_map(self) -> np.ndarray:
        """Image index of every domain element, in enumeration order."""
        imgs = self.domain.residues @ self.matrix.T
        out = self.codomain.index_of(imgs)
        return np.broadcast_to(np.asarray(out, dtype=np.int64), (self.domain.order,)).copy()

    def apply_residues(self, residues: np.ndarray) -> np.ndarray:
        return self.codomain.reduce(np.asarray(residues, dtype=np.int64) @ self.matrix.T)

    def compose(self, inner: "GroupHom") -> "GroupHom":
        """``self ∘ inner``."""
        if inner.codomain != self.domain:
            raise GroupError(f"cannot compose {self} after {inner}")
        return GroupHom(inner.domain, self.codomain, self.matrix @ inner.matrix)

    def __matmul__(self, inner: "GroupHom") -> "GroupHom":
        return self.compose(inner)

    def _check_parallel(self, other: "GroupHom"):
        if self.domain != other.domain or self.codomain != other.codomain:
            raise GroupError(f"homs {self} and {other} are not parallel")

    def __add__(self, other: "GroupHom") -> "GroupHom":
        self._check_parallel(other)
        return GroupHom(self.domain, self.codomain, self.matrix + other.matrix)

    def __sub__(self, other: "GroupHom") -> "GroupHom":
        self._check_parallel(other)
        return GroupHom(self.domain, self.codomain, self.matrix - other.matrix)

    def __neg__(self) -> "GroupHom":
        return GroupHom(self.domain, self.codomain, -self.matrix)

    def __rmul__(self, k: int) -> "GroupHom":
        return GroupHom(self.domain, self.codomain, int(k) * self.matrix)

    def is_identity(self) -> bool:
        return self == GroupHom.identity(self.domain) if self.domain == self.codomain else False

    def is_zero(self) -> bool:
        return not self.matrix.any()

    def scalar_value(self) -> int | None:
        """``k`` when this is multiplication by ``k`` on a cyclic group, else ``None``."""
        if self.domain == self.codomain and self.domain.rank == 1:
            return int(self.matrix[0, 0])
        return None


def apply_hom(c: GroupHom, x: Element) -> Element:
    if x.group != c.domain:
        raise GroupError(f"{x} is not in the domain {c.domain} of {c}")
    return c.codomain(tuple(int(v) for v in c.apply_residues(np.array(x.residues))))


def is_automorphism(c: GroupHom) -> bool:
    if c.domain != c.codomain:
        return False
    G = c.domain
    if G.order == 1:
        return True
    # kernel check, stopping at the first nonzero element mapped to zero
    zero = 0
    for start in range(1, G.order, 4096):
        block = G.residues[start : start + 4096]
        if np.any(G.index_of(block @ c.matrix.T) == zero):
            return False
    return True


def invert_automorphism(c: GroupHom) -> GroupHom:
    """The inverse as a matrix hom: its j-th column is the preimage of the j-th generator."""
    if not is_automorphism(c):
        raise NotAnAutomorphism(f"{c} is not an automorphism")
    G = c.domain
    inverse_index = np.empty(G.order, dtype=np.int64)
    inverse_index[c.index_map] = np.arange(G.order)
    preimages = [G.element(int(inverse_index[g.index])) for g in G.generators()]
    return GroupHom.from_images(G, G, preimages)


def enumerate_group(G: FinAbGroup) -> list[Element]:
    return G.enumerate()


def product_group(factors: Sequence[FinAbGroup]) -> FinAbGroup:
    """Direct product whose enumeration lists the first factor fastest."""
    return FinAbGroup([n for F in factors for n in F.moduli])
