"""Subspaces of small binary vector spaces and their composition tables.

Vectors (x0, .., x_{j-1}) over GF(2) are keyed as x0 + 2*x1 + 4*x2 + .., and a
subspace of F_2^j is stored as a bitmask over those 2^j keys.  For j = 3 there
are 16 subspaces; their canonical order is ascending mask value.

The composition tables describe how recoverable-pattern subspaces of two
half-length blocks combine through one transform level.  A pattern pair
(p, q) in s x t induces the length-5 window vector

    r = (p0+q0, p0+p1+q0, p1+q1, p1+p2+q1, p2+q2)

on the parent block; the table for odd phases collects (r0, r1, r2) over pairs
with r3 = r4 = 0, the table for even phases collects (r1, r2, r3) over pairs
with r4 = 0.  Both collections are linear images of a subspace, hence land
back in the 16-subspace lattice.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

__all__ = [
    "Subspace",
    "enumerate_subspaces",
    "subspace_index",
    "right_edge_lift",
    "left_edge_shift",
    "TauTables",
    "build_tau_tables",
]


def _vec(key: int, j: int) -> tuple[int, ...]:
    return tuple((key >> t) & 1 for t in range(j))


@dataclass(frozen=True)
class Subspace:
    """Linear subspace of F_2^j as a key bitmask."""

    j: int
    mask: int

    def __post_init__(self) -> None:
        size = 1 << self.j
        if self.j < 0 or self.j > 6:
            raise ValueError(f"ambient dimension {self.j} out of range")
        if self.mask < 0 or self.mask >> size:
            raise ValueError("mask has bits outside the ambient space")
        if not self.mask & 1:
            raise ValueError("subspace must contain the zero vector")
        keys = self.keys()
        for a in keys:
            for b in keys:
                if not (self.mask >> (a ^ b)) & 1:
                    raise ValueError("key set is not closed under addition")

    @classmethod
    def from_vectors(cls, j: int, vectors: Iterable[Iterable[int]]) -> "Subspace":
        """Span of the given vectors inside F_2^j."""
        gens = []
        for v in vectors:
            coords = tuple(v)
            if len(coords) != j or any(c not in (0, 1) for c in coords):
                raise ValueError(f"bad vector {coords!r} for dimension {j}")
            gens.append(sum(c << t for t, c in enumerate(coords)))
        members = {0}
        for g in gens:
            members |= {m ^ g for m in members}
        mask = 0
        for k in members:
            mask |= 1 << k
        return cls(j, mask)

    def keys(self) -> tuple[int, ...]:
        return tuple(k for k in range(1 << self.j) if (self.mask >> k) & 1)

    def vectors(self) -> tuple[tuple[int, ...], ...]:
        return tuple(_vec(k, self.j) for k in self.keys())

    def contains_key(self, key: int) -> bool:
        if not 0 <= key < (1 << self.j):
            raise ValueError(f"key {key} outside F_2^{self.j}")
        return bool((self.mask >> key) & 1)

    def contains(self, vector: Iterable[int]) -> bool:
        coords = tuple(vector)
        if len(coords) != self.j:
            raise ValueError("vector dimension mismatch")
        return self.contains_key(sum(c << t for t, c in enumerate(coords)))

    def dim(self) -> int:
        return self.mask.bit_count().bit_length() - 1


@lru_cache(maxsize=None)
def enumerate_subspaces(j: int) -> tuple[Subspace, ...]:
    """All subspaces of F_2^j in canonical (ascending mask) order."""
    if not 1 <= j <= 3:
        raise ValueError(f"supported ambient dimensions are 1..3, got {j}")
    size = 1 << j
    out = []
    for mask in range(1, 1 << size, 2):
        keys = [k for k in range(size) if (mask >> k) & 1]
        if all((mask >> (a ^ b)) & 1 for a in keys for b in keys):
            out.append(Subspace(j, mask))
    return tuple(out)


@lru_cache(maxsize=None)
def subspace_index(j: int) -> dict[int, int]:
    """Canonical index of each subspace mask in F_2^j."""
    return {s.mask: i for i, s in enumerate(enumerate_subspaces(j))}


def right_edge_lift(s: Subspace, extra: int) -> Subspace:
    """Lift to j+extra dimensions with the trailing coordinates free.

    Result is {(p, q) : p in s, q arbitrary in F_2^extra}.
    """
    if extra < 0:
        raise ValueError(f"negative lift {extra}")
    mask = 0
    for q in range(1 << extra):
        mask |= s.mask << (q << s.j)
    return Subspace(s.j + extra, mask)


def left_edge_shift(s: Subspace) -> Subspace:
    """Shift right by one coordinate: {(0, p0, p1) : (p0, p1, 0) in s}."""
    if s.j != 3:
        raise ValueError("shift is defined on the 3-dimensional lattice")
    mask = 0
    for k in range(4):
        if (s.mask >> k) & 1:
            mask |= 1 << (2 * k)
    return Subspace(3, mask)


@dataclass(frozen=True)
class TauTables:
    """Pairwise composition tables over the canonical S_3 order.

    ``even[i, j]`` / ``odd[i, j]`` hold the canonical index of the subspace
    obtained by composing subspaces with canonical indices i and j at an even
    or odd parent phase.
    """

    even: np.ndarray
    odd: np.ndarray

    def for_phase(self, phi: int) -> np.ndarray:
        return self.odd if phi % 2 else self.even


def _window_vector(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    return (
        p[0] ^ q[0],
        p[0] ^ p[1] ^ q[0],
        p[1] ^ q[1],
        p[1] ^ p[2] ^ q[1],
        p[2] ^ q[2],
    )


@lru_cache(maxsize=None)
def build_tau_tables() -> TauTables:
    lattice = enumerate_subspaces(3)
    index = subspace_index(3)
    even = np.zeros((16, 16), dtype=np.int8)
    odd = np.zeros((16, 16), dtype=np.int8)
    for i, s in enumerate(lattice):
        pvecs = s.vectors()
        for k, t in enumerate(lattice):
            qvecs = t.vectors()
            odd_keys = set()
            even_keys = set()
            for p in pvecs:
                for q in qvecs:
                    r = _window_vector(p, q)
                    if r[4] == 0:
                        even_keys.add(r[1] | (r[2] << 1) | (r[3] << 2))
                        if r[3] == 0:
                            odd_keys.add(r[0] | (r[1] << 1) | (r[2] << 2))
            even_mask = 0
            for key in even_keys:
                even_mask |= 1 << key
            odd_mask = 0
            for key in odd_keys:
                odd_mask |= 1 << key
            even[i, k] = index[even_mask]
            odd[i, k] = index[odd_mask]
    even.setflags(write=False)
    odd.setflags(write=False)
    return TauTables(even=even, odd=odd)
