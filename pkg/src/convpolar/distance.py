"""Subchannel weight tables and minimum-distance lower bounds.

For each decoding phase i of the length-n transform, d[i] is the minimum
Hamming weight over codewords whose first i input symbols are zero and whose
symbol i equals one, computed exactly in O(n) table updates rather than by
coset enumeration.  The recursion tracks, per phase, a 16-entry table over
the lattice of subspaces of F_2^3: entry s is the minimum number of erased
codeword coordinates after which the still-recoverable window patterns are
exactly s.  Tables at consecutive levels combine through the pairwise
composition tables of :mod:`convpolar.subspaces`, plus a shifted boundary
table standing in for the phase before zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .subspaces import (
    Subspace,
    build_tau_tables,
    enumerate_subspaces,
    left_edge_shift,
    right_edge_lift,
    subspace_index,
)

__all__ = [
    "DeltaTable",
    "SubchannelWeights",
    "base_table",
    "left_edge_table",
    "compute_delta_tables",
    "compute_weights",
    "min_distance_bound",
    "arikan_row_weight",
]

_MAX_LEVELS = 24
_CHUNK_ROWS = 1 << 13

_LATTICE = enumerate_subspaces(3)
_FULL_IDX = subspace_index(3)[(1 << 8) - 1]
# canonical indices of subspaces not containing (1, 0, 0), i.e. key 1
_DECIDABLE_COLS = np.array(
    [i for i, s in enumerate(_LATTICE) if not s.contains_key(1)], dtype=np.intp
)


@dataclass(frozen=True, eq=False)
class DeltaTable:
    """Minimum-erasure table over the canonical 16-subspace order."""

    phi: int
    entries: np.ndarray

    def __post_init__(self) -> None:
        e = np.asarray(self.entries, dtype=np.float64)
        if e.shape != (16,):
            raise ValueError(f"expected 16 entries, got shape {e.shape}")
        if np.any(e < 0) or np.any(np.isnan(e)):
            raise ValueError("entries must be nonnegative (inf allowed)")
        if not np.isfinite(e).any():
            raise ValueError("table must have at least one finite entry")
        if self.phi >= 0:
            if e[_FULL_IDX] != e.min():
                raise ValueError("full-space entry must be the table minimum")
        else:
            # boundary patterns have a forced leading zero, so only subspaces
            # of the trailing-free space are realizable
            shifted_range = subspace_index(3)[85]
            bad = [
                i
                for i in range(16)
                if np.isfinite(e[i]) and (_LATTICE[i].mask | 85) != 85
            ]
            if bad or not np.isfinite(e[shifted_range]):
                raise ValueError("boundary table entries outside the shifted range")
        object.__setattr__(self, "entries", e)

    def value(self, s: Subspace) -> float:
        return float(self.entries[subspace_index(3)[s.mask]])


@dataclass(frozen=True, eq=False)
class SubchannelWeights:
    """Exact per-phase minimum weights for the length 2**m transform."""

    m: int
    d: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        d = np.asarray(self.d, dtype=np.int64)
        n = 1 << self.m
        if d.shape != (n,):
            raise ValueError(f"expected {n} weights, got shape {d.shape}")
        if d[0] != 1 or np.any(d < 1) or np.any(d > n):
            raise ValueError("weights out of range")
        object.__setattr__(self, "d", d)

    @property
    def n(self) -> int:
        return 1 << self.m


def base_table() -> np.ndarray:
    """Length-1 block table over S_3, lifted from the 1-dimensional lattice.

    A single coordinate is recoverable at cost 0 if nothing is erased and
    unrecoverable after its only coordinate is erased, giving {full: 0,
    trailing-free: 1} after lifting the two spare window coordinates.
    """
    idx = subspace_index(3)
    one = enumerate_subspaces(1)
    t = np.full(16, np.inf)
    for s1, cost in ((one[1], 0.0), (one[0], 1.0)):
        t[idx[right_edge_lift(s1, 2).mask]] = cost
    return t


@lru_cache(maxsize=None)
def _shift_index() -> np.ndarray:
    idx = subspace_index(3)
    return np.array([idx[left_edge_shift(s).mask] for s in _LATTICE], dtype=np.intp)


def left_edge_table(table: np.ndarray) -> np.ndarray:
    """Boundary table for the virtual phase -1 from the phase-0 table."""
    t = np.asarray(table, dtype=np.float64)
    if t.shape != (16,):
        raise ValueError(f"expected 16 entries, got shape {t.shape}")
    out = np.full(16, np.inf)
    np.minimum.at(out, _shift_index(), t)
    return out


@lru_cache(maxsize=None)
def _parity_reducer(parity: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Sort order, segment starts and segment targets for one tau table."""
    tau = build_tau_tables()
    flat = (tau.odd if parity else tau.even).ravel().astype(np.intp)
    order = np.argsort(flat, kind="stable")
    tgt = flat[order]
    starts = np.flatnonzero(np.r_[True, tgt[1:] != tgt[:-1]])
    return order, starts, tgt[starts]


def _combine(prev: np.ndarray, parity: int) -> np.ndarray:
    """Pairwise-sum tables with themselves and group-minimize by tau target."""
    order, starts, present = _parity_reducer(parity)
    rows = prev.shape[0]
    out = np.full((rows, 16), np.inf)
    for lo in range(0, rows, _CHUNK_ROWS):
        hi = min(lo + _CHUNK_ROWS, rows)
        block = prev[lo:hi]
        sums = (block[:, :, None] + block[:, None, :]).reshape(hi - lo, 256)
        out[lo:hi, present] = np.minimum.reduceat(sums[:, order], starts, axis=1)
    return out


def _advance(minus1: np.ndarray, tables: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    count = tables.shape[0]
    prev = np.vstack([minus1[None, :], tables])
    new = np.empty((2 * count, 16))
    new[0::2] = _combine(prev[0:count], parity=0)
    new[1::2] = _combine(prev[1 : count + 1], parity=1)
    return left_edge_table(new[0]), new


def _run_levels(m: int) -> tuple[np.ndarray, np.ndarray]:
    if not 0 <= m <= _MAX_LEVELS:
        raise ValueError(f"m must be in 0..{_MAX_LEVELS}, got {m}")
    tables = base_table()[None, :]
    minus1 = left_edge_table(tables[0])
    for _ in range(m):
        minus1, tables = _advance(minus1, tables)
    assert np.all(tables[:, _FULL_IDX] == tables.min(axis=1))
    return minus1, tables


def compute_delta_tables(m: int) -> tuple[DeltaTable, ...]:
    """All minimum-erasure tables for n = 2**m, phases -1 .. n-1 in order."""
    minus1, tables = _run_levels(m)
    out = [DeltaTable(-1, minus1)]
    out.extend(DeltaTable(phi, row) for phi, row in enumerate(tables))
    return tuple(out)


def compute_weights(m: int) -> SubchannelWeights:
    """Exact subchannel weights d[0..n-1] for the length 2**m transform."""
    _, tables = _run_levels(m)
    d = tables[:, _DECIDABLE_COLS].min(axis=1)
    assert np.all(np.isfinite(d)) and d[0] == 1
    return SubchannelWeights(m, d.astype(np.int64))


def min_distance_bound(weights: SubchannelWeights, info_set) -> int:
    """Code distance lower bound: the smallest weight over unfrozen phases."""
    info = np.asarray(list(info_set), dtype=np.int64)
    if info.size == 0:
        raise ValueError("info set is empty")
    if info.min() < 0 or info.max() >= weights.n:
        raise ValueError("info set index out of range")
    return int(weights.d[info].min())


def arikan_row_weight(i: int) -> int:
    """Row weight of the Kronecker-power lower-triangular kernel, 2**popcount(i)."""
    if i < 0:
        raise ValueError(f"negative index {i}")
    return 1 << int(i).bit_count()
