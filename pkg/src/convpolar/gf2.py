"""GF(2) vectors, matrices and spans backed by Python int bitsets.

Bit ``i`` of a row int is column ``i`` (LSB = column 0).  Ints are arbitrary
precision, so no row length limit applies; lengths are tracked explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

__all__ = [
    "BitVector",
    "BitMatrix",
    "Span",
    "mat_vec_mul",
    "mat_mul",
    "rank",
    "in_column_space",
    "submatrix",
]


@dataclass(frozen=True)
class BitVector:
    """Fixed-length vector over GF(2)."""

    bits: int
    length: int

    def __post_init__(self) -> None:
        if self.length < 0:
            raise ValueError(f"negative length {self.length}")
        if self.bits < 0 or self.bits >> self.length:
            raise ValueError("bits outside the declared length")

    @classmethod
    def from_ints(cls, values: Iterable[int]) -> "BitVector":
        vals = list(values)
        bits = 0
        for i, v in enumerate(vals):
            if v not in (0, 1):
                raise ValueError(f"entry {v!r} at index {i} is not a bit")
            bits |= v << i
        return cls(bits, len(vals))

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(i)
        return (self.bits >> i) & 1

    def __iter__(self) -> Iterator[int]:
        return ((self.bits >> i) & 1 for i in range(self.length))

    def __xor__(self, other: "BitVector") -> "BitVector":
        if self.length != other.length:
            raise ValueError("length mismatch")
        return BitVector(self.bits ^ other.bits, self.length)

    def weight(self) -> int:
        return self.bits.bit_count()

    def to_array(self) -> np.ndarray:
        return np.array(list(self), dtype=np.uint8)


@dataclass(frozen=True)
class BitMatrix:
    """Matrix over GF(2), stored as a tuple of row ints."""

    rows: tuple[int, ...]
    n_cols: int

    def __post_init__(self) -> None:
        if self.n_cols < 0:
            raise ValueError(f"negative column count {self.n_cols}")
        for r, row in enumerate(self.rows):
            if row < 0 or row >> self.n_cols:
                raise ValueError(f"row {r} has bits outside {self.n_cols} columns")

    @classmethod
    def from_array(cls, a: np.ndarray | Sequence[Sequence[int]]) -> "BitMatrix":
        arr = np.asarray(a, dtype=np.uint8)
        if arr.ndim != 2:
            raise ValueError(f"expected 2-d array, got shape {arr.shape}")
        if not np.all((arr == 0) | (arr == 1)):
            raise ValueError("entries must be bits")
        ncols = arr.shape[1]
        weights = 1 << np.arange(ncols, dtype=object)
        rows = tuple(int((row.astype(object) * weights).sum()) for row in arr)
        return cls(rows, ncols)

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), self.n_cols)

    def entry(self, r: int, c: int) -> int:
        if not (0 <= r < self.n_rows and 0 <= c < self.n_cols):
            raise IndexError((r, c))
        return (self.rows[r] >> c) & 1

    def row(self, r: int) -> BitVector:
        return BitVector(self.rows[r], self.n_cols)

    def column_ints(self) -> list[int]:
        """Columns as bitsets over row indices (bit r = entry in row r)."""
        cols = [0] * self.n_cols
        for r, row in enumerate(self.rows):
            bit = 1 << r
            rest = row
            while rest:
                c = (rest & -rest).bit_length() - 1
                cols[c] |= bit
                rest &= rest - 1
        return cols

    def to_array(self) -> np.ndarray:
        out = np.zeros((self.n_rows, self.n_cols), dtype=np.uint8)
        for r, row in enumerate(self.rows):
            for c in range(self.n_cols):
                out[r, c] = (row >> c) & 1
        return out


class Span:
    """Incremental row span over GF(2), kept in reduced echelon form."""

    def __init__(self, vectors: Iterable[int] = ()) -> None:
        self._pivots: dict[int, int] = {}
        for v in vectors:
            self.add(v)

    def reduce(self, v: int) -> int:
        """Reduce ``v`` against the span; the result is 0 iff v is in it."""
        for lead in sorted(self._pivots, reverse=True):
            if (v >> lead) & 1:
                v ^= self._pivots[lead]
        return v

    def add(self, v: int) -> bool:
        """Insert ``v``; returns True if it enlarged the span."""
        v = self.reduce(v)
        if v == 0:
            return False
        lead = v.bit_length() - 1
        for key in list(self._pivots):
            if (self._pivots[key] >> lead) & 1:
                self._pivots[key] ^= v
        self._pivots[lead] = v
        return True

    def __contains__(self, v: int) -> bool:
        return self.reduce(v) == 0

    @property
    def dim(self) -> int:
        return len(self._pivots)


def mat_vec_mul(v: BitVector, m: BitMatrix) -> BitVector:
    """Row-combination product v @ M: XOR of the rows selected by v."""
    if v.length != m.n_rows:
        raise ValueError(f"vector length {v.length} != row count {m.n_rows}")
    acc = 0
    bits = v.bits
    while bits:
        r = (bits & -bits).bit_length() - 1
        acc ^= m.rows[r]
        bits &= bits - 1
    return BitVector(acc, m.n_cols)


def mat_mul(m: BitMatrix, other: BitMatrix) -> BitMatrix:
    """Matrix product over GF(2)."""
    if m.n_cols != other.n_rows:
        raise ValueError(f"inner dimensions {m.n_cols} != {other.n_rows}")
    rows = tuple(mat_vec_mul(m.row(r), other).bits for r in range(m.n_rows))
    return BitMatrix(rows, other.n_cols)


def submatrix(
    m: BitMatrix, excluded_rows: Iterable[int] = (), excluded_cols: Iterable[int] = ()
) -> BitMatrix:
    """Submatrix keeping rows/columns NOT in the excluded sets, order preserved."""
    drop_r = set(excluded_rows)
    drop_c = set(excluded_cols)
    for r in drop_r:
        if not 0 <= r < m.n_rows:
            raise IndexError(f"row {r} out of range")
    for c in drop_c:
        if not 0 <= c < m.n_cols:
            raise IndexError(f"column {c} out of range")
    cols = [c for c in range(m.n_cols) if c not in drop_c]
    rows = []
    for r in range(m.n_rows):
        if r in drop_r:
            continue
        src = m.rows[r]
        packed = 0
        for j, c in enumerate(cols):
            packed |= ((src >> c) & 1) << j
        rows.append(packed)
    return BitMatrix(tuple(rows), len(cols))


def rank(m: BitMatrix) -> int:
    span = Span(m.rows)
    return span.dim


def in_column_space(m: BitMatrix, v: BitVector) -> bool:
    """Membership of ``v`` in the span of the columns of ``m``."""
    if v.length != m.n_rows:
        raise ValueError(f"vector length {v.length} != row count {m.n_rows}")
    span = Span(m.column_ints())
    return v.bits in span
