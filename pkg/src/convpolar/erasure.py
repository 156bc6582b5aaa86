"""Exhaustive erasure-channel oracles for small block lengths.

Ground-truth machinery: which window patterns stay recoverable after a given
erasure set, which erasure sets produce a given pattern subspace, minimum
coset weights by direct enumeration, and exhaustive code minimum distance.
Everything here trades time for certainty; the fast recursions elsewhere in
the package are certified against these.

An erasure configuration is any iterable of erased codeword positions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .codespec import CodeSpec
from .cvpt import build_matrix, transform_row_ints
from .gf2 import BitVector, in_column_space, submatrix
from .subspaces import Subspace, enumerate_subspaces

__all__ = [
    "CosetSpec",
    "CrossCheckReport",
    "recoverable_patterns",
    "pattern_preimage",
    "min_erasures",
    "coset_min_weight",
    "exhaustive_min_distance",
    "coset_weight_matches_pattern_bound",
    "cross_check_coset_weights",
    "cross_check_delta_tables",
]

_MAX_N_MEMBERSHIP = 64
_MAX_N_ENUM = 16
_MAX_FREE_BITS = 32
_GRAY_CHUNK = 1 << 22


@dataclass(frozen=True)
class CosetSpec:
    """Input cosets: leading symbols zero, one window parity forced to one."""

    n: int
    phi: int
    p: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 1 or self.n & (self.n - 1):
            raise ValueError(f"n must be a power of two, got {self.n}")
        if not 0 <= self.phi < self.n:
            raise ValueError(f"phase {self.phi} out of range")
        p = tuple(self.p)
        if not p or any(b not in (0, 1) for b in p) or not any(p):
            raise ValueError("p must be a nonzero bit tuple")
        object.__setattr__(self, "p", p)

    def min_weight(self) -> int | float:
        return coset_min_weight(self.n, self.phi, self.p)


@dataclass
class CrossCheckReport:
    """Outcome of an oracle-vs-recursion sweep."""

    checked: int = 0
    skipped: int = 0
    mismatches: list[tuple] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def _erasure_mask(n: int, erased: Iterable[int]) -> int:
    mask = 0
    for e in erased:
        if not 0 <= int(e) < n:
            raise ValueError(f"erased position {e} outside [0, {n})")
        mask |= 1 << int(e)
    return mask


def _check_sizes(n: int, phi: int, j: int, max_n: int) -> None:
    if n < 1 or n & (n - 1) or n > max_n:
        raise ValueError(f"n must be a power of two <= {max_n}, got {n}")
    if not 1 <= j <= 3:
        raise ValueError(f"window width must be 1..3, got {j}")
    if not -(j - 1) <= phi < n:
        raise ValueError(f"phase {phi} out of range for width {j}")


def recoverable_patterns(n: int, phi: int, j: int, erased: Iterable[int]) -> Subspace:
    """Subspace of width-j patterns still decidable after the erasures.

    A pattern p is recoverable when the parity p . (u_phi, .., u_{phi+j-1})
    is determined by the surviving codeword positions for every input with
    known symbols before phi.  Patterns touching symbols past the block end
    are trivially recoverable (those symbols are zero), and a negative phase
    means the leading pattern coordinates address symbols that are never
    recoverable.
    """
    _check_sizes(n, phi, j, _MAX_N_MEMBERSHIP)
    emask = _erasure_mask(n, erased)
    if phi < 0:
        lead = -phi
        inner = recoverable_patterns(n, 0, j - lead, erased)
        mask = 0
        for key in inner.keys():
            mask |= 1 << (key << lead)
        return Subspace(j, mask)
    k = n - phi
    jc = min(j, k)
    g = submatrix(
        build_matrix(n),
        excluded_rows=range(phi),
        excluded_cols=[c for c in range(n) if (emask >> c) & 1],
    )
    mask = 1
    for key in range(1, 1 << jc):
        if in_column_space(g, BitVector(key, k)):
            mask |= 1 << key
    if jc < j:
        lifted = 0
        for q in range(1 << (j - jc)):
            lifted |= mask << (q << jc)
        mask = lifted
    return Subspace(j, mask)


@lru_cache(maxsize=64)
def _chi3_table(n: int, phi: int) -> np.ndarray:
    """Width-3 recoverable-pattern masks for every erasure set of [n].

    Entry at index emask is the 8-bit subspace mask.  Independent fast path
    for the full-enumeration oracles; equality with recoverable_patterns is
    part of the test suite.
    """
    _check_sizes(n, phi, 3, _MAX_N_ENUM)
    if phi < 0:
        base = _chi3_table(n, 0)
        lut = np.zeros(256, dtype=np.uint8)
        for v in range(256):
            m = 0
            for key in range(4):
                if (v >> key) & 1:
                    m |= 1 << (key << 1)
            lut[v] = m
        out = lut[base]
        out.setflags(write=False)
        return out
    k = n - phi
    jc = min(3, k)
    rows = transform_row_ints(n)[phi:]
    cols = [
        sum(((rows[r] >> c) & 1) << r for r in range(k)) for c in range(n)
    ]
    keys = list(range(1, 1 << jc))
    out = np.empty(1 << n, dtype=np.uint8)
    for emask in range(1 << n):
        basis: list[int] = []
        for c in range(n):
            if (emask >> c) & 1:
                continue
            v = cols[c]
            for b in basis:
                if v ^ b < v:
                    v ^= b
            if v:
                basis.append(v)
                basis.sort(reverse=True)
        mask = 1
        for key in keys:
            v = key
            for b in basis:
                if v ^ b < v:
                    v ^= b
            if v == 0:
                mask |= 1 << key
        if jc < 3:
            lifted = 0
            for q in range(1 << (3 - jc)):
                lifted |= mask << (q << jc)
            mask = lifted
        out[emask] = mask
    out.setflags(write=False)
    return out


def _width_prefix(j: int) -> int:
    return (1 << (1 << j)) - 1


def pattern_preimage(
    n: int, phi: int, j: int, s: Subspace
) -> tuple[frozenset[int], ...]:
    """All erasure sets whose recoverable-pattern subspace is exactly s.

    Full 2^n enumeration; results ordered by cardinality then by sorted
    position tuple.
    """
    _check_sizes(n, phi, j, _MAX_N_ENUM)
    if s.j != j:
        raise ValueError(f"subspace dimension {s.j} != width {j}")
    table = _chi3_table(n, phi)
    pref = _width_prefix(j)
    hits = np.flatnonzero((table & pref) == s.mask)
    configs = [
        frozenset(c for c in range(n) if (int(e) >> c) & 1) for e in hits
    ]
    return tuple(sorted(configs, key=lambda f: (len(f), sorted(f))))


def min_erasures(n: int, phi: int, j: int, s: Subspace) -> int | float:
    """Minimum erasure count with recoverable-pattern subspace exactly s.

    Enumerates configurations by cardinality, smallest first; +inf when no
    configuration produces s.
    """
    _check_sizes(n, phi, j, _MAX_N_ENUM)
    if s.j != j:
        raise ValueError(f"subspace dimension {s.j} != width {j}")
    table = _chi3_table(n, phi)
    pref = _width_prefix(j)
    hits = (table & pref) == s.mask
    if not hits.any():
        return math.inf
    weights = np.bitwise_count(np.arange(1 << n, dtype=np.uint64))
    return int(weights[hits].min())


def _gray_min_weight(
    rows: Sequence[int], start: int, include_start: bool
) -> int | float:
    """Minimum popcount over {start XOR any combination of rows}.

    Walks combinations in Gray-code order so each step flips one row.
    """
    nfree = len(rows)
    if nfree > _MAX_FREE_BITS:
        raise ValueError(f"{nfree} free symbols exceed the enumeration guard")
    best = start.bit_count() if include_start else math.inf
    if nfree == 0:
        return best
    arr = np.array(rows, dtype=np.uint64)
    word = np.uint64(start)
    total = (1 << nfree) - 1
    one = np.uint64(1)
    for lo in range(0, total, _GRAY_CHUNK):
        cnt = min(_GRAY_CHUNK, total - lo)
        t = np.arange(lo + 1, lo + 1 + cnt, dtype=np.uint64)
        flip = np.bitwise_count((t & (~t + one)) - one)
        deltas = arr[flip]
        deltas[0] ^= word
        np.bitwise_xor.accumulate(deltas, out=deltas)
        best = min(best, int(np.bitwise_count(deltas).min()))
        word = deltas[-1]
    return int(best) if math.isfinite(best) else best


def coset_min_weight(n: int, phi: int, p: Sequence[int]) -> int | float:
    """Minimum codeword weight over inputs with zero prefix and p-window 1.

    The coset fixes u_0..u_{phi-1} = 0 and requires the parity of the window
    (u_phi, ..) selected by p to equal one; pattern coordinates beyond the
    block end read zero, so the coset is empty (weight +inf) when p has no
    in-range support.
    """
    spec = CosetSpec(n, phi, tuple(int(b) for b in p))
    n, phi, p = spec.n, spec.phi, spec.p
    support = [t for t, b in enumerate(p) if b and phi + t < n]
    if not support:
        return math.inf
    if n - phi - 1 > _MAX_FREE_BITS:
        raise ValueError(f"n - phi = {n - phi} exceeds the enumeration guard")
    rows = transform_row_ints(n)
    pivot = phi + support[0]
    adjusted = []
    for f in range(phi, n):
        if f == pivot:
            continue
        r = rows[f]
        if f - phi < len(p) and p[f - phi]:
            r ^= rows[pivot]
        adjusted.append(r)
    return _gray_min_weight(adjusted, rows[pivot], include_start=True)


def exhaustive_min_distance(code: CodeSpec) -> int:
    """Exact minimum distance by enumerating all 2^k - 1 nonzero codewords."""
    if code.k > 26:
        raise ValueError(f"k = {code.k} exceeds the enumeration guard")
    if code.n > 64:
        raise ValueError(f"n = {code.n} exceeds word width")
    from .cvpt import encode  # local import keeps module load light

    gen = encode(code.assemble(np.eye(code.k, dtype=np.uint8)))
    weights = 1 << np.arange(code.n, dtype=object)
    rows = [int((g.astype(object) * weights).sum()) for g in gen]
    d = _gray_min_weight(rows, 0, include_start=False)
    assert isinstance(d, int) and d >= 1
    return d


def _pattern_bound(n: int, phi: int, j: int, p_key: int) -> int | float:
    """Smallest erasure count whose surviving patterns exclude p."""
    table = _chi3_table(n, phi)
    pref = _width_prefix(j)
    weights = np.bitwise_count(np.arange(1 << n, dtype=np.uint64))
    best = math.inf
    for s in enumerate_subspaces(j):
        if (s.mask >> p_key) & 1:
            continue
        hits = (table & pref) == s.mask
        if hits.any():
            best = min(best, int(weights[hits].min()))
    return best


def coset_weight_matches_pattern_bound(
    n: int, phi: int, j: int, p: Sequence[int]
) -> bool:
    """Check one coset: direct minimum weight equals the erasure-side bound.

    Jointly-infinite cases (empty coset and no subspace excluding p) count
    as vacuously true.
    """
    _check_sizes(n, phi, j, _MAX_N_ENUM)
    p = tuple(int(b) for b in p)
    if len(p) != j or any(b not in (0, 1) for b in p) or not any(p):
        raise ValueError("p must be a nonzero bit tuple of the window width")
    lhs = coset_min_weight(n, phi, p)
    rhs = _pattern_bound(n, phi, j, sum(b << t for t, b in enumerate(p)))
    return lhs == rhs or (math.isinf(lhs) and math.isinf(rhs))


def cross_check_coset_weights(
    n: int, js: Sequence[int] = (1, 2, 3)
) -> CrossCheckReport:
    """Sweep every phase, width and nonzero pattern of a block length."""
    report = CrossCheckReport()
    for phi in range(n):
        for j in js:
            for key in range(1, 1 << j):
                p = tuple((key >> t) & 1 for t in range(j))
                lhs = coset_min_weight(n, phi, p)
                rhs = _pattern_bound(n, phi, j, key)
                if math.isinf(lhs) and math.isinf(rhs):
                    report.skipped += 1
                elif lhs == rhs:
                    report.checked += 1
                else:
                    report.mismatches.append((phi, j, p, lhs, rhs))
    return report


def cross_check_delta_tables(m: int) -> CrossCheckReport:
    """Compare the fast table recursion with the oracle at every phase.

    Covers phases -1 .. n-1 and all 16 subspaces each, for n = 2^m <= 8.
    """
    if not 1 <= m <= 3:
        raise ValueError(f"m must be 1..3 for the exhaustive check, got {m}")
    from .distance import compute_delta_tables

    n = 1 << m
    lattice = enumerate_subspaces(3)
    weights = np.bitwise_count(np.arange(1 << n, dtype=np.uint64))
    report = CrossCheckReport()
    for table in compute_delta_tables(m):
        oracle_masks = _chi3_table(n, table.phi)
        for idx, s in enumerate(lattice):
            hits = oracle_masks == s.mask
            oracle = int(weights[hits].min()) if hits.any() else math.inf
            fast = float(table.entries[idx])
            if math.isinf(oracle) and math.isinf(fast):
                report.checked += 1
            elif oracle == fast:
                report.checked += 1
            else:
                report.mismatches.append((table.phi, s.mask, fast, oracle))
    return report
