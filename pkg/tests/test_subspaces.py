import numpy as np
import pytest

from convpolar.erasure import recoverable_patterns
from convpolar.subspaces import (
    Subspace,
    build_tau_tables,
    enumerate_subspaces,
    left_edge_shift,
    right_edge_lift,
    subspace_index,
)

LATTICE_MASKS = [1, 3, 5, 9, 15, 17, 33, 51, 65, 85, 105, 129, 153, 165, 195, 255]


def span(*vecs):
    return Subspace.from_vectors(3, vecs)


def test_lattice_enumeration():
    lat = enumerate_subspaces(3)
    assert [s.mask for s in lat] == LATTICE_MASKS
    assert len(enumerate_subspaces(2)) == 5
    assert len(enumerate_subspaces(1)) == 2
    idx = subspace_index(3)
    assert idx[255] == 15 and idx[85] == 9 and idx[1] == 0


def test_subspace_validation():
    with pytest.raises(ValueError):
        Subspace(3, 0b10)  # missing zero vector
    with pytest.raises(ValueError):
        Subspace(3, 0b0111)  # keys {0,1,2} not closed: 1 ^ 2 = 3 missing
    s = span((1, 0, 1), (0, 1, 0))
    assert s.dim() == 2
    assert s.contains((1, 1, 1))
    assert not s.contains((0, 0, 1))
    assert s.contains_key(0)


def test_dim_and_membership():
    full = Subspace(3, 255)
    assert full.dim() == 3
    assert span().dim() == 0
    assert span((0, 1, 0), (0, 0, 1)).mask == 85


def test_right_edge_lift():
    base = Subspace.from_vectors(1, ((1,),))
    lifted = right_edge_lift(base, 2)
    assert lifted.j == 3 and lifted.dim() == 3
    trivial = Subspace.from_vectors(1, ())
    lifted2 = right_edge_lift(trivial, 2)
    # {(0, q)} has every key with first coordinate 0
    assert lifted2.keys() == (0, 2, 4, 6)


def test_left_edge_shift():
    s = span((1, 0, 0), (0, 1, 0))  # keys {0,1,2,3}, mask 15
    shifted = left_edge_shift(s)
    # (p0, p1, 0) -> (0, p0, p1): keys double
    assert shifted.keys() == (0, 2, 4, 6)
    assert left_edge_shift(span()).mask == 1


def test_tau_worked_examples():
    tables = build_tau_tables()
    lat = enumerate_subspaces(3)
    idx = subspace_index(3)
    s_85 = idx[span((0, 1, 0), (0, 0, 1)).mask]
    s_17 = idx[span((0, 0, 1)).mask]
    s_153 = idx[span((1, 1, 0), (0, 0, 1)).mask]
    assert lat[tables.even[s_85, s_17]].mask == lat[s_153].mask == 153
    assert lat[tables.odd[s_85, s_85]].mask == 85
    assert lat[tables.even[0, 0]].mask == 1
    assert lat[tables.odd[0, 0]].mask == 1
    assert tables.for_phase(2) is tables.even
    assert tables.for_phase(5) is tables.odd


def test_composition_matches_oracle():
    """The two-table composition reproduces the exhaustive recoverable-pattern
    oracle at every phase and erasure set, for lengths 2 to 8."""
    tables = build_tau_tables()
    lat = enumerate_subspaces(3)
    idx = subspace_index(3)
    for n in (2, 4, 8):
        for phi in range(n):
            tab = tables.for_phase(phi)
            psi = (phi + 1) // 2 - 1
            for emask in range(1 << n):
                erased = frozenset(i for i in range(n) if (emask >> i) & 1)
                ex = frozenset(i for i in erased if i < n // 2)
                ez = frozenset(i - n // 2 for i in erased if i >= n // 2)
                sx = recoverable_patterns(n // 2, psi, 3, ex)
                sz = recoverable_patterns(n // 2, psi, 3, ez)
                whole = recoverable_patterns(n, phi, 3, erased)
                composed = lat[tab[idx[sx.mask], idx[sz.mask]]]
                assert composed == whole, (n, phi, sorted(erased))
