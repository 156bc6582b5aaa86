import numpy as np
import pytest

from convpolar.gf2 import (
    BitMatrix,
    BitVector,
    Span,
    in_column_space,
    mat_mul,
    mat_vec_mul,
    rank,
    submatrix,
)


def test_bitvector_roundtrip():
    v = BitVector.from_ints([1, 0, 1, 1])
    assert len(v) == 4
    assert list(v) == [1, 0, 1, 1]
    assert v[0] == 1 and v[1] == 0
    assert v.weight() == 3
    assert v.to_array().tolist() == [1, 0, 1, 1]


def test_bitvector_xor_and_validation():
    a = BitVector.from_ints([1, 1, 0])
    b = BitVector.from_ints([0, 1, 1])
    assert list(a ^ b) == [1, 0, 1]
    with pytest.raises(ValueError):
        a ^ BitVector.from_ints([1, 0])
    with pytest.raises(ValueError):
        BitVector(bits=8, length=3)
    with pytest.raises(ValueError):
        BitVector.from_ints([0, 2])


def test_bitmatrix_roundtrip_and_access():
    arr = np.array([[1, 0, 1], [0, 1, 1]], dtype=np.uint8)
    m = BitMatrix.from_array(arr)
    assert m.shape == (2, 3)
    assert m.entry(0, 2) == 1 and m.entry(1, 0) == 0
    assert list(m.row(1)) == [0, 1, 1]
    assert np.array_equal(m.to_array(), arr)
    # column_ints packs each column with row 0 as the low bit
    assert m.column_ints() == [1, 2, 3]


def test_mat_vec_mul():
    m = BitMatrix.from_array([[1, 1, 0], [0, 1, 1]])
    v = BitVector.from_ints([1, 1])
    # (1,1) * M = row0 + row1
    assert list(mat_vec_mul(v, m)) == [1, 0, 1]
    with pytest.raises(ValueError):
        mat_vec_mul(BitVector.from_ints([1, 0, 1]), m)


def test_mat_mul_matches_numpy():
    rng = np.random.default_rng(0)
    for _ in range(20):
        a = rng.integers(0, 2, (4, 5)).astype(np.uint8)
        b = rng.integers(0, 2, (5, 3)).astype(np.uint8)
        got = mat_mul(BitMatrix.from_array(a), BitMatrix.from_array(b))
        assert np.array_equal(got.to_array(), (a @ b) % 2)


def test_submatrix_excludes():
    m = BitMatrix.from_array([[1, 0, 1, 1], [0, 1, 0, 1], [1, 1, 1, 0]])
    s = submatrix(m, excluded_rows={1}, excluded_cols={0, 2})
    assert np.array_equal(s.to_array(), np.array([[0, 1], [1, 0]], dtype=np.uint8))
    full = submatrix(m)
    assert np.array_equal(full.to_array(), m.to_array())


def test_rank_and_column_space():
    m = BitMatrix.from_array([[1, 0, 1], [0, 1, 1], [1, 1, 0]])
    assert rank(m) == 2  # third row is the sum of the first two
    assert in_column_space(m, BitVector.from_ints([1, 0, 1]))
    assert in_column_space(m, BitVector.from_ints([1, 1, 0]))
    assert not in_column_space(m, BitVector.from_ints([1, 0, 0]))


def test_rank_random_matches_gaussian_elimination():
    rng = np.random.default_rng(1)
    for _ in range(30):
        a = rng.integers(0, 2, (6, 6)).astype(np.uint8)
        m = BitMatrix.from_array(a)
        # reference rank over GF(2) by elimination on a float copy mod 2
        ref = 0
        work = a.copy()
        for c in range(6):
            piv = next((r for r in range(ref, 6) if work[r, c]), None)
            if piv is None:
                continue
            work[[ref, piv]] = work[[piv, ref]]
            for r in range(6):
                if r != ref and work[r, c]:
                    work[r] ^= work[ref]
            ref += 1
        assert rank(m) == ref


def test_span():
    s = Span()
    assert s.add(0b101)
    assert s.add(0b011)
    assert not s.add(0b110)  # dependent
    assert s.dim == 2
    assert 0b110 in s and 0b101 in s and 0 in s
    assert 0b100 not in s
    assert s.reduce(0b101) == 0
