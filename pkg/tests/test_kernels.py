"""Packed F2 kernels against plain-integer references, numba vs numpy."""

import numpy as np
import pytest

from toric3d import _kernels as K


def _ref_rank(rows_as_ints):
    """Gaussian elimination on python ints."""
    pivots = []
    rank = 0
    for r in rows_as_ints:
        v = r
        for p in pivots:
            if v & (p & -p):
                v ^= p
        if v:
            pivots.append(v)
            rank += 1
    return rank


def _rows_to_ints(rows, nbits):
    out = []
    for r in rows:
        val = 0
        for i, b in enumerate(K.unpack_bits(r, nbits)):
            val |= int(b) << i
        out.append(val)
    return out


def test_pack_unpack_roundtrip(rng):
    bits = rng.integers(0, 2, 200).astype(np.uint8)
    packed = K.pack_bits(bits)
    assert np.array_equal(K.unpack_bits(packed, 200), bits)


def test_popcount_matches_int_bitcount(rng):
    bits = rng.integers(0, 2, 300).astype(np.uint8)
    packed = K.pack_bits(bits)
    assert K.np_popcount(packed) == int(bits.sum())
    if K.HAVE_NUMBA:
        assert K.nb_popcount(packed) == int(bits.sum())


def test_symplectic_parity_reference(rng):
    n = 150
    for _ in range(30):
        x1, z1, x2, z2 = (K.pack_bits(rng.integers(0, 2, n)) for _ in range(4))
        ints = [_rows_to_ints([v], n)[0] for v in (x1, z1, x2, z2)]
        expected = (bin(ints[0] & ints[3]).count("1") + bin(ints[1] & ints[2]).count("1")) & 1
        assert K.np_symplectic_parity(x1, z1, x2, z2) == expected
        if K.HAVE_NUMBA:
            assert K.nb_symplectic_parity(x1, z1, x2, z2) == expected


def test_anticommute_batch_matches_single(rng):
    n, m = 130, 40
    xs = K.pack_bits(rng.integers(0, 2, (m, n)))
    zs = K.pack_bits(rng.integers(0, 2, (m, n)))
    x = K.pack_bits(rng.integers(0, 2, n))
    z = K.pack_bits(rng.integers(0, 2, n))
    batch = K.np_anticommute_batch(xs, zs, x, z)
    singles = [K.np_symplectic_parity(xs[i], zs[i], x, z) for i in range(m)]
    assert list(batch) == singles
    if K.HAVE_NUMBA:
        assert list(K.nb_anticommute_batch(xs, zs, x, z)) == singles


@pytest.mark.parametrize("shape", [(10, 8), (25, 60), (40, 200), (64, 64)])
def test_rank_matches_reference(rng, shape):
    m, n = shape
    rows = K.pack_bits(rng.integers(0, 2, (m, n)))
    expected = _ref_rank(_rows_to_ints(rows, n))
    assert K.np_f2_rank(rows) == expected
    if K.HAVE_NUMBA:
        assert K.nb_f2_rank(rows) == expected


def test_nullspace_annihilates_rows(rng):
    m, n = 30, 20
    rows = K.pack_bits(rng.integers(0, 2, (m, n)))
    basis = K.f2_nullspace_basis(rows)
    rank = K.np_f2_rank(rows)
    assert basis.shape[0] == m - rank
    for coeff in basis:
        acc = K.zero_vector(n)
        for i in range(m):
            if K.get_bit(coeff, i):
                acc = acc ^ rows[i]
        assert not acc.any()


def test_solve_finds_combination(rng):
    m, n = 25, 18
    rows = K.pack_bits(rng.integers(0, 2, (m, n)))
    picks = rng.integers(0, 2, m)
    target = K.zero_vector(n)
    for i in range(m):
        if picks[i]:
            target = target ^ rows[i]
    combo = K.f2_solve(rows, target)
    assert combo is not None
    acc = K.zero_vector(n)
    for i in range(m):
        if K.get_bit(combo, i):
            acc = acc ^ rows[i]
    assert np.array_equal(acc, target)


def test_solve_detects_unsolvable():
    rows = K.pack_bits(np.array([[1, 1, 0], [0, 0, 1]]))
    target = K.pack_bits(np.array([1, 0, 0]))
    assert K.f2_solve(rows, target) is None


def test_gray_code_span_sizes():
    basis = K.pack_bits(np.eye(3, 10, dtype=np.uint8))
    span = K.gray_code_span(basis)
    assert span.shape[0] == 8
    assert np.unique(span, axis=0).shape[0] == 8


def test_backend_selected():
    assert K.BACKEND in ("numba", "numpy")
    if K.HAVE_NUMBA:
        import os

        expected = "numpy" if os.environ.get("TORIC3D_PURE_NUMPY", "") not in ("", "0") else "numba"
        assert K.BACKEND == expected
