from __future__ import annotations

import numpy as np
from hypothesis import given, strategies as st

from agccz import linalg
from agccz.finite_fields import gf


def test_rref_small():
    F = gf(2)
    M = np.array([[2, 2, 1], [1, 1, 2]])
    R, piv = linalg.rref(F, M)
    assert piv == [0, 2]
    assert R.tolist() == [[1, 1, 0], [0, 0, 1]]


def test_nullspace_of_zero_rows():
    F = gf(3)
    N = linalg.nullspace(F, np.zeros((0, 4), dtype=np.int64), n=4)
    assert np.array_equal(N, np.eye(4, dtype=np.int64))


matrices = st.tuples(st.integers(1, 6), st.integers(1, 8)).flatmap(
    lambda s: st.lists(st.lists(st.integers(0, 15), min_size=s[1], max_size=s[1]), min_size=s[0], max_size=s[0])
)


@given(matrices)
def test_rank_nullity(rows):
    F = gf(4)
    M = np.array(rows, dtype=np.int64)
    N = linalg.nullspace(F, M)
    assert linalg.rank(F, M) + N.shape[0] == M.shape[1]
    if N.size:
        assert not linalg.matmul(F, M, N.T).any()


@given(matrices, st.integers(0, 2**31 - 1))
def test_rowspace_membership(rows, seed):
    F = gf(4)
    M = np.array(rows, dtype=np.int64)
    rng = np.random.default_rng(seed)
    combo = linalg.matmul(F, rng.integers(0, 16, size=(3, M.shape[0])), M)
    assert linalg.in_rowspace(F, M, combo).all()
    R, _ = linalg.rref(F, M)
    assert linalg.same_rowspace(F, M, R)


@given(matrices)
def test_matmul_identity(rows):
    F = gf(4)
    M = np.array(rows, dtype=np.int64)
    assert np.array_equal(linalg.matmul(F, np.eye(M.shape[0], dtype=np.int64), M), M)
