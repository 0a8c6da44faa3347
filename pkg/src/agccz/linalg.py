"""Dense linear algebra over GF(2^m) on integer-encoded numpy matrices."""

from __future__ import annotations

import numpy as np

from .finite_fields import GF


def matmul(F: GF, A, B) -> np.ndarray:
    """A @ B over the field.  Zero entries of A are skipped, so sparse-ish A is cheap."""
    A = np.atleast_2d(np.asarray(A, dtype=np.int64))
    B = np.atleast_2d(np.asarray(B, dtype=np.int64))
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"shape mismatch {A.shape} @ {B.shape}")
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for t in range(A.shape[1]):
        col = A[:, t]
        nz = np.nonzero(col)[0]
        if nz.size == 0 or not B[t].any():
            continue
        out[nz] ^= F.mul(col[nz, None], B[t][None, :])
    return out


def rref(F: GF, M, column_order=None) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form with pivots chosen in ``column_order``.

    Pivot rows are taken in order of first nonzero entry; ties go to the
    lowest row index.  Returns the nonzero rows only, and the pivot column
    of each returned row.
    """
    R = np.array(M, dtype=np.int64, copy=True)
    if R.ndim != 2:
        raise ValueError("expected a matrix")
    rows, cols = R.shape
    order = range(cols) if column_order is None else column_order
    pivots: list[int] = []
    i = 0
    for c in order:
        if i == rows:
            break
        nz = np.nonzero(R[i:, c])[0]
        if nz.size == 0:
            continue
        p = i + int(nz[0])
        if p != i:
            R[[i, p]] = R[[p, i]]
        R[i] = F.mul(R[i], F.inv(R[i, c]))
        others = np.nonzero(R[:, c])[0]
        others = others[others != i]
        if others.size:
            R[others] ^= F.mul(R[others, c][:, None], R[i][None, :])
        pivots.append(int(c))
        i += 1
    return R[:i], pivots


def rank(F: GF, M) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    return len(rref(F, M)[1])


def nullspace(F: GF, M, n: int | None = None) -> np.ndarray:
    """Basis (as rows) of {x : M x^T = 0}."""
    M = np.atleast_2d(np.asarray(M, dtype=np.int64))
    ncols = M.shape[1] if n is None else n
    if M.size == 0:
        return np.eye(ncols, dtype=np.int64)
    R, piv = rref(F, M)
    free = [c for c in range(ncols) if c not in set(piv)]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for j, f in enumerate(free):
        basis[j, f] = 1
        # characteristic 2: x_pivot = -R[i, f] = R[i, f]
        basis[j, piv] = R[:, f]
    return basis


def reduce_against(F: GF, R: np.ndarray, pivots: list[int], vecs) -> np.ndarray:
    """Residues of ``vecs`` after eliminating with an RREF basis ``R``."""
    V = np.atleast_2d(np.array(vecs, dtype=np.int64, copy=True))
    for row, c in zip(R, pivots):
        coef = V[:, c]
        nz = np.nonzero(coef)[0]
        if nz.size:
            V[nz] ^= F.mul(coef[nz, None], row[None, :])
    return V


def in_rowspace(F: GF, M, vecs) -> np.ndarray:
    """Boolean membership of each row of ``vecs`` in rowspace(M)."""
    R, piv = rref(F, M)
    return ~reduce_against(F, R, piv, vecs).any(axis=1)


def same_rowspace(F: GF, A, B) -> bool:
    ra, rb = rank(F, A), rank(F, B)
    return ra == rb == rank(F, np.vstack([A, B]))
