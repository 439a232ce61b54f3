"""Gaussian elimination over F_p on numpy int64 matrices.

Pivoting always takes the first row (in stored order) with a nonzero entry
in the current column, so results are reproducible bit for bit.
"""

from __future__ import annotations

import numpy as np


def rref(M: np.ndarray, p: int, ncols: int | None = None):
    """Reduced row echelon form of M mod p.

    Only the first ``ncols`` columns are used as pivot columns (all by
    default); further columns are carried along.  Returns (R, pivots) where
    pivots[i] is the pivot column of row i.
    """
    R = np.array(M, dtype=np.int64) % p
    nrows, total = R.shape
    ncols = total if ncols is None else ncols
    pivots = []
    row = 0
    for col in range(ncols):
        if row >= nrows:
            break
        nz = np.nonzero(R[row:, col])[0]
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            R[[row, piv]] = R[[piv, row]]
        inv = pow(int(R[row, col]), -1, p)
        R[row] = R[row] * inv % p
        f = R[:, col].copy()
        f[row] = 0
        hit = np.nonzero(f)[0]
        if hit.size:
            R[hit] = (R[hit] - np.outer(f[hit], R[row])) % p
        pivots.append(col)
        row += 1
    return R, pivots


def rank_mod_p(M: np.ndarray, p: int) -> int:
    if M.size == 0:
        return 0
    return len(rref(M, p)[1])


def solve_in_span(A: np.ndarray, t: np.ndarray, p: int):
    """Find x with A x = t (mod p), or None if t is not in the column span.

    A has shape (rows, k).  Free variables are set to zero, which makes the
    witness canonical for a given column order.
    """
    A = np.asarray(A, dtype=np.int64).reshape(len(t), -1) % p
    t = np.asarray(t, dtype=np.int64) % p
    k = A.shape[1]
    if k == 0:
        return np.zeros(0, dtype=np.int64) if not t.any() else None
    R, pivots = rref(np.column_stack([A, t]), p, ncols=k)
    r = len(pivots)
    if R[r:, k].any():
        return None
    x = np.zeros(k, dtype=np.int64)
    for i, c in enumerate(pivots):
        x[c] = R[i, k]
    return x
