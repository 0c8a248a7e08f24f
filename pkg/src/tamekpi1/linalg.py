"""Dense Gaussian elimination over F_p."""
from __future__ import annotations

import numpy as np


def row_reduce(M, p: int, reduced: bool = True) -> tuple[np.ndarray, list[int]]:
    """Row echelon form of ``M`` over F_p with zero rows dropped.

    With ``reduced`` the pivot columns are cleared above the pivots as well
    (RREF); otherwise only below, which is cheaper and spans the same space.
    Returns the nonzero rows and their pivot columns.
    """
    A = np.array(M, dtype=np.int64, copy=True) % p
    if A.ndim != 2 or A.size == 0:
        ncols = A.shape[1] if A.ndim == 2 else 0
        return np.zeros((0, ncols), dtype=np.int64), []
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        inv = pow(int(A[r, c]), -1, p)
        A[r, c:] = A[r, c:] * inv % p
        lo = 0 if reduced else r + 1
        col = A[lo:, c].copy()
        if reduced:
            col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            rows_hit = hit + lo
            A[rows_hit, c:] = (A[rows_hit, c:] - np.outer(col[hit], A[r, c:])) % p
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank_mod_p(M, p: int) -> int:
    return len(row_reduce(M, p, reduced=False)[1])
