"""Pure-Python/numpy versions of the hot kernels.

Semantics match ``_kernels.pyx`` exactly; the selector in ``kernels`` picks
the compiled module when it imports.
"""
from __future__ import annotations

import numpy as np


def geometric_divide(a: np.ndarray, dx: int, dy: int, ell: np.ndarray, bound: int) -> None:
    """In place: a <- a / (1 - t^(dx,dy)), truncated to cells with ell <= bound.

    Cells are indexed a[i, j] for exponent (i + ox, j + oy); the caller keeps
    the offsets. Requires the functional to be positive on (dx, dy).
    """
    a[ell > bound] = 0
    n, m = a.shape
    if dx == 0:
        cols = range(m) if dy > 0 else range(m - 1, -1, -1)
        for j in cols:
            src = j - dy
            if 0 <= src < m:
                a[:, j] += a[:, src]
    else:
        rows = range(n) if dx > 0 else range(n - 1, -1, -1)
        for i in rows:
            src = i - dx
            if not 0 <= src < n or abs(dy) >= m:
                continue
            if dy >= 0:
                a[i, dy:] += a[src, :m - dy] if dy else a[src, :]
            else:
                a[i, :m + dy] += a[src, -dy:]
    a[ell > bound] = 0


def echelon_insert(basis: list, pivots: list, row: np.ndarray, p: int) -> bool:
    """Reduce row against a mod-p echelon basis; append it if independent.

    basis rows are normalized (pivot entry 1) and pivots[k] is the pivot
    column of basis[k]. Returns True when the rank grew.
    """
    r = row % p
    for b, c in zip(basis, pivots):
        f = int(r[c])
        if f:
            r = (r - f * b) % p
    nz = np.flatnonzero(r)
    if nz.size == 0:
        return False
    c = int(nz[0])
    inv = pow(int(r[c]), p - 2, p)
    basis.append((r * inv) % p)
    pivots.append(c)
    return True


def rank_mod_p(rows: np.ndarray, p: int) -> int:
    """Rank of an integer matrix modulo a prime below 2**31."""
    A = np.array(rows, dtype=np.int64) % p
    if A.size == 0:
        return 0
    n, m = A.shape
    r = 0
    for c in range(m):
        if r == n:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        inv = pow(int(A[r, c]), p - 2, p)
        A[r] = (A[r] * inv) % p
        below = np.flatnonzero(A[r + 1:, c]) + r + 1
        if below.size:
            A[below] = (A[below] - np.outer(A[below, c], A[r])) % p
        r += 1
    return r


def poly_mul_mod(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """2D convolution mod p of coefficient arrays with entries in [0, p)."""
    na, ma = A.shape
    nb, mb = B.shape
    out = np.zeros((na + nb - 1, ma + mb - 1), dtype=np.int64)
    for i, j in zip(*np.nonzero(B)):
        blk = out[i:i + na, j:j + ma]
        blk += (A * int(B[i, j])) % p
        blk %= p
    return out
