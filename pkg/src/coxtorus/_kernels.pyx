# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the series and modular-rank kernels."""
import numpy as np
cimport numpy as cnp

ctypedef cnp.int64_t i64


def geometric_divide(i64[:, ::1] a, long dx, long dy, i64[:, ::1] ell, long bound):
    cdef Py_ssize_t n = a.shape[0], m = a.shape[1]
    cdef Py_ssize_t i, j, ii, jj, si, sj, k, kk
    cdef Py_ssize_t istart, istep, jstart, jstep
    if dx > 0 or (dx == 0 and dy > 0):
        istart, istep = 0, 1
    else:
        istart, istep = n - 1, -1
    if dy >= 0:
        jstart, jstep = 0, 1
    else:
        jstart, jstep = m - 1, -1
    for k in range(n):
        i = istart + istep * k
        for kk in range(m):
            j = jstart + jstep * kk
            if ell[i, j] > bound:
                a[i, j] = 0
                continue
            si = i - dx
            sj = j - dy
            if 0 <= si < n and 0 <= sj < m:
                a[i, j] += a[si, sj]


def echelon_insert(list basis, list pivots, row, long long p):
    cdef cnp.ndarray[i64, ndim=1] r = np.asarray(row, dtype=np.int64) % p
    cdef cnp.ndarray[i64, ndim=1] b
    cdef Py_ssize_t m = r.shape[0], j, k
    cdef long long f, c, inv
    for k in range(len(basis)):
        b = basis[k]
        c = pivots[k]
        f = r[c]
        if f:
            for j in range(c, m):
                if b[j]:
                    r[j] = (r[j] - f * b[j]) % p
                    if r[j] < 0:
                        r[j] += p
    for j in range(m):
        if r[j]:
            inv = pow(int(r[j]), p - 2, p)
            for k in range(j, m):
                r[k] = (r[k] * inv) % p
            basis.append(r)
            pivots.append(j)
            return True
    return False


def rank_mod_p(rows, long long p):
    cdef cnp.ndarray[i64, ndim=2] A = np.array(rows, dtype=np.int64) % p
    if A.size == 0:
        return 0
    cdef Py_ssize_t n = A.shape[0], m = A.shape[1], r = 0, c, i, j, piv
    cdef long long inv, f, tmp
    for c in range(m):
        if r == n:
            break
        piv = -1
        for i in range(r, n):
            if A[i, c]:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(m):
                tmp = A[r, j]
                A[r, j] = A[piv, j]
                A[piv, j] = tmp
        inv = pow(int(A[r, c]), p - 2, p)
        for j in range(c, m):
            A[r, j] = (A[r, j] * inv) % p
        for i in range(r + 1, n):
            f = A[i, c]
            if f:
                for j in range(c, m):
                    A[i, j] = (A[i, j] - f * A[r, j]) % p
                    if A[i, j] < 0:
                        A[i, j] += p
        r += 1
    return r


def poly_mul_mod(i64[:, ::1] A, i64[:, ::1] B, long long p):
    cdef Py_ssize_t na = A.shape[0], ma = A.shape[1], nb = B.shape[0], mb = B.shape[1]
    out_arr = np.zeros((na + nb - 1, ma + mb - 1), dtype=np.int64)
    cdef i64[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, k, l
    cdef long long b, a
    for i in range(nb):
        for j in range(mb):
            b = B[i, j]
            if b == 0:
                continue
            for k in range(na):
                for l in range(ma):
                    a = A[k, l]
                    if a:
                        out[i + k, j + l] = (out[i + k, j + l] + a * b) % p
    return out_arr
