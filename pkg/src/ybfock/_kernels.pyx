# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for deformed permutation sums."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def monomial_perm_sum(perms, weights, int d, int n, coeffs=None):
    """Compiled twin of ``_kernels_py.monomial_perm_sum``."""
    cdef cnp.int64_t[:, ::1] P = np.ascontiguousarray(
        np.asarray(perms, dtype=np.int64).reshape(-1, n))
    cdef double complex[:, ::1] Q = np.ascontiguousarray(weights, dtype=np.complex128)
    cdef Py_ssize_t M = P.shape[0]
    cdef Py_ssize_t D = int(d) ** int(n)
    out_arr = np.zeros((D, D), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr
    cdef double complex[::1] c
    if coeffs is None:
        c = np.ones(M, dtype=np.complex128)
    else:
        c = np.ascontiguousarray(coeffs, dtype=np.complex128)
    if n == 0:
        out[0, 0] = np.sum(np.asarray(c))
        return out_arr

    cdef cnp.int64_t[::1] dig = np.zeros(n, dtype=np.int64)
    cdef cnp.int64_t[::1] pw = np.zeros(n, dtype=np.int64)
    cdef Py_ssize_t s, a, b, idx, tgt, rem
    cdef double complex w
    for a in range(n):
        pw[a] = int(d) ** int(n - 1 - a)

    for s in range(M):
        for idx in range(D):
            rem = idx
            for a in range(n - 1, -1, -1):
                dig[a] = rem % d
                rem = rem // d
            w = c[s]
            tgt = 0
            for a in range(n):
                tgt += dig[a] * pw[P[s, a]]
                for b in range(a + 1, n):
                    if P[s, a] > P[s, b]:
                        w = w * Q[dig[a], dig[b]]
            out[tgt, idx] += w
    return out_arr


def permutation_matrix(sigma, int d, int n):
    cdef cnp.int64_t[::1] S = np.ascontiguousarray(sigma, dtype=np.int64)
    cdef Py_ssize_t D = int(d) ** int(n)
    out_arr = np.zeros((D, D), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr
    cdef Py_ssize_t idx, a, rem, tgt
    cdef cnp.int64_t[::1] pw = np.asarray(
        [d ** (n - 1 - a) for a in range(n)], dtype=np.int64)
    if n == 0:
        out[0, 0] = 1.0
        return out_arr
    for idx in range(D):
        rem = idx
        tgt = 0
        for a in range(n - 1, -1, -1):
            tgt += (rem % d) * pw[S[a]]
            rem = rem // d
        out[tgt, idx] = 1.0
    return out_arr
