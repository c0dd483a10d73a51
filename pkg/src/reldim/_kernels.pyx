# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled GF(p) row reduction. Same contract as ``_kernels_py.rref_mod_p``."""

import numpy as np
cimport numpy as cnp

ctypedef long long i64


cdef inline i64 _inv(i64 a, i64 p):
    cdef i64 result = 1
    cdef i64 e = p - 2
    a %= p
    while e > 0:
        if e & 1:
            result = (result * a) % p
        a = (a * a) % p
        e >>= 1
    return result


def rref_mod_p(a, long long p):
    cdef cnp.ndarray[i64, ndim=2] arr = np.array(a, dtype=np.int64, copy=True) % p
    cdef i64[:, ::1] r = np.ascontiguousarray(arr)
    cdef Py_ssize_t rows = r.shape[0]
    cdef Py_ssize_t cols = r.shape[1]
    cdef Py_ssize_t row = 0, col, i, j, piv
    cdef i64 inv, f, tmp
    pivots = []
    for col in range(cols):
        if row == rows:
            break
        piv = -1
        for i in range(row, rows):
            if r[i, col] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != row:
            for j in range(cols):
                tmp = r[row, j]
                r[row, j] = r[piv, j]
                r[piv, j] = tmp
        inv = _inv(r[row, col], p)
        if inv != 1:
            for j in range(col, cols):
                r[row, j] = (r[row, j] * inv) % p
        for i in range(rows):
            if i == row:
                continue
            f = r[i, col]
            if f == 0:
                continue
            for j in range(col, cols):
                if r[row, j] != 0:
                    r[i, j] = (r[i, j] - f * r[row, j]) % p
                    if r[i, j] < 0:
                        r[i, j] += p
        pivots.append(col)
        row += 1
    return np.asarray(r), pivots
