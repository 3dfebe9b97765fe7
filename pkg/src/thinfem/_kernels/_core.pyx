# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementations of the hot kernels."""

import numpy as np

cimport cython
from libc.math cimport atan2, fabs


def csr_matvec(indptr, indices, data, x):
    """y = A @ x for a CSR matrix; row entries accumulated in storage order."""
    cdef const long long[::1] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef const long long[::1] ix = np.ascontiguousarray(indices, dtype=np.int64)
    cdef const double[::1] a = np.ascontiguousarray(data, dtype=np.float64)
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t n = ip.shape[0] - 1
    out = np.zeros(n, dtype=np.float64)
    cdef double[::1] y = out
    cdef Py_ssize_t i, j
    cdef double acc
    for i in range(n):
        acc = 0.0
        for j in range(ip[i], ip[i + 1]):
            acc += a[j] * xv[ix[j]]
        y[i] = acc
    return out


def tri_corner_angles(tri):
    """Inner angles at the three corners of each triangle, via atan2(|cross|, dot)."""
    cdef const double[:, :, ::1] t = np.ascontiguousarray(tri, dtype=np.float64)
    cdef Py_ssize_t m = t.shape[0]
    out = np.empty((m, 3), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef Py_ssize_t e, i, j, k
    cdef double ux, uy, vx, vy, cross, dot
    for e in range(m):
        for i in range(3):
            j = (i + 1) % 3
            k = (i + 2) % 3
            ux = t[e, j, 0] - t[e, i, 0]
            uy = t[e, j, 1] - t[e, i, 1]
            vx = t[e, k, 0] - t[e, i, 0]
            vy = t[e, k, 1] - t[e, i, 1]
            cross = ux * vy - uy * vx
            dot = ux * vx + uy * vy
            o[e, i] = atan2(fabs(cross), dot)
    return out
