# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled replicator-dynamics kernel.

Mirrors the numpy fallback exactly: multiplicative update, renormalization
each step, L1 stopping rule.
"""

from libc.math cimport fabs

import numpy as np

cimport numpy as cnp

cnp.import_array()


def replicator(double[:, ::1] P, double[::1] x0, double tol, int max_iter):
    cdef Py_ssize_t m = P.shape[0]
    cdef Py_ssize_t i, j
    cdef int it
    cdef double denom, acc, diff, total, xn

    x_arr = np.array(x0, dtype=np.float64)
    px_arr = np.empty(m, dtype=np.float64)
    cdef double[::1] x = x_arr
    cdef double[::1] px = px_arr

    for it in range(max_iter):
        denom = 0.0
        for i in range(m):
            acc = 0.0
            for j in range(m):
                acc += P[i, j] * x[j]
            px[i] = acc
            denom += x[i] * acc
        if denom <= 0.0:
            return x_arr, it
        total = 0.0
        for i in range(m):
            px[i] = x[i] * px[i] / denom
            total += px[i]
        diff = 0.0
        for i in range(m):
            xn = px[i] / total
            diff += fabs(xn - x[i])
            x[i] = xn
        if diff < tol:
            return x_arr, it + 1
    return x_arr, max_iter
