# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; see _pure.py for the reference semantics."""

import numpy as np

cimport numpy as cnp

cnp.import_array()

KIND_RANK = 0
KIND_MASS = 1


def count_excluded(ranks, cum_before, int kind, double param):
    cdef cnp.int64_t[::1] r = np.ascontiguousarray(ranks, dtype=np.int64)
    cdef double[::1] cb = np.ascontiguousarray(cum_before, dtype=np.float64)
    cdef Py_ssize_t i, n = r.shape[0]
    cdef long long k
    cdef long long count = 0
    if kind == 0:
        k = <long long> param
        for i in range(n):
            if r[i] > k:
                count += 1
    elif kind == 1:
        for i in range(n):
            if cb[i] >= param:
                count += 1
    else:
        raise ValueError(f"unknown kind {kind}")
    return count


def best_threshold(x, y):
    cdef cnp.ndarray[double, ndim=1] xa = np.ascontiguousarray(x, dtype=np.float64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] ya = np.ascontiguousarray(y, dtype=np.uint8)
    cdef Py_ssize_t n = xa.shape[0]
    if n < 2:
        return False, 0.0, 0.0
    cdef cnp.ndarray[cnp.intp_t, ndim=1] order = np.argsort(xa, kind="stable")
    cdef double[::1] xs = xa[order]
    cdef cnp.uint8_t[::1] ys = np.ascontiguousarray(ya[order])
    cdef double total1 = 0.0
    cdef Py_ssize_t i
    for i in range(n):
        total1 += ys[i]
    cdef double left1 = 0.0
    cdef double left_n, right_n, right1, p1l, p1r, gini
    cdef double best = np.inf
    cdef Py_ssize_t best_i = -1
    for i in range(n - 1):
        left1 += ys[i]
        if xs[i + 1] == xs[i]:
            continue
        left_n = i + 1.0
        right_n = n - left_n
        right1 = total1 - left1
        p1l = left1 / left_n
        p1r = right1 / right_n
        gini = (left_n * (2.0 * p1l * (1.0 - p1l)) + right_n * (2.0 * p1r * (1.0 - p1r))) / n
        if gini < best:
            best = gini
            best_i = i
    if best_i < 0:
        return False, 0.0, 0.0
    return True, 0.5 * (xs[best_i] + xs[best_i + 1]), best
