# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: clipped-aggregate centroid and Bland simplex loop.

Semantics match ``_kernels_py`` exactly.
"""

from libc.math cimport INFINITY, fabs
from libc.stdlib cimport qsort

import numpy as np
cimport numpy as cnp

cnp.import_array()

cdef enum:
    MAXLINES = 64
    MAXPTS = 4096
    STATUS_ITERATION_LIMIT_C = 2

STATUS_OPTIMAL = 0
STATUS_UNBOUNDED = 1
STATUS_ITERATION_LIMIT = 2


cdef int _cmp(const void* a, const void* b) noexcept nogil:
    cdef double x = (<double*>a)[0]
    cdef double y = (<double*>b)[0]
    if x < y:
        return -1
    if x > y:
        return 1
    return 0


cdef inline double _membership(double x, double b, double p, double e) noexcept nogil:
    if x < p:
        if b == -INFINITY:
            return 1.0
        if x <= b:
            return 0.0
        return (x - b) / (p - b)
    if e == INFINITY:
        return 1.0
    if x >= e:
        return 0.0
    if e == p:
        return 1.0
    return (e - x) / (e - p)


def clipped_centroid(double[:] begin, double[:] peak, double[:] end,
                     double[:] act, double lo, double hi):
    cdef Py_ssize_t k = act.shape[0]
    cdef double slopes[MAXLINES]
    cdef double icepts[MAXLINES]
    cdef double pts[MAXPTS]
    cdef int nl = 0
    cdef int npt = 0
    cdef Py_ssize_t i, j
    cdef double b, p, e, a, v, x, best, m, ds, xi
    if k * 3 > MAXLINES:
        raise ValueError("too many membership functions")
    pts[0] = lo
    pts[1] = hi
    npt = 2
    for i in range(k):
        b = begin[i]
        p = peak[i]
        e = end[i]
        a = act[i]
        if a <= 0.0:
            continue
        if lo < b < hi:
            pts[npt] = b
            npt += 1
        if lo < p < hi:
            pts[npt] = p
            npt += 1
        if lo < e < hi:
            pts[npt] = e
            npt += 1
        if b != -INFINITY and p > b:
            slopes[nl] = 1.0 / (p - b)
            icepts[nl] = -b / (p - b)
            nl += 1
        if e != INFINITY and e > p:
            slopes[nl] = -1.0 / (e - p)
            icepts[nl] = e / (e - p)
            nl += 1
        slopes[nl] = 0.0
        icepts[nl] = a
        nl += 1
    for i in range(nl):
        for j in range(i + 1, nl):
            ds = slopes[i] - slopes[j]
            if ds != 0.0:
                xi = (icepts[j] - icepts[i]) / ds
                if lo < xi < hi:
                    pts[npt] = xi
                    npt += 1
    qsort(pts, npt, sizeof(double), _cmp)
    cdef double area = 0.0
    cdef double moment = 0.0
    cdef double px = 0.0, py = 0.0, dx
    cdef int have = 0
    for j in range(npt):
        x = pts[j]
        if have and x == px:
            continue
        best = 0.0
        for i in range(k):
            a = act[i]
            if a <= best:
                continue
            m = _membership(x, begin[i], peak[i], end[i])
            v = m if m < a else a
            if v > best:
                best = v
        if have:
            dx = x - px
            area += 0.5 * dx * (py + best)
            moment += dx / 6.0 * (px * (2.0 * py + best) + x * (py + 2.0 * best))
        px = x
        py = best
        have = 1
    return area, moment


def simplex_iterate(double[:, ::1] T, cnp.intp_t[:] basis, Py_ssize_t ncols,
                    double tol, Py_ssize_t max_iter):
    cdef Py_ssize_t m = T.shape[0] - 1
    cdef Py_ssize_t w = T.shape[1]
    cdef Py_ssize_t rhs = w - 1
    cdef Py_ssize_t it = 0
    cdef Py_ssize_t i, j, col, row
    cdef double best, ratio, piv, f, lim
    cdef cnp.intp_t bidx = 0
    cdef int status = STATUS_ITERATION_LIMIT_C
    with nogil:
        while it < max_iter:
            col = -1
            for j in range(ncols):
                if T[m, j] < -tol:
                    col = j
                    break
            if col < 0:
                status = 0
                break
            best = INFINITY
            for i in range(m):
                if T[i, col] > tol:
                    ratio = T[i, rhs] / T[i, col]
                    if ratio < best:
                        best = ratio
            if best == INFINITY:
                status = 1
                break
            lim = best + 1e-12 * (fabs(best) if fabs(best) > 1.0 else 1.0)
            row = -1
            for i in range(m):
                if T[i, col] > tol:
                    ratio = T[i, rhs] / T[i, col]
                    if ratio <= lim and (row < 0 or basis[i] < bidx):
                        row = i
                        bidx = basis[i]
            piv = T[row, col]
            for j in range(w):
                T[row, j] = T[row, j] / piv
            for i in range(m + 1):
                if i == row:
                    continue
                f = T[i, col]
                if f != 0.0:
                    for j in range(w):
                        T[i, j] = T[i, j] - f * T[row, j]
            basis[row] = col
            it += 1
    return status, it
