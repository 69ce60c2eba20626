# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled nearest-neighbor and farthest-point-sampling loops.

Must stay bit-identical to ``_fallback``: same operation order, first index
wins ties, selected points excluded with a -1 sentinel.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def nearest_sq_dist(const double[:, ::1] x, const double[:, ::1] y):
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t m = y.shape[0]
    dist_arr = np.empty(n, dtype=np.float64)
    idx_arr = np.empty(n, dtype=np.int64)
    cdef double[::1] dist = dist_arr
    cdef cnp.int64_t[::1] idx = idx_arr
    cdef Py_ssize_t i, j, best_j
    cdef double dx, dy, dz, d, best
    for i in range(n):
        best_j = 0
        dx = x[i, 0] - y[0, 0]
        dy = x[i, 1] - y[0, 1]
        dz = x[i, 2] - y[0, 2]
        best = dx * dx + dy * dy + dz * dz
        for j in range(1, m):
            dx = x[i, 0] - y[j, 0]
            dy = x[i, 1] - y[j, 1]
            dz = x[i, 2] - y[j, 2]
            d = dx * dx + dy * dy + dz * dz
            if d < best:
                best = d
                best_j = j
        dist[i] = best
        idx[i] = best_j
    return dist_arr, idx_arr


def farthest_point_indices(const double[:, ::1] points, Py_ssize_t k, Py_ssize_t start):
    cdef Py_ssize_t n = points.shape[0]
    out_arr = np.empty(k, dtype=np.int64)
    cdef cnp.int64_t[::1] out = out_arr
    dmin_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] dmin = dmin_arr
    cdef Py_ssize_t i, t, nxt
    cdef double dx, dy, dz, d, best
    out[0] = start
    for i in range(n):
        dx = points[i, 0] - points[start, 0]
        dy = points[i, 1] - points[start, 1]
        dz = points[i, 2] - points[start, 2]
        dmin[i] = dx * dx + dy * dy + dz * dz
    dmin[start] = -1.0
    for t in range(1, k):
        nxt = 0
        best = dmin[0]
        for i in range(1, n):
            if dmin[i] > best:
                best = dmin[i]
                nxt = i
        out[t] = nxt
        for i in range(n):
            dx = points[i, 0] - points[nxt, 0]
            dy = points[i, 1] - points[nxt, 1]
            dz = points[i, 2] - points[nxt, 2]
            d = dx * dx + dy * dy + dz * dz
            if d < dmin[i]:
                dmin[i] = d
        dmin[nxt] = -1.0
    return out_arr
