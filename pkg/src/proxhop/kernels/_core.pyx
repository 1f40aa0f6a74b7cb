# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled objective kernels. Same contracts as `_ref.py`."""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, sin, sqrt

cnp.import_array()

cdef double TWO_PI = 6.283185307179586476925286766559
cdef double TEN_PI = 31.415926535897932384626433832795
cdef double LARGE_VALUE = 1.7976931348623157e308
cdef double LJ_COINCIDENT_DIST = 1e-12
cdef double LJ_CLAMP_DIST = 1e-6


def rastrigin_value(double[::1] x):
    cdef Py_ssize_t i, d = x.shape[0]
    cdef double acc = 0.0
    for i in range(d):
        acc += x[i] * x[i] + 10.0 * (1.0 - cos(TWO_PI * x[i]))
    return acc


def rastrigin_gradient(double[::1] x):
    cdef Py_ssize_t i, d = x.shape[0]
    out = np.empty(d, dtype=np.float64)
    cdef double[::1] g = out
    for i in range(d):
        g[i] = 2.0 * x[i] + 2.0 * TEN_PI * sin(TWO_PI * x[i])
    return out


def griewank_value(double[::1] x):
    cdef Py_ssize_t i, d = x.shape[0]
    cdef double quad = 0.0, prod = 1.0
    for i in range(d):
        quad += x[i] * x[i]
        prod *= cos(x[i] / sqrt(i + 1.0))
    return 1.0 + quad / 4000.0 - prod


def griewank_gradient(double[::1] x):
    cdef Py_ssize_t i, d = x.shape[0]
    out = np.empty(d, dtype=np.float64)
    scratch = np.empty(3 * d, dtype=np.float64)
    cdef double[::1] g = out
    cdef double[::1] buf = scratch
    cdef double sc, acc
    # buf layout: [0,d) cos terms, [d,2d) sin*scale terms, [2d,3d) suffix prods
    for i in range(d):
        sc = 1.0 / sqrt(i + 1.0)
        buf[i] = cos(x[i] * sc)
        buf[d + i] = sc * sin(x[i] * sc)
    acc = 1.0
    for i in range(d - 1, -1, -1):
        buf[2 * d + i] = acc
        acc *= buf[i]
    acc = 1.0  # becomes the prefix product
    for i in range(d):
        g[i] = x[i] / 2000.0 + buf[d + i] * acc * buf[2 * d + i]
        acc *= buf[i]
    return out


def lj_value(double[::1] x):
    cdef Py_ssize_t i, j, n = x.shape[0] // 3
    cdef double dx, dy, dz, r2, inv6, acc = 0.0
    cdef double rmin2 = LJ_COINCIDENT_DIST * LJ_COINCIDENT_DIST
    for i in range(n):
        for j in range(i + 1, n):
            dx = x[3 * i] - x[3 * j]
            dy = x[3 * i + 1] - x[3 * j + 1]
            dz = x[3 * i + 2] - x[3 * j + 2]
            r2 = dx * dx + dy * dy + dz * dz
            if r2 < rmin2:
                return LARGE_VALUE
            inv6 = 1.0 / (r2 * r2 * r2)
            acc += inv6 * inv6 - 2.0 * inv6
    return acc


def lj_gradient(double[::1] x):
    cdef Py_ssize_t i, j, n = x.shape[0] // 3
    cdef double dx, dy, dz, r, inv2, inv8, coeff
    out = np.zeros(3 * n, dtype=np.float64)
    cdef double[::1] g = out
    for i in range(n):
        for j in range(i + 1, n):
            dx = x[3 * i] - x[3 * j]
            dy = x[3 * i + 1] - x[3 * j + 1]
            dz = x[3 * i + 2] - x[3 * j + 2]
            r = sqrt(dx * dx + dy * dy + dz * dz)
            if r < LJ_COINCIDENT_DIST:
                continue
            if r < LJ_CLAMP_DIST:
                r = LJ_CLAMP_DIST
            inv2 = 1.0 / (r * r)
            inv8 = inv2 * inv2 * inv2 * inv2
            coeff = 12.0 * (inv8 - inv8 * inv2 * inv2 * inv2)
            g[3 * i] += coeff * dx
            g[3 * i + 1] += coeff * dy
            g[3 * i + 2] += coeff * dz
            g[3 * j] -= coeff * dx
            g[3 * j + 1] -= coeff * dy
            g[3 * j + 2] -= coeff * dz
    return out
