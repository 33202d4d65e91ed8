# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: turtle walk on the triangular lattice and
Sturm-sequence bisection for symmetric tridiagonal matrices.

Must stay call-compatible with :mod:`arrowhead._pykernels`.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs

cnp.import_array()

cdef long DA[6]
cdef long DB[6]
DA[:] = [1, 0, -1, -1, 0, 1]
DB[:] = [0, 1, 1, 0, -1, -1]


def turtle_walk(const unsigned char[::1] program, int start_dir):
    cdef Py_ssize_t n = program.shape[0]
    cdef Py_ssize_t i, k = 0, steps = 0
    for i in range(n):
        if program[i] == 0:
            steps += 1
    out = np.zeros((steps + 1, 2), dtype=np.int64)
    cdef long long[:, ::1] pts = out
    cdef long a = 0, b = 0
    cdef int d = ((start_dir % 6) + 6) % 6
    cdef unsigned char c
    for i in range(n):
        c = program[i]
        if c == 0:
            a += DA[d]
            b += DB[d]
            k += 1
            pts[k, 0] = a
            pts[k, 1] = b
        elif c == 1:
            d = (d + 5) % 6
        elif c == 2:
            d = (d + 1) % 6
    return out


cdef inline Py_ssize_t _count_below(const double[::1] diag, const double[::1] offsq,
                                    double x, double pivmin) nogil:
    cdef Py_ssize_t i, n = diag.shape[0], cnt = 0
    cdef double q = diag[0] - x
    if fabs(q) < pivmin:
        q = -pivmin
    if q < 0:
        cnt += 1
    for i in range(1, n):
        q = diag[i] - x - offsq[i - 1] / q
        if fabs(q) < pivmin:
            q = -pivmin
        if q < 0:
            cnt += 1
    return cnt


def sturm_count(const double[::1] diag, const double[::1] offsq, double x):
    return _count_below(diag, offsq, x, 1e-300)


def tridiag_eigvalsh(const double[::1] diag, const double[::1] off, double tol=1e-14,
                     int max_iter=200):
    cdef Py_ssize_t n = diag.shape[0]
    cdef Py_ssize_t i, k
    out = np.empty(n, dtype=np.float64)
    if n == 0:
        return out
    cdef double[::1] ev = out
    sq = np.asarray(off, dtype=np.float64) ** 2
    cdef double[::1] offsq = sq
    cdef double lo0 = diag[0], hi0 = diag[0], r
    for i in range(n):
        r = 0.0
        if i > 0:
            r += fabs(off[i - 1])
        if i < n - 1:
            r += fabs(off[i])
        if diag[i] - r < lo0:
            lo0 = diag[i] - r
        if diag[i] + r > hi0:
            hi0 = diag[i] + r
    # hi_b[j] is an upper bound for eigenvalue j, tightened by every count
    hi_arr = np.full(n, hi0, dtype=np.float64)
    cdef double[::1] hi_b = hi_arr
    cdef double lo, hi, mid
    cdef Py_ssize_t c, j
    cdef int it
    for k in range(n):
        lo = ev[k - 1] if k > 0 else lo0
        hi = hi_b[k]
        it = 0
        while hi - lo > tol and it < max_iter:
            mid = 0.5 * (lo + hi)
            if mid == lo or mid == hi:
                break
            c = _count_below(diag, offsq, mid, 1e-300)
            if c > k:
                hi = mid
                for j in range(k + 1, c):
                    if mid < hi_b[j]:
                        hi_b[j] = mid
            else:
                lo = mid
            it += 1
        if it >= max_iter:
            raise ArithmeticError(f"bisection did not converge for eigenvalue {k}")
        ev[k] = 0.5 * (lo + hi)
    return out
