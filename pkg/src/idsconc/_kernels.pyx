# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: Sturm-sequence inertia counts for tridiagonal
symmetric matrices.  A pure-Python twin lives in _kernels_py.py."""

import numpy as np

cimport numpy as cnp

cdef double TINY = 2.2250738585072014e-308  # smallest normal double


cdef long _count(const double[::1] diag, const double[::1] off, double x) nogil:
    cdef Py_ssize_t n = diag.shape[0]
    cdef Py_ssize_t i
    cdef double d
    cdef long count = 0
    d = diag[0] - x
    if d == 0.0:
        d = -TINY
    if d < 0.0:
        count += 1
    for i in range(1, n):
        d = (diag[i] - x) - off[i - 1] * off[i - 1] / d
        if d == 0.0:
            d = -TINY
        if d < 0.0:
            count += 1
    return count


def sturm_count(double[::1] diag, double[::1] off, double x):
    """Number of eigenvalues <= x of the symmetric tridiagonal matrix.

    An exactly-zero pivot means x is an eigenvalue of a leading minor; it
    is pushed to -0 so ties count on the <= side.
    """
    if diag.shape[0] == 0:
        return 0
    return _count(diag, off, x)


def sturm_count_many(double[::1] diag, double[::1] off, double[::1] xs):
    """Vector of eigenvalue counts <= x over a grid of shifts."""
    cdef Py_ssize_t m = xs.shape[0]
    cdef Py_ssize_t j
    out = np.empty(m, dtype=np.int64)
    cdef long[::1] view = out
    if diag.shape[0] == 0:
        out[:] = 0
        return out
    with nogil:
        for j in range(m):
            view[j] = _count(diag, off, xs[j])
    return out
