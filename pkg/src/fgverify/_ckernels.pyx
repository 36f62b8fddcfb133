# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels (see _pykernels for the reference)."""
import numpy as np


cpdef double complex qprod(double complex a, double complex q, long n):
    cdef double complex r = 1.0
    cdef double complex t = a
    cdef long i
    for i in range(n):
        r *= 1.0 - t
        t *= q
    return r


cpdef double complex theta_prod(double complex x, double complex q, long n):
    return qprod(x, q, n) * qprod(q / x, q, n)


cpdef double complex jacobi_sum(double complex x, double complex q, long N):
    cdef double complex total = 1.0
    cdef double complex t = 1.0
    cdef double complex qi = 1.0
    cdef long i
    for i in range(N):
        t = -x * qi * t
        qi *= q
        total += t
    t = 1.0
    qi = 1.0 / q
    for i in range(N):
        t = -t / (x * qi)
        qi /= q
        total += t
    return total


cdef inline double cabs2(double complex z) nogil:
    return z.real * z.real + z.imag * z.imag


def self_orth_max(lam):
    cdef double complex[:, ::1] L = np.ascontiguousarray(lam, dtype=np.complex128)
    cdef Py_ssize_t n = L.shape[0]
    cdef Py_ssize_t m, i, j, k
    cdef double complex r
    cdef double best = 0.0, v
    with nogil:
        for m in range(n):
            for i in range(n):
                for j in range(n):
                    for k in range(n):
                        r = L[m, i] * L[k, j] - L[k, i] * L[m, j] + L[k, m] * L[i, j]
                        v = cabs2(r)
                        if v > best:
                            best = v
    return best ** 0.5


def cross_orth_max(c, lam):
    cdef double complex[:, ::1] C = np.ascontiguousarray(c, dtype=np.complex128)
    cdef double complex[:, ::1] L = np.ascontiguousarray(lam, dtype=np.complex128)
    cdef Py_ssize_t n = L.shape[0]
    cdef Py_ssize_t m, i, j, k
    cdef double complex r
    cdef double best = 0.0, v
    if C.shape[0] != n:
        raise ValueError("coefficient windows differ")
    with nogil:
        for m in range(n):
            for i in range(n):
                for j in range(n):
                    for k in range(n):
                        r = C[m, i] * L[k, j] - C[m, j] * L[k, i] + C[i, j] * L[k, m]
                        v = cabs2(r)
                        if v > best:
                            best = v
    return best ** 0.5
