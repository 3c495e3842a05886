# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels (``_kernels_py`` is the reference)."""

import numpy as np
cimport numpy as cnp

cdef extern from "complex.h" nogil:
    double complex clog(double complex)
    double cabs(double complex)
    double creal(double complex)

cdef double PI2_6 = 1.6449340668482264

cdef double[15] _COEF
_b = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0,
      -691.0 / 2730.0, 7.0 / 6.0, -3617.0 / 510.0, 43867.0 / 798.0,
      -174611.0 / 330.0, 854513.0 / 138.0, -236364091.0 / 2730.0,
      8553103.0 / 6.0, -23749461029.0 / 870.0, 8615841276005.0 / 14322.0]
import math as _math
for _k in range(15):
    _COEF[_k] = _b[_k] / _math.factorial(2 * _k + 3)


cdef inline double complex _series(double complex z) nogil:
    cdef double complex u = -clog(1.0 - z)
    cdef double complex u2 = u * u
    cdef double complex p = u * u2
    cdef double complex s = 0
    cdef int k
    for k in range(15):
        s = s + _COEF[k] * p
        p = p * u2
    return u - u2 / 4.0 + s


cdef inline double complex _unit(double complex z) nogil:
    cdef double complex w
    if creal(z) > 0.5:
        w = 1.0 - z
        if w == 0:
            return PI2_6
        return PI2_6 - clog(z) * clog(w) - _series(w)
    return _series(z)


cdef double complex _dilog(double complex z) nogil:
    cdef double complex lz
    if z == 0:
        return 0
    if z == 1:
        return PI2_6
    if cabs(z) > 1.0:
        lz = clog(-z)
        if z.imag == 0 and z.real > 0:
            lz = lz.real + 3.141592653589793j
        return -PI2_6 - 0.5 * lz * lz - _unit(1.0 / z)
    return _unit(z)


def dilog(z):
    """Principal branch of Li2; on the cut z > 1 the limit from below."""
    return complex(_dilog(complex(z)))


def eval_system(x, coef, v1, v2, mono_ptr, fac_eq, fac_exp, Py_ssize_t n_eq):
    cdef double complex[:] xv = np.ascontiguousarray(x, dtype=np.complex128)
    cdef double complex[:] cv = np.ascontiguousarray(coef, dtype=np.complex128)
    cdef cnp.int64_t[:] a1 = np.ascontiguousarray(v1, dtype=np.int64)
    cdef cnp.int64_t[:] a2 = np.ascontiguousarray(v2, dtype=np.int64)
    cdef cnp.int64_t[:] ptr = np.ascontiguousarray(mono_ptr, dtype=np.int64)
    cdef cnp.int64_t[:] feq = np.ascontiguousarray(fac_eq, dtype=np.int64)
    cdef cnp.int64_t[:] fexp = np.ascontiguousarray(fac_exp, dtype=np.int64)
    cdef Py_ssize_t n_var = xv.shape[0]
    logs_arr = np.zeros(n_eq, dtype=np.complex128)
    jac_arr = np.zeros((n_eq, n_var), dtype=np.complex128)
    cdef double complex[:] logs = logs_arr
    cdef double complex[:, :] jac = jac_arr
    cdef double min_base = float("inf")
    cdef Py_ssize_t f, m, q
    cdef double complex base, t, inv
    cdef double ab
    cdef long e
    with nogil:
        for f in range(feq.shape[0]):
            base = 0
            for m in range(ptr[f], ptr[f + 1]):
                t = cv[m]
                if a1[m] >= 0:
                    t = t * xv[a1[m]]
                if a2[m] >= 0:
                    t = t * xv[a2[m]]
                base = base + t
            ab = cabs(base)
            if ab < min_base:
                min_base = ab
            if ab == 0.0:
                continue
            e = fexp[f]
            q = feq[f]
            logs[q] = logs[q] + e * clog(base)
            inv = e / base
            for m in range(ptr[f], ptr[f + 1]):
                t = cv[m]
                if a1[m] >= 0:
                    t = t * xv[a1[m]]
                if a2[m] >= 0:
                    t = t * xv[a2[m]]
                if a1[m] >= 0:
                    jac[q, a1[m]] = jac[q, a1[m]] + t * inv
                if a2[m] >= 0:
                    jac[q, a2[m]] = jac[q, a2[m]] + t * inv
    return logs_arr, jac_arr, min_base
