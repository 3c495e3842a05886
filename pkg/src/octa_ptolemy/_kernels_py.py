"""Pure-Python implementations of the hot kernels.

These mirror ``_kernels.pyx`` exactly and are used when the compiled
extension is unavailable (or when ``OCTA_PTOLEMY_PURE=1``).
"""

import cmath
import math

import numpy as np

PI2_6 = math.pi ** 2 / 6.0

# B_{2k} / (2k+1)!  for the series Li2(z) = sum B_n u^{n+1}/(n+1)!, u = -log(1-z)
_BERNOULLI = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
]
_COEF = [b / math.factorial(2 * k + 3) for k, b in enumerate(_BERNOULLI)]


def _li2_series(z):
    # |z| <= 1 and Re z <= 1/2  =>  |u| < ~1.05
    u = -cmath.log(1.0 - z)
    u2 = u * u
    s = 0.0
    p = u * u2
    for c in _COEF:
        s += c * p
        p *= u2
    return u - u2 / 4.0 + s


def _plog(z):
    # argument in (-pi, pi], so that -x - 0j maps to +i*pi
    if z.imag == 0 and z.real < 0:
        return complex(math.log(-z.real), math.pi)
    return cmath.log(z)


def dilog(z):
    """Principal branch of Li2; on the cut z > 1 the limit from below."""
    z = complex(z)
    if z == 0:
        return 0j
    if z == 1:
        return complex(PI2_6)
    if abs(z) > 1.0:
        lz = _plog(-z)
        return -PI2_6 - 0.5 * lz * lz - _dilog_unit(1.0 / z)
    return _dilog_unit(z)


def _dilog_unit(z):
    if z.real > 0.5:
        w = 1.0 - z
        if w == 0:
            return complex(PI2_6)
        return PI2_6 - cmath.log(z) * cmath.log(w) - _li2_series(w)
    return _li2_series(z)


def eval_system(x, coef, v1, v2, mono_ptr, fac_eq, fac_exp, n_eq):
    """Sum of ``exp * Log(base)`` per equation and the log-derivative matrix.

    Factor ``f`` has monomials ``mono_ptr[f]:mono_ptr[f+1]``; monomial ``m`` is
    ``coef[m] * x[v1[m]] * x[v2[m]]`` (``v2[m] < 0`` for degree one, ``v1[m] < 0``
    for a constant).  Returns ``(logs, jac, min_abs_base)``.
    """
    n_var = len(x)
    logs = np.zeros(n_eq, dtype=complex)
    jac = np.zeros((n_eq, n_var), dtype=complex)
    min_base = math.inf
    n_fac = len(fac_eq)
    for f in range(n_fac):
        base = 0j
        lo, hi = mono_ptr[f], mono_ptr[f + 1]
        for m in range(lo, hi):
            t = coef[m]
            if v1[m] >= 0:
                t = t * x[v1[m]]
            if v2[m] >= 0:
                t = t * x[v2[m]]
            base += t
        ab = abs(base)
        if ab < min_base:
            min_base = ab
        if ab == 0.0:
            continue
        e = fac_exp[f]
        q = fac_eq[f]
        logs[q] += e * cmath.log(base)
        inv = e / base
        for m in range(lo, hi):
            t = coef[m]
            if v1[m] >= 0:
                t = t * x[v1[m]]
            if v2[m] >= 0:
                t = t * x[v2[m]]
            if v1[m] >= 0:
                jac[q, v1[m]] += t * inv
            if v2[m] >= 0:
                jac[q, v2[m]] += t * inv
    return logs, jac, min_base
