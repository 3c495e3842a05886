"""Closed-form per-crossing quantities in terms of the frame values
``(x_a, x_b, x_c, x_d)``, for segment (``z``) or region (``w``) variables."""

from __future__ import annotations

from .gluing import NondegeneracyError

__all__ = ["sigma", "lam", "lam_prime", "m_matrix", "eta", "big_lambda"]


def _div(num, den, what):
    if den == 0:
        raise NondegeneracyError(f"zero denominator in {what}", "denominator")
    return num / den


def sigma(mode, a, b, c, d):
    if mode == "z":
        return _div(a, c, "sigma")
    return _div(a - d, b - c, "sigma")


def lam(mode, a, b, c, d):
    if mode == "z":
        return _div(b * d * (c - a), a * c * (b - d), "lambda")
    return _div(a * c - b * d, (a - d) * (c - b), "lambda")


def lam_prime(mode, a, b, c, d):
    if mode == "z":
        return _div(b - d, c - a, "lambda'")
    return _div(a * c - b * d, (a - b) * (c - d), "lambda'")


def m_matrix(mode, a, b, c, d):
    """Entries of M(c_i); det is identically 1."""
    s = sigma(mode, a, b, c, d)
    if mode == "z":
        up = _div(b * d * (c - a), c * c * (b - d), "M")
        lo = _div((a - c) * (b - d), b * d, "M")
    else:
        up = _div(b * d - a * c, (b - c) ** 2, "M")
        lo = _div((a - b + c - d) ** 2, a * c - b * d, "M")
    return [[s, up], [lo, 2 - s]]


def eta(sign, a, b, c, d):
    """Region-variable eta-value: b d - a c at a positive crossing, its
    negative at a negative one."""
    return (b * d - a * c) if sign > 0 else (a * c - b * d)


def big_lambda(mode, a, b, c, d):
    if mode == "z":
        return (c - a) * (1 / b - 1 / d)
    return _div((a - b + c - d) ** 2, a * c - b * d, "Lambda")
