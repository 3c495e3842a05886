"""Principal-branch complex special functions.

``log`` has argument in (-pi, pi]; ``principal_sqrt`` has argument in
(-pi/2, pi/2].  ``dilog`` is the principal branch of Li2 with cut [1, inf);
on the cut it returns the limit from below, which matches ``log(1 - x)``
taking the value ``log|1 - x| + i*pi`` there.
"""

import cmath
import math

from .kernels import dilog as _dilog

__all__ = ["dilog", "bloch_wigner", "principal_sqrt", "principal_log"]


def dilog(z: complex) -> complex:
    return _dilog(complex(z))


def principal_log(z: complex) -> complex:
    z = complex(z)
    if z == 0:
        raise ValueError("log(0)")
    # cmath returns arg(-x - 0j) = -pi; fold onto (-pi, pi]
    if z.imag == 0 and z.real < 0:
        return complex(math.log(-z.real), math.pi)
    return cmath.log(z)


def principal_sqrt(z: complex) -> complex:
    z = complex(z)
    if z.imag == 0 and z.real < 0:
        return complex(0.0, math.sqrt(-z.real))
    return cmath.sqrt(z)


def bloch_wigner(z: complex) -> float:
    """D(z) = Im Li2(z) + log|z| arg(1 - z): volume of the ideal tetrahedron
    with shape ``z``."""
    z = complex(z)
    if z == 0 or z == 1:
        raise ValueError(f"bloch_wigner undefined at {z}")
    if z.imag == 0:
        return 0.0
    return dilog(z).imag + math.log(abs(z)) * cmath.phase(1 - z)
