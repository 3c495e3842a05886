"""2x2 complex matrices up to global sign (elements of PSL(2, C))."""

from __future__ import annotations

import cmath
import math

import numpy as np

__all__ = ["ProjMat2", "unipotent"]


class ProjMat2:
    """A PSL(2, C) element stored by its det-1 representative.

    The sign is normalized so that the first nonzero entry (row-major) has
    argument in (-pi/2, pi/2].
    """

    __slots__ = ("m",)

    def __init__(self, m, normalize: bool = True):
        m = np.array(m, dtype=complex).reshape(2, 2)
        if normalize:
            det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
            if det == 0:
                raise ValueError("singular matrix")
            m = m / cmath.sqrt(det)
            m = _sign_normalize(m)
        self.m = m

    def __matmul__(self, other: "ProjMat2") -> "ProjMat2":
        return ProjMat2(self.m @ other.m)

    def inv(self) -> "ProjMat2":
        a, b, c, d = self.m.ravel()
        return ProjMat2([[d, -b], [-c, a]])

    def __pow__(self, e: int) -> "ProjMat2":
        if e == 1:
            return self
        if e == -1:
            return self.inv()
        if e == 0:
            return ProjMat2(np.eye(2))
        out = self if e > 0 else self.inv()
        base = out
        for _ in range(abs(e) - 1):
            out = out @ base
        return out

    @property
    def trace(self) -> complex:
        return complex(self.m[0, 0] + self.m[1, 1])

    @property
    def det(self) -> complex:
        m = self.m
        return complex(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])

    def distance(self, other: "ProjMat2") -> float:
        """Entrywise max distance, minimized over the global sign."""
        return float(min(np.max(np.abs(self.m - other.m)), np.max(np.abs(self.m + other.m))))

    def close(self, other: "ProjMat2", tol: float) -> bool:
        return self.distance(other) <= tol * max(1.0, float(np.max(np.abs(self.m))))

    def to_json(self) -> list:
        return [[float(x.real), float(x.imag)] for x in self.m.ravel()]

    def __repr__(self):
        return f"ProjMat2({self.m.tolist()})"


def _sign_normalize(m):
    for x in m.ravel():
        if abs(x) > 1e-300:
            ph = math.atan2(x.imag, x.real)
            if not (-math.pi / 2 < ph <= math.pi / 2):
                return -m
            return m
    return m


def unipotent(t: complex) -> ProjMat2:
    return ProjMat2([[1, t], [0, 1]])
