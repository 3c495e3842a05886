"""Gluing-equation systems in segment (T4, ``z``) and region (T5, ``w``) form.

Equations are kept factored: each is a product of ``base ** exponent`` where a
base is a short polynomial in the variables.  Residuals and log-derivatives
are then exact rational-function evaluations.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

import numpy as np

from . import diagram as _dg
from .diagram import CrossingFrame, Diagram, local_frames
from .kernels import eval_system

__all__ = [
    "Assignment",
    "NondegeneracyError",
    "T4DegenerateError",
    "Factor",
    "Equation",
    "GluingSystem",
    "build_t4_system",
    "build_t5_system",
    "build_system",
    "residuals",
    "log_derivatives",
    "check_nondegenerate",
    "z_end_factor",
    "w_corner_factor",
]

REL_TOL = 1e-12


class NondegeneracyError(ValueError):
    def __init__(self, message: str, kind: str = "", where=None):
        super().__init__(message)
        self.kind = kind
        self.where = where


class T4DegenerateError(ValueError):
    pass


@dataclass(frozen=True)
class Assignment:
    mode: str
    values: dict = field(hash=False)

    def __post_init__(self):
        if self.mode not in ("z", "w"):
            raise ValueError(f"unknown mode {self.mode!r}")
        object.__setattr__(self, "values", {int(k): complex(v) for k, v in self.values.items()})

    @property
    def ids(self) -> list[int]:
        return sorted(self.values)

    def vector(self, ids: Iterable[int] | None = None) -> np.ndarray:
        ids = self.ids if ids is None else ids
        return np.array([self.values[i] for i in ids], dtype=complex)

    def scaled(self, c: complex) -> "Assignment":
        return Assignment(self.mode, {k: c * v for k, v in self.values.items()})

    def conjugate(self) -> "Assignment":
        return Assignment(self.mode, {k: v.conjugate() for k, v in self.values.items()})

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "values": {str(k): [self.values[k].real, self.values[k].imag] for k in self.ids},
        }

    @classmethod
    def from_json(cls, data) -> "Assignment":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            mode = data["mode"]
            vals = {int(k): complex(v[0], v[1]) for k, v in data["values"].items()}
        except (KeyError, TypeError, IndexError, ValueError) as exc:
            raise ValueError(f"malformed assignment JSON: {exc}") from exc
        return cls(mode, vals)


# A monomial is (coef, var ids); a factor is a sum of monomials raised to exp.
@dataclass(frozen=True)
class Factor:
    monomials: tuple
    exp: int

    def value(self, values: dict) -> complex:
        base = 0j
        for coef, vs in self.monomials:
            t = coef
            for v in vs:
                t *= values[v]
            base += t
        return base ** self.exp


@dataclass(frozen=True)
class Equation:
    kind: str  # "segment" or "region"
    id: int
    factors: tuple

    def value(self, values: dict) -> complex:
        out = 1 + 0j
        for f in self.factors:
            out *= f.value(values)
        return out


def _var(x, e=1):
    return Factor(((1.0, (x,)),), e)


def _diff(x, y, e=1):
    return Factor(((1.0, (x,)), (-1.0, (y,))), e)


def _cross(a, b, c, d, e=1):
    # a*c - b*d
    return Factor(((1.0, (a, c)), (-1.0, (b, d))), e)


def z_end_factor(pos: str, f: dict) -> list[Factor]:
    """Contribution of one crossing end to a segment equation, for the segment
    sitting at local position ``pos`` of frame ``f`` (ids by letter)."""
    a, b, c, d = f["a"], f["b"], f["c"], f["d"]
    if pos == "a":
        return [_diff(b, a), _var(d), _var(b, -1), _diff(d, a, -1)]
    if pos == "b":
        return [_diff(b, c), _diff(b, a, -1)]
    if pos == "c":
        return [_diff(d, c), _var(b), _var(d, -1), _diff(b, c, -1)]
    if pos == "d":
        return [_diff(d, a), _diff(d, c, -1)]
    raise ValueError(pos)


def _w_pos(pos, a, b, c, d):
    # corner factors at a positive crossing; X = ac - bd
    if pos == "a":
        return [_cross(a, b, c, d), _diff(a, d, -1), _diff(b, a, -1)]
    if pos == "b":
        return [_diff(b, a), _diff(b, c), _cross(a, b, c, d, -1)]
    if pos == "c":
        return [_cross(a, b, c, d), _diff(c, d, -1), _diff(b, c, -1)]
    if pos == "d":
        return [_diff(a, d), _diff(c, d), _cross(a, b, c, d, -1)]
    raise ValueError(pos)


_NEG_SHIFT = {"b": "a", "c": "b", "d": "c", "a": "d"}


def w_corner_factor(pos: str, sign: int, f: dict) -> list[Factor]:
    """tau-value of the corner at local position ``pos`` as factors.

    A negative crossing is the inverse of the positive rule read with the
    labels rotated, (a, b, c, d) -> (b, c, d, a).
    """
    a, b, c, d = f["a"], f["b"], f["c"], f["d"]
    if sign > 0:
        return _w_pos(pos, a, b, c, d)
    return [Factor(x.monomials, -x.exp) for x in _w_pos(_NEG_SHIFT[pos], b, c, d, a)]


class GluingSystem:
    def __init__(self, diagram: Diagram, mode: str, equations, frames):
        self.diagram = diagram
        self.mode = mode
        self.equations: tuple[Equation, ...] = tuple(equations)
        self.frames: tuple[CrossingFrame, ...] = tuple(frames)
        if mode == "z":
            self.var_ids = sorted(diagram.segments)
        else:
            self.var_ids = [r.id for r in diagram.regions]
        self.index = {v: k for k, v in enumerate(self.var_ids)}

    def __len__(self):
        return len(self.equations)

    @cached_property
    def _arrays(self):
        coef, v1, v2, ptr, feq, fexp = [], [], [], [0], [], []
        for q, eqn in enumerate(self.equations):
            for fac in eqn.factors:
                for c, vs in fac.monomials:
                    idx = [self.index[v] for v in vs] + [-1, -1]
                    coef.append(c)
                    v1.append(idx[0])
                    v2.append(idx[1])
                ptr.append(len(coef))
                feq.append(q)
                fexp.append(fac.exp)
        return (
            np.array(coef, dtype=complex),
            np.array(v1, dtype=np.int64),
            np.array(v2, dtype=np.int64),
            np.array(ptr, dtype=np.int64),
            np.array(feq, dtype=np.int64),
            np.array(fexp, dtype=np.int64),
        )

    def evaluate(self, x: np.ndarray):
        """``(log_values, jacobian, min_abs_base)`` at the vector ``x``
        ordered as :attr:`var_ids`.  ``log_values`` are sums of principal logs
        of factors, so ``exp(log_values)`` are the equation values."""
        return eval_system(np.asarray(x, dtype=complex), *self._arrays, len(self.equations))

    def provenance(self) -> list[tuple[str, int]]:
        return [(e.kind, e.id) for e in self.equations]


def build_t4_system(d: Diagram) -> GluingSystem:
    """One equation per segment: product of its two end contributions."""
    kinks = sorted(s.label for s in d.segments.values() if s.is_loop)
    if kinks:
        raise T4DegenerateError(
            f"T4 degenerate: segment {kinks[0]} is a kink (both ends at crossing "
            f"{d.segments[kinks[0]].tail}); use region variables instead"
        )
    frames = local_frames(d, "z")
    pos_of = {}
    for fr in frames:
        for k, s in fr.ids.items():
            pos_of[(fr.crossing, s)] = k
    eqs = []
    for lab in sorted(d.segments):
        seg = d.segments[lab]
        factors = []
        for end in (seg.tail, seg.head):
            fr = frames[end]
            factors += z_end_factor(pos_of[(end, lab)], fr.ids)
        eqs.append(Equation("segment", lab, tuple(factors)))
    return GluingSystem(d, "z", eqs, frames)


def build_t5_system(d: Diagram) -> GluingSystem:
    """One equation per region: the product of the tau-values of its corners."""
    frames = local_frames(d, "w")
    eqs = []
    for r in d.regions:
        factors = []
        for c, sec in r.corners:
            fr = frames[c]
            # letters are read by sector so repeated ids at a kink stay distinct
            factors += w_corner_factor(_dg._W_SECTORS[fr.sign][sec], fr.sign, fr.ids)
        eqs.append(Equation("region", r.id, tuple(factors)))
    return GluingSystem(d, "w", eqs, frames)


def build_system(d: Diagram, mode: str) -> GluingSystem:
    if mode == "z":
        return build_t4_system(d)
    if mode == "w":
        return build_t5_system(d)
    raise ValueError(f"unknown mode {mode!r}")


def check_nondegenerate(d: Diagram, a: Assignment, raise_error: bool = False):
    """Return ``None`` if ``a`` satisfies the non-degeneracy assumptions,
    otherwise a :class:`NondegeneracyError` describing the first violation
    (raised instead when ``raise_error``)."""
    err = _violation(d, a)
    if err is not None and raise_error:
        raise err
    return err


def _violation(d: Diagram, a: Assignment):
    vals = a.values
    expected = sorted(d.segments) if a.mode == "z" else [r.id for r in d.regions]
    if sorted(vals) != expected:
        return NondegeneracyError(
            f"{a.mode}-assignment ids {sorted(vals)} do not match the diagram's {expected}",
            "ids",
        )
    if any(not np.isfinite(v.real) or not np.isfinite(v.imag) for v in vals.values()):
        return NondegeneracyError("assignment has non-finite values", "finite")
    scale = max(abs(v) for v in vals.values())
    tol = REL_TOL * scale
    for k in expected:
        if abs(vals[k]) <= tol:
            return NondegeneracyError(f"variable {k} is zero", "zero", k)
    if a.mode == "z":
        for c in d.crossings:
            labs = sorted(set(c.labels))
            for i in range(len(labs)):
                for j in range(i + 1, len(labs)):
                    if abs(vals[labs[i]] - vals[labs[j]]) <= tol:
                        return NondegeneracyError(
                            f"crossing {c.index}: segments {labs[i]} and {labs[j]} have equal values",
                            "crossing",
                            c.index,
                        )
    else:
        for lab in sorted(d.segments):
            s = d.segments[lab]
            if abs(vals[s.left_region] - vals[s.right_region]) <= tol:
                return NondegeneracyError(
                    f"segment {lab}: adjacent regions {s.left_region} and {s.right_region} "
                    "have equal values",
                    "segment",
                    lab,
                )
        for fr in local_frames(d, "w"):
            wa, wb, wc, wd = fr.values(a)
            if abs(wa * wc - wb * wd) <= REL_TOL * scale * scale:
                return NondegeneracyError(
                    f"crossing {fr.crossing}: w_a w_c = w_b w_d", "crossing", fr.crossing
                )
    return None


def residuals(s: GluingSystem, a: Assignment) -> np.ndarray:
    """Vector of ``equation - 1`` in the order of ``s.equations``."""
    if a.mode != s.mode:
        raise ValueError(f"assignment mode {a.mode} does not match system mode {s.mode}")
    check_nondegenerate(s.diagram, a, raise_error=True)
    logs, _, _ = s.evaluate(a.vector(s.var_ids))
    return np.exp(logs) - 1


def log_derivatives(s: GluingSystem, a: Assignment) -> np.ndarray:
    """Matrix with entry ``(e, v) = x_v d(log eq_e)/d x_v``."""
    if a.mode != s.mode:
        raise ValueError(f"assignment mode {a.mode} does not match system mode {s.mode}")
    check_nondegenerate(s.diagram, a, raise_error=True)
    _, jac, _ = s.evaluate(a.vector(s.var_ids))
    return jac
