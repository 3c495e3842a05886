"""Holonomy invariants of a gluing-equation solution: obstruction class, cusp
shape, peripheral and Wirtinger matrices, and the complex volume."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import local
from .diagram import Diagram, local_frames, under_pass_order
from .gluing import Assignment, build_system, residuals
from .projmat import ProjMat2, unipotent
from .specfun import bloch_wigner, dilog, principal_log

__all__ = [
    "InvariantError",
    "FlatTetrahedronWarning",
    "obstruction_class",
    "CuspShape",
    "cusp_shape",
    "peripheral_holonomy",
    "HolonomyData",
    "holonomy_data",
    "wirtinger_matrices",
    "WirtingerReport",
    "verify_wirtinger",
    "longitude_word",
    "ComplexVolume",
    "complex_volume",
    "potential_terms",
    "tetra_volume_oracle",
    "InvariantReport",
    "invariant_report",
]

OBSTRUCTION_TOL = 1e-6
CUSP_TOL = 1e-9
WIRTINGER_TOL = 1e-8
LATTICE_TOL = 1e-8

TWO_PI = 2 * math.pi
PI2 = math.pi**2


class InvariantError(ValueError):
    pass


class FlatTetrahedronWarning(UserWarning):
    pass


def obstruction_class(d: Diagram, a: Assignment, tol: float = OBSTRUCTION_TOL) -> int:
    """The product of the sigma-values rounded to +-1."""
    prod = 1 + 0j
    for f in local_frames(d, a.mode):
        prod *= local.sigma(a.mode, *f.values(a))
    return _round_pm1(prod, tol)


def _round_pm1(prod: complex, tol: float) -> int:
    s = 1 if abs(prod - 1) <= abs(prod + 1) else -1
    if abs(prod - s) > tol:
        raise InvariantError(f"not on gluing variety: product of sigma is {prod:.6g}")
    return s


@dataclass
class CuspShape:
    value: complex
    lambdas: list
    lambda_primes: list
    writhe: int

    @property
    def longitude(self) -> complex:
        return sum(self.lambdas)


def cusp_shape(d: Diagram, a: Assignment, base: int | None = None, tol: float = CUSP_TOL) -> CuspShape:
    """Sum of lambda over the crossings minus the writhe.  Lambdas are listed
    in under-pass order.  The top-diagonal variant lambda' must agree."""
    frames = local_frames(d, a.mode)
    order, _ = under_pass_order(d, base)
    lams = [local.lam(a.mode, *frames[i].values(a)) for i in order]
    primes = [local.lam_prime(a.mode, *frames[i].values(a)) for i in order]
    s, sp = sum(lams), sum(primes)
    if abs(s - sp) > tol * max(1.0, abs(s)):
        raise InvariantError(f"cusp shape from lambda ({s}) and lambda' ({sp}) disagree")
    return CuspShape(s - d.writhe, lams, primes, d.writhe)


def peripheral_holonomy(d: Diagram, a: Assignment) -> tuple[ProjMat2, ProjMat2]:
    """(rho(meridian), rho(blackboard longitude)) in the upper-triangular gauge."""
    cs = cusp_shape(d, a)
    return unipotent(1), unipotent(cs.longitude)


@dataclass
class HolonomyData:
    order: tuple
    arcs: tuple
    signs: list
    lambdas: list
    m: list  # M(c_i)
    powers: list  # rho(mu_i^{e_i})
    mus: list  # rho(mu_i)


def holonomy_data(d: Diagram, a: Assignment, base: int | None = None) -> HolonomyData:
    """Wirtinger images by the inductive conjugation rule.

    With P_i = X_1 ... X_{i-1} and S_i = lambda_1 + ... + lambda_i,
    rho(mu_i^{e_i}) = X_i = P_i^{-1} T(S_i) M(c_i) T(S_i)^{-1} P_i where
    T(s) is the unipotent [[1, s], [0, 1]].
    """
    frames = local_frames(d, a.mode)
    order, arcs = under_pass_order(d, base)
    vals = [frames[i].values(a) for i in order]
    lams = [local.lam(a.mode, *v) for v in vals]
    ms = [ProjMat2(local.m_matrix(a.mode, *v)) for v in vals]
    signs = [d.crossings[i].sign for i in order]
    p = ProjMat2(np.eye(2))
    s = 0j
    powers, mus = [], []
    for lam_i, m, e in zip(lams, ms, signs):
        s += lam_i
        t = unipotent(s)
        x = p.inv() @ t @ m @ t.inv() @ p
        powers.append(x)
        mus.append(x**e)
        p = p @ x
    return HolonomyData(order, arcs, signs, lams, ms, powers, mus)


def wirtinger_matrices(d: Diagram, a: Assignment, base: int | None = None) -> list[ProjMat2]:
    """rho(mu_i) for c_1..c_n in under-pass order; mu_i is the meridian of
    the over-arc at c_i."""
    return holonomy_data(d, a, base).mus


def longitude_word(d: Diagram, mats: list[ProjMat2], base: int | None = None) -> ProjMat2:
    """Product of mu_i^{e_i} along the knot: the blackboard longitude."""
    order, _ = under_pass_order(d, base)
    w = ProjMat2(np.eye(2))
    for i, m in zip(order, mats):
        w = w @ (m ** d.crossings[i].sign)
    return w


@dataclass
class WirtingerReport:
    ok: bool
    relation_errors: list
    traces: list
    degenerate: bool
    failures: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "relationErrors": self.relation_errors,
            "traces": [[t.real, t.imag] for t in self.traces],
            "degenerate": self.degenerate,
            "failures": self.failures,
        }


def verify_wirtinger(d: Diagram, mats: list[ProjMat2], base: int | None = None,
                     tol: float = WIRTINGER_TOL) -> WirtingerReport:
    """Check that ``mats`` (rho(mu_i) in under-pass order) define a
    parabolic representation of the knot group.

    The generator of an arc is the meridian of any crossing passing over it.
    Under-passing c_i conjugates the generator of the incoming arc into that
    of the outgoing arc by mu_i^{-e_i}.  Arcs with no crossing over them take
    the generator implied by the relation.
    """
    order, arcs = under_pass_order(d, base)
    n = len(order)
    arc_of = {lab: k for k, arc in enumerate(arcs) for lab in arc}
    over = {}
    failures = []
    for k, i in enumerate(order):
        arc = arc_of[d.crossings[i].over_in]
        if arc in over and over[arc].distance(mats[k]) > tol * _scale(mats[k]):
            failures.append({"crossing": i, "kind": "generators of one arc differ"})
        over.setdefault(arc, mats[k])
    gen = {}
    if over:
        # arcs[k] leaves c_{k+1}; c_{k+1} takes arcs[k-1] to arcs[k]
        start = min(over)
        gen[start] = over[start]
        errors = [0.0] * n
        for step in range(1, n + 1):
            k = (start + step) % n
            x = mats[k] ** (-d.crossings[order[k]].sign)
            g = x @ gen[(k - 1) % n] @ x.inv()
            if k in over:
                err = g.distance(over[k]) / _scale(over[k])
                errors[k] = err
                if err > tol:
                    failures.append({"crossing": order[k], "kind": "relation", "error": err})
            gen[k] = over.get(k, g)
    else:
        errors = [0.0] * n
    traces = [m.trace for m in mats]
    for k, t in enumerate(traces):
        if min(abs(t - 2), abs(t + 2)) > tol:
            failures.append({"crossing": order[k], "kind": "not parabolic", "trace": [t.real, t.imag]})
    ident = ProjMat2(np.eye(2))
    degenerate = all(m.distance(ident) <= tol for m in mats)
    return WirtingerReport(not failures, errors, traces, degenerate, failures)


def _scale(m: ProjMat2) -> float:
    return max(1.0, float(np.max(np.abs(m.m))))


# Potential functions.  A term is (coef, kind, data): kind "li2" with a
# monomial {var: exp}, "loglog" with two monomials, or "const".

def _mono(vals, mono):
    out = 1 + 0j
    for k, e in mono.items():
        out *= vals[k] ** e
    return out


def _ratio(num, den):
    """Monomial prod(num) / prod(den); repeated ids (kinks) combine."""
    out: dict = {}
    for k in num:
        out[k] = out.get(k, 0) + 1
    for k in den:
        out[k] = out.get(k, 0) - 1
    return {k: e for k, e in out.items() if e}


def _z_terms(f):
    a, b, c, d = (f.ids[k] for k in "abcd")
    return [
        (1, "li2", _ratio([c], [b])),
        (-1, "li2", _ratio([c], [d])),
        (1, "li2", _ratio([a], [d])),
        (-1, "li2", _ratio([a], [b])),
    ]


def _w_terms(f):
    a, b, c, d = (f.ids[k] for k in "abcd")
    if f.sign > 0:
        return [
            (-1, "li2", _ratio([d], [a])),
            (-1, "li2", _ratio([d], [c])),
            (1, "li2", _ratio([b, d], [a, c])),
            (1, "li2", _ratio([a], [b])),
            (1, "li2", _ratio([c], [b])),
            (-1, "const", PI2 / 6),
            (1, "loglog", (_ratio([a], [b]), _ratio([c], [b]))),
        ]
    return [
        (1, "li2", _ratio([a], [b])),
        (1, "li2", _ratio([a], [d])),
        (-1, "li2", _ratio([a, c], [b, d])),
        (-1, "li2", _ratio([b], [c])),
        (-1, "li2", _ratio([d], [c])),
        (1, "const", PI2 / 6),
        (-1, "loglog", (_ratio([b], [c]), _ratio([d], [c]))),
    ]


def potential_terms(d: Diagram, mode: str) -> list:
    frames = local_frames(d, mode)
    terms = []
    for f in frames:
        terms.extend(_z_terms(f) if mode == "z" else _w_terms(f))
    return terms


def _potential(terms, vals):
    """Value of the potential and its log-derivatives x dV/dx per variable."""
    v = 0j
    der = {k: 0j for k in vals}
    for coef, kind, data in terms:
        if kind == "const":
            v += coef * data
        elif kind == "li2":
            u = _mono(vals, data)
            v += coef * dilog(u)
            l1 = principal_log(1 - u) if u != 1 else 0j
            for k, e in data.items():
                der[k] -= coef * e * l1
        else:
            m1, m2 = data
            l1, l2 = principal_log(_mono(vals, m1)), principal_log(_mono(vals, m2))
            v += coef * l1 * l2
            for k, e in m1.items():
                der[k] += coef * e * l2
            for k, e in m2.items():
                der[k] += coef * e * l1
    return v, der


@dataclass
class ComplexVolume:
    vol: float
    cs: float
    potential: complex
    v0: complex
    winding: dict
    max_lattice_error: float

    def to_json(self) -> dict:
        return {"vol": self.vol, "cs": self.cs}


def _reduce_cs(x: float) -> float:
    """Representative of x mod pi^2 in (-pi^2/2, pi^2/2]."""
    r = math.fmod(x, PI2)
    if r > PI2 / 2:
        r -= PI2
    elif r <= -PI2 / 2:
        r += PI2
    return r


def complex_volume(d: Diagram, a: Assignment, tol: float = LATTICE_TOL) -> ComplexVolume:
    """vol + i cs from the potential with its log-derivative correction.

    Each x dV/dx must lie on 2 pi i Z; the rounded multiples m_x give
    V_0 = V - sum 2 pi i m_x log x, and i(vol + i cs) = V_0 mod pi^2.
    """
    vals = a.values
    v, der = _potential(potential_terms(d, a.mode), vals)
    v0 = v
    winding = {}
    worst = 0.0
    for k in sorted(der):
        t = der[k] / TWO_PI
        m = round(t.imag)
        err = abs(t - 1j * m)
        worst = max(worst, err)
        if err > tol:
            raise InvariantError(
                f"not a gluing-variety point or branch failure: log-derivative at {k} "
                f"is {err:.3g} away from the 2 pi i lattice"
            )
        winding[k] = m
        v0 -= 2j * math.pi * m * principal_log(vals[k])
    return ComplexVolume(v0.imag, _reduce_cs(-v0.real), v, v0, winding, worst)


def lattice_errors(d: Diagram, a: Assignment) -> dict:
    """Distance of each x dV/dx / 2 pi from i Z (diagnostic)."""
    _, der = _potential(potential_terms(d, a.mode), a.values)
    out = {}
    for k, x in der.items():
        t = x / TWO_PI
        out[k] = abs(t - 1j * round(t.imag))
    return out


def _cross_ratio(p):
    """[p0, p1, p2, p3] = (p0-p3)(p1-p2) / ((p0-p2)(p1-p3)); None is infinity."""
    p0, p1, p2, p3 = p
    if p0 is None:
        return (p1 - p2) / (p1 - p3)
    if p1 is None:
        return (p0 - p3) / (p0 - p2)
    if p2 is None:
        return (p0 - p3) / (p1 - p3)
    if p3 is None:
        return (p1 - p2) / (p0 - p2)
    return (p0 - p3) * (p1 - p2) / ((p0 - p2) * (p1 - p3))


def _vertices(f, a):
    x = dict(zip("abcd", f.values(a)))
    if f.mode == "z":
        s = x["c"] - x["a"]
        pts = {k: x[k] / s for k in "abcd"}
        pts["0"] = 0j
    else:
        pts = {
            "a": 0j,
            "c": 1 + 0j,
            "b": x["a"] / (x["a"] - x["b"]),
            "d": x["d"] / (x["d"] - x["c"]),
        }
        den = x["a"] - x["b"] + x["c"] - x["d"]
        pts["0"] = (x["a"] - x["d"]) / den if den != 0 else None
    pts["inf"] = None
    return pts


# Tetrahedra of one octahedron, as ordered vertex tuples.  T4: four around
# the axis 0-inf.  T5: three around the axis over the triangle a, b, c and
# two on the far side of the diagonal a-c.
_T4 = (("0", "inf", "a", "b"), ("0", "inf", "b", "c"), ("0", "inf", "c", "d"), ("0", "inf", "d", "a"))
_T5 = (
    ("0", "inf", "a", "b"),
    ("0", "inf", "b", "c"),
    ("0", "inf", "c", "a"),
    ("0", "a", "c", "d"),
    ("inf", "c", "a", "d"),
)
_ORACLE_SIGN = 1


def tetra_shapes(d: Diagram, a: Assignment, flat_tol: float = 1e-12) -> tuple[list, list]:
    """Shapes of the non-flat tetrahedra of all octahedra, with vertices
    placed by the developing coordinates of each crossing, and the list of
    flat ones as ``(crossing, vertices)``."""
    shapes, flat = [], []
    for f in local_frames(d, a.mode):
        pts = _vertices(f, a)
        for tet in (_T4 if a.mode == "z" else _T5):
            p = [pts[k] for k in tet]
            if sum(x is None for x in p) > 1:
                flat.append((f.crossing, tet))
                continue
            try:
                z = _cross_ratio(p)
            except ZeroDivisionError:
                flat.append((f.crossing, tet))
                continue
            # real shapes (including 0, 1) bound no volume
            if abs(z.imag) <= flat_tol * max(1.0, abs(z)):
                flat.append((f.crossing, tet))
                continue
            shapes.append(z)
    return shapes, flat


def tetra_volume_oracle(d: Diagram, a: Assignment, flat_tol: float = 1e-12) -> float:
    """Sum of Bloch-Wigner volumes over the tetrahedra of all octahedra."""
    shapes, flat = tetra_shapes(d, a, flat_tol)
    if flat:
        warnings.warn(f"{len(flat)} flat tetrahedra excluded from the volume sum", FlatTetrahedronWarning)
    return _ORACLE_SIGN * math.fsum(bloch_wigner(z) for z in shapes)


@dataclass
class InvariantReport:
    obstruction: int
    cusp: CuspShape
    wirtinger: list
    wirtinger_report: WirtingerReport
    complex_volume: ComplexVolume
    oracle_volume: float
    max_residual: float

    def to_json(self) -> dict:
        cj = lambda z: [float(z.real), float(z.imag)]  # noqa: E731
        return {
            "obstruction": self.obstruction,
            "cuspShape": cj(self.cusp.value),
            "lambda": [cj(x) for x in self.cusp.lambdas],
            "lambdaPrime": [cj(x) for x in self.cusp.lambda_primes],
            "wirtinger": [m.to_json() for m in self.wirtinger],
            "wirtingerOk": self.wirtinger_report.ok,
            "complexVolume": self.complex_volume.to_json(),
            "oracleVolume": self.oracle_volume,
            "maxResidual": self.max_residual,
        }


def invariant_report(d: Diagram, a: Assignment, base: int | None = None) -> InvariantReport:
    res = residuals(build_system(d, a.mode), a)
    mats = wirtinger_matrices(d, a, base)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", FlatTetrahedronWarning)
        oracle = tetra_volume_oracle(d, a)
    return InvariantReport(
        obstruction_class(d, a),
        cusp_shape(d, a, base),
        mats,
        verify_wirtinger(d, mats, base),
        complex_volume(d, a),
        oracle,
        float(np.max(np.abs(res))) if len(res) else 0.0,
    )
