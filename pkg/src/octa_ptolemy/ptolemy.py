"""Per-crossing Ptolemy data read off a gluing-equation solution.

Scaling parameters p_i (segment variables) or q_i (region variables) are
defined only up to sign, so they are carried as squares throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import local
from .diagram import CrossingFrame, Diagram, _default_base, crossing_graph_bfs, local_frames, segment_case
from .gluing import Assignment, NondegeneracyError, w_corner_factor, z_end_factor
from .specfun import principal_sqrt

__all__ = [
    "PtolemyError",
    "ScalingParams",
    "CrossingPtolemy",
    "ConsistencyReport",
    "sigma_at_crossing",
    "scaling_parameters",
    "short_edge_table",
    "graph_parameters",
    "crossing_ptolemy",
    "ptolemy_consistency_check",
    "SHORT_EDGE_LETTERS",
]

SHORT_EDGE_LETTERS = "abcdefghijklmnopqrstuvwx"
PROPAGATION_TOL = 1e-8
_L = "abcd"


class PtolemyError(ValueError):
    def __init__(self, message: str, segment: int | None = None):
        super().__init__(message)
        self.segment = segment


def _nz(x, what):
    if x == 0:
        raise NondegeneracyError(f"zero denominator in {what}", "denominator")
    return x


def sigma_at_crossing(frame: CrossingFrame, a: Assignment) -> complex:
    return local.sigma(frame.mode, *frame.values(a))


@dataclass(frozen=True)
class ScalingParams:
    """Squares of the scaling parameters, one per crossing index, with the
    root crossing normalized to 1."""

    mode: str
    root: int
    squares: dict = field(hash=False)

    def value(self, crossing: int) -> complex:
        """A representative of the parameter itself (principal root)."""
        return principal_sqrt(self.squares[crossing])


def _letter(frame: CrossingFrame, label: int) -> str:
    return next(k for k in _L if frame.ids[k] == label)


def _z_relation(d: Diagram, a: Assignment, frames, label: int):
    """``(f_t, f_h)`` with p_tail^2 f_t = p_head^2 f_h for segment ``label``."""
    seg = d.segments[label]
    v = a.values
    t, h = frames[seg.tail], frames[seg.head]
    o = 1 if seg.tail_role == "over" else -1
    zb = v[t.ids[_L[(_L.index(_letter(t, label)) - o) % 4]]]
    ze = v[h.ids[_L[(_L.index(_letter(h, label)) + o) % 4]]]
    zc = v[label]
    _nz(zb * zc * ze, "p-relation")
    case = segment_case(seg)
    ft = 1 - zb / zc if case in "ac" else 1 - zc / zb
    fh = 1 - zc / ze if case in "ad" else 1 - ze / zc
    return ft, fh


def _w_relation(d: Diagram, a: Assignment, frames, label: int):
    """``(F_t, F_h)`` with q_tail^2 / F_t = q_head^2 / F_h.

    An under-end contributes the eta-value of its crossing, an over-end the
    squared difference of the two regions along the segment.
    """
    seg = d.segments[label]
    v = a.values
    diff = (v[seg.left_region] - v[seg.right_region]) ** 2
    out = []
    for c, role in ((seg.tail, seg.tail_role), (seg.head, seg.head_role)):
        f = frames[c]
        out.append(local.eta(f.sign, *f.values(a)) if role == "under" else diff)
    return _nz(out[0], "q-relation"), _nz(out[1], "q-relation")


def _relation(d, a, frames, label):
    """``(r_t, r_h)`` with square_tail * r_t = square_head * r_h."""
    if a.mode == "z":
        return _z_relation(d, a, frames, label)
    ft, fh = _w_relation(d, a, frames, label)
    return 1 / ft, 1 / fh


def scaling_parameters(d: Diagram, a: Assignment, base: int | None = None,
                       tol: float = PROPAGATION_TOL) -> ScalingParams:
    """Propagate squared scaling parameters breadth-first from the base
    crossing and verify every remaining segment relation."""
    frames = local_frames(d, a.mode)
    root = _default_base(d) if base is None else base
    sq = {root: 1 + 0j}
    for lab, u, w in crossing_graph_bfs(d, root):
        seg = d.segments[lab]
        rt, rh = _relation(d, a, frames, lab)
        sq[w] = sq[u] * rt / rh if u == seg.tail else sq[u] * rh / rt
    if len(sq) != d.n:
        raise PtolemyError("crossing graph is disconnected")
    for lab in sorted(d.segments):
        seg = d.segments[lab]
        rt, rh = _relation(d, a, frames, lab)
        lhs, rhs = sq[seg.tail] * rt, sq[seg.head] * rh
        if abs(lhs - rhs) > tol * max(abs(lhs), abs(rhs)):
            raise PtolemyError(
                f"scaling relation fails at segment {lab} "
                f"(relative error {abs(lhs - rhs) / max(abs(lhs), abs(rhs)):.3g})",
                lab,
            )
    return ScalingParams(a.mode, root, sq)


def _z_short(za, zb, zc, zd, p2):
    s = zc - za
    return {
        "a": (za - zd) / s, "b": (zb - za) / s, "c": (zc - zb) / s, "d": (zd - zc) / s,
        "e": zb / (p2 * za * (zb - za)), "f": zd / (p2 * za * (za - zd)),
        "g": 1 / (p2 * (zd - za)), "h": 1 / (p2 * (za - zb)),
        "i": za * zb / (p2 * (za - zb)), "j": zb * zc / (p2 * (zb - zc)),
        "k": zb**2 / (p2 * (zc - zb)), "l": zb**2 / (p2 * (zb - za)),
        "m": zd * (zc - zb) / (zc * (zb - zd)), "n": zb * (zd - zc) / (zc * (zb - zd)),
        "o": zb * (za - zd) / (za * (zb - zd)), "p": zd * (zb - za) / (za * (zb - zd)),
        "q": zb / (p2 * zc * (zb - zc)), "r": zd / (p2 * zc * (zc - zd)),
        "s": 1 / (p2 * (zd - zc)), "t": 1 / (p2 * (zc - zb)),
        "u": za * zd / (p2 * (za - zd)), "v": zc * zd / (p2 * (zd - zc)),
        "w": zd**2 / (p2 * (zc - zd)), "x": zd**2 / (p2 * (zd - za)),
    }


def _w_short(wa, wb, wc, wd, q2):
    et = wb * wd - wa * wc
    return {
        "a": wd / (wc - wd), "b": wa / (wa - wb), "c": wb / (wb - wa), "d": wc / (wd - wc),
        "e": et / (q2 * wa * (wa - wd)), "f": et / (q2 * wd * (wd - wa)),
        "g": (wd - wc) / (q2 * wd), "h": (wb - wa) / (q2 * wa),
        "i": q2 * (wd - wa) / (wa * et), "j": q2 * (wb - wc) / (wb * et),
        "k": q2 / (wb * (wb - wa)), "l": q2 / (wa * (wa - wb)),
        "m": wb / (wc - wb), "n": wc / (wb - wc), "o": wd / (wd - wa), "p": wa / (wa - wd),
        "q": et / (q2 * wb * (wb - wc)), "r": et / (q2 * wc * (wc - wb)),
        "s": (wd - wc) / (q2 * wc), "t": (wb - wa) / (q2 * wb),
        "u": q2 * (wd - wa) / (wd * et), "v": q2 * (wb - wc) / (wc * et),
        "w": q2 / (wc * (wc - wd)), "x": q2 / (wd * (wd - wc)),
    }


_FLIP = {"z": set("abcd"), "w": set("abcdefghijkl") | set("qrstuvwx")}


def short_edge_table(frame: CrossingFrame, a: Assignment, sp: ScalingParams | complex) -> dict:
    """The 24 short-edge parameters at one crossing, keyed ``"a"``..``"x"``.

    ``sp`` may be a ScalingParams or directly the squared parameter.
    """
    s2 = sp.squares[frame.crossing] if isinstance(sp, ScalingParams) else complex(sp)
    vals = frame.values(a)
    try:
        table = (_z_short if frame.mode == "z" else _w_short)(*vals, s2)
    except ZeroDivisionError:
        raise NondegeneracyError(
            f"degenerate short-edge table at crossing {frame.crossing}", "denominator", frame.crossing
        ) from None
    if frame.sign < 0:
        table = {k: (-x if k in _FLIP[frame.mode] else x) for k, x in table.items()}
    return table


def _vertical(frame: CrossingFrame, a: Assignment) -> complex:
    za, zb, zc, zd = frame.values(a)
    _nz(zb * zd, "vertical edge")
    if frame.sign > 0:
        return principal_sqrt((za - zc) * (1 / zd - 1 / zb))
    return principal_sqrt((za - zc) * (1 / zb - 1 / zd))


def _horizontal(d: Diagram, a: Assignment, frames, label: int) -> complex:
    seg = d.segments[label]
    v = a.values
    t, h = frames[seg.tail], frames[seg.head]
    o = 1 if seg.tail_role == "over" else -1
    pt, ph = _L.index(_letter(t, label)), _L.index(_letter(h, label))
    za, zb = v[t.ids[_L[(pt + o) % 4]]], v[t.ids[_L[(pt - o) % 4]]]
    zd, ze = v[h.ids[_L[(ph - o) % 4]]], v[h.ids[_L[(ph + o) % 4]]]
    zc = v[label]
    return horizontal_value(segment_case(seg), za, zb, zc, zd, ze)


def horizontal_value(case: str, za, zb, zc, zd, ze) -> complex:
    """Horizontal edge parameter for a segment of local ``case`` (a..d);
    ``zc`` is the segment itself, ``za, zb`` sit at its tail and ``zd, ze`` at its head."""
    first = zc if case in "ac" else za
    second = zc if case in "bc" else zd
    return first / _nz(za - zb, "horizontal edge") - second / _nz(zd - ze, "horizontal edge")


def graph_parameters(d: Diagram, a: Assignment) -> tuple[dict, dict]:
    """Edge parameters of the graph G: ``(vertical, horizontal)``.

    ``vertical`` maps crossing index to the long-edge parameter (defined up
    to sign; principal root returned), ``horizontal`` maps segment label to
    the short-edge parameter of its horizontal edge.
    """
    if a.mode != "z":
        raise ValueError("graph parameters are defined for segment variables")
    frames = local_frames(d, "z")
    vertical = {f.crossing: _vertical(f, a) for f in frames}
    horizontal = {lab: _horizontal(d, a, frames, lab) for lab in sorted(d.segments)}
    return vertical, horizontal


@dataclass
class CrossingPtolemy:
    crossing: int
    sigma: complex
    short_edges: dict
    eta: complex | None = None
    vertical: complex | None = None
    horizontals: list = field(default_factory=list)

    def to_json(self) -> dict:
        cj = lambda z: [float(z.real), float(z.imag)]  # noqa: E731
        out = {"crossing": self.crossing, "sigma": cj(self.sigma)}
        if self.eta is not None:
            out["eta"] = cj(self.eta)
        out["shortEdges"] = {k: cj(self.short_edges[k]) for k in SHORT_EDGE_LETTERS}
        if self.vertical is not None:
            out["vertical"] = cj(self.vertical)
        out["horizontals"] = [[lab, cj(x)] for lab, x in self.horizontals]
        return out


def crossing_ptolemy(d: Diagram, a: Assignment, sp: ScalingParams | None = None) -> list[CrossingPtolemy]:
    if sp is None:
        sp = scaling_parameters(d, a)
    frames = local_frames(d, a.mode)
    if a.mode == "z":
        vertical, horizontal = graph_parameters(d, a)
    out = []
    for f in frames:
        cp = CrossingPtolemy(f.crossing, sigma_at_crossing(f, a), short_edge_table(f, a, sp))
        if a.mode == "w":
            cp.eta = local.eta(f.sign, *f.values(a))
        else:
            cp.vertical = vertical[f.crossing]
            cp.horizontals = [(lab, horizontal[lab]) for lab in sorted(set(f.ids.values()))]
        out.append(cp)
    return out


def _decoration(frame: CrossingFrame, a: Assignment, s2: complex) -> dict:
    """First columns of decoration vectors at the six octahedron vertices
    ``a, b, c, d, 0, inf``; their determinants are Ptolemy coordinates."""
    xa, xb, xc, xd = frame.values(a)
    s = principal_sqrt(s2)
    if frame.mode == "z":
        r = principal_sqrt(-local.big_lambda("z", xa, xb, xc, xd))
        k = 1 / principal_sqrt(xc - xa)
        return {
            "a": (s * k * xa, s * k * (xc - xa)),
            "c": (s * k * xc, s * k * (xc - xa)),
            "b": (s / k / (xc - xa), s / k / xb),
            "d": (s / k / (xc - xa), s / k / xd),
            "inf": (1, 0),
            "0": (0, -r),
        }
    # sqrt(-Lambda) * (v0, 1) with v0 = (a - d)/(a - b + c - d), written
    # without the quotient so that v0 = inf is harmless
    t = principal_sqrt(-1 / _nz(xa * xc - xb * xd, "decoration"))
    return {
        "a": (0, s),
        "c": (s, s),
        "b": (xa / s, (xa - xb) / s),
        "d": (xd / s, (xd - xc) / s),
        "inf": (1, 0),
        "0": (t * (xa - xd), t * (xa - xb + xc - xd)),
    }


def _det(u, v):
    return u[0] * v[1] - u[1] * v[0]


def _cross_ratio(x, y, z, w):
    return (x - w) * (y - z) / ((x - z) * (y - w))


@dataclass
class ConsistencyReport:
    ok: bool
    product_sigma: complex
    max_error: float
    failures: list

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "productSigma": [self.product_sigma.real, self.product_sigma.imag],
            "maxError": self.max_error,
            "failures": self.failures,
        }


def _rel(x, y):
    return abs(x - y) / max(1.0, abs(x), abs(y))


def ptolemy_consistency_check(d: Diagram, a: Assignment, sp: ScalingParams | None = None,
                              tol: float = 1e-9, pm1_tol: float = 1e-8) -> ConsistencyReport:
    """Check the Ptolemy data of a solution against independent identities.

    Per crossing: the hypotenuse ratio c(0,a)/c(0,c) of decoration
    determinants equals sigma; the local factors of the gluing equations
    (end factors of segment equations, corner tau-values of region
    equations) are recovered as ratios of short-edge parameters; the
    meridian/longitude sums of short edges.  Globally: prod sigma = +-1.
    """
    if sp is None:
        sp = scaling_parameters(d, a)
    frames = local_frames(d, a.mode)
    failures = []
    worst = 0.0

    def check(name, crossing, got, want, t=tol):
        nonlocal worst
        err = _rel(got, want)
        worst = max(worst, err)
        if not err <= t:
            failures.append({"check": name, "crossing": crossing, "error": err})

    prod = 1 + 0j
    for f in frames:
        vals = f.values(a)
        sig = local.sigma(f.mode, *vals)
        prod *= sig
        dec = _decoration(f, a, sp.squares[f.crossing])
        check("hypotenuse", f.crossing, _det(dec["0"], dec["a"]) / _det(dec["0"], dec["c"]), sig)
        se = short_edge_table(f, a, sp)
        check("meridian", f.crossing, se["o"] + se["p"], 1)
        check("longitude", f.crossing, se["m"] + se["p"], local.lam(f.mode, *vals))
        check("diagonal", f.crossing, se["b"] + se["c"], f.sign)
        ids = f.ids
        num = {k: vals[i] for i, k in enumerate(_L)}
        if f.mode == "z":
            recovered = {
                "a": -se["p"] / se["o"], "b": -se["c"] / se["b"],
                "c": -se["n"] / se["m"], "d": -se["a"] / se["d"],
            }
            for pos in _L:
                direct = 1 + 0j
                for fac in z_end_factor(pos, ids):
                    direct *= fac.value(a.values)
                check(f"end factor {pos}", f.crossing, recovered[pos], direct)
        else:
            ratio = {
                "a": -se["e"] / se["h"], "b": -se["t"] / se["q"],
                "c": -se["r"] / se["s"], "d": -se["g"] / se["f"],
            }
            for pos in _L:
                direct = 1 + 0j
                for fac in w_corner_factor(pos, f.sign, ids):
                    direct *= fac.value(a.values)
                check(f"tau {pos}", f.crossing, ratio[pos], direct)
            pos_of = {k: dec[k][0] / dec[k][1] for k in "abcd"}
            wa, wb, wc, wd = (num[k] for k in _L)
            check("cross ratio b,inf,c,a", f.crossing,
                  _cr_inf2(pos_of["b"], pos_of["c"], pos_of["a"]), wa / wb)
            check("cross ratio d,inf,a,c", f.crossing,
                  _cr_inf2(pos_of["d"], pos_of["a"], pos_of["c"]), wc / wd)
            if dec["0"][1] != 0:
                v0 = dec["0"][0] / dec["0"][1]
                check("cross ratio 0,c,d,b", f.crossing,
                      _cross_ratio(v0, pos_of["c"], pos_of["d"], pos_of["b"]), wc / wb)
    scale = abs(prod)
    pm1 = min(abs(prod - 1), abs(prod + 1))
    if not pm1 <= pm1_tol:
        failures.append({"check": "product of sigma", "crossing": None, "error": pm1})
    worst = max(worst, pm1 if scale else float("inf"))
    return ConsistencyReport(not failures, prod, worst, failures)


def _cr_inf2(x, z, w):
    """Cross ratio [x, inf, z, w] = (x - w) / (x - z)."""
    return (x - w) / (x - z)
