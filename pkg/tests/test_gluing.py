import cmath

import numpy as np
import pytest

from conftest import FIG8_PD, NONALT_PD, SIX_PD, TREFOIL_KINK_PD
from octa_ptolemy.diagram import local_frames, parse_pd, segment_case
from octa_ptolemy.gluing import (
    Assignment,
    NondegeneracyError,
    T4DegenerateError,
    build_system,
    build_t4_system,
    build_t5_system,
    check_nondegenerate,
    log_derivatives,
    residuals,
)

L = "abcd"


def _random(d, mode, seed):
    rng = np.random.default_rng(seed)
    ids = sorted(d.segments) if mode == "z" else [r.id for r in d.regions]
    return Assignment(mode, {i: complex(*rng.normal(size=2)) for i in ids})


def _segment_oracle(d, a, label):
    """Segment equation written out from the neighbours of the segment at its
    two ends, by the over/under case of the ends."""
    frames = local_frames(d, "z")
    seg = d.segments[label]
    v = a.values
    t, h = frames[seg.tail].ids, frames[seg.head].ids
    p = L.index(next(k for k in L if t[k] == label))
    q = L.index(next(k for k in L if h[k] == label))
    o = 1 if seg.tail_role == "over" else -1
    za, zb = v[t[L[(p + o) % 4]]], v[t[L[(p - o) % 4]]]
    zd, ze = v[h[L[(q - o) % 4]]], v[h[L[(q + o) % 4]]]
    zc = v[label]
    return {
        "a": (zc - za) / (zc - zb) * zd * (zc - ze) / (ze * (zc - zd)),
        "b": za * (zc - zb) / (zb * (zc - za)) * (zc - zd) / (zc - ze),
        "c": (zc - za) / (zc - zb) * (zc - ze) / (zc - zd),
        "d": za * (zc - zb) / (zb * (zc - za)) * ze * (zc - zd) / (zd * (zc - ze)),
    }[segment_case(seg)]


@pytest.mark.parametrize("pd", [FIG8_PD, SIX_PD, NONALT_PD])
def test_t4_matches_segment_oracle(pd):
    d = parse_pd(pd)
    s = build_t4_system(d)
    for seed in range(3):
        a = _random(d, "z", seed)
        vals = residuals(s, a) + 1
        for (kind, lab), val in zip(s.provenance(), vals):
            assert kind == "segment"
            assert abs(val - _segment_oracle(d, a, lab)) < 1e-9 * max(1, abs(val))


def test_equation_counts(fig8, trefoil_kink):
    assert len(build_t4_system(fig8)) == 8
    assert len(build_t5_system(fig8)) == 6
    assert len(build_t5_system(trefoil_kink)) == 6


def test_t4_rejects_kink(trefoil_kink):
    with pytest.raises(T4DegenerateError, match="T4 degenerate"):
        build_t4_system(trefoil_kink)


def test_fig8_worked_example_residuals(fig8, fig8_z):
    assert np.max(np.abs(residuals(build_t4_system(fig8), fig8_z))) < 1e-9


def test_trefoil_worked_example_residuals(trefoil_kink, trefoil_w):
    r = residuals(build_t5_system(trefoil_kink), trefoil_w)
    assert len(r) == 6
    assert np.max(np.abs(r)) < 1e-9


def test_corner_counts_match_region_sizes(trefoil_kink, fig8):
    for d in (trefoil_kink, fig8):
        s = build_t5_system(d)
        sizes = {r.id: len(r.corners) for r in d.regions}
        for eq in s.equations:
            # each tau-value is three factors
            assert len(eq.factors) == 3 * sizes[eq.id]
    assert any(len(r.corners) == 2 for r in fig8.regions)


@pytest.mark.parametrize("mode", ["z", "w"])
def test_scaling_leaves_residuals_fixed(fig8, mode):
    s = build_system(fig8, mode)
    a = _random(fig8, mode, 7)
    r0 = residuals(s, a)
    r1 = residuals(s, a.scaled(2 + 1j))
    assert np.max(np.abs(r0 - r1)) < 1e-12 * max(1, np.max(np.abs(r0)))


@pytest.mark.parametrize("pd,mode", [(FIG8_PD, "z"), (FIG8_PD, "w"), (TREFOIL_KINK_PD, "w"), (NONALT_PD, "z")])
def test_log_derivative_rows_sum_to_zero(pd, mode):
    d = parse_pd(pd)
    s = build_system(d, mode)
    jac = log_derivatives(s, _random(d, mode, 3))
    assert np.max(np.abs(jac.sum(axis=1))) < 1e-10 * max(1, np.max(np.abs(jac)))


@pytest.mark.parametrize("pd,mode", [(FIG8_PD, "z"), (TREFOIL_KINK_PD, "w"), (SIX_PD, "z")])
def test_log_derivatives_against_central_differences(pd, mode):
    d = parse_pd(pd)
    s = build_system(d, mode)
    a = _random(d, mode, 11)
    jac = log_derivatives(s, a)
    h = 1e-6
    x = a.vector(s.var_ids)
    for j, vid in enumerate(s.var_ids):
        xp, xm = x.copy(), x.copy()
        xp[j] *= cmath.exp(h)
        xm[j] *= cmath.exp(-h)
        lp = s.evaluate(xp)[0]
        lm = s.evaluate(xm)[0]
        fd = (lp - lm) / (2 * h)
        assert np.max(np.abs(fd - jac[:, j])) <= 1e-5 * max(1.0, np.max(np.abs(jac[:, j])))


def test_trefoil_jacobian_finite(trefoil_kink, trefoil_w):
    assert np.all(np.isfinite(log_derivatives(build_t5_system(trefoil_kink), trefoil_w)))


def test_nondegenerate_ok(trefoil_kink, trefoil_w, fig8, fig8_z):
    assert check_nondegenerate(trefoil_kink, trefoil_w) is None
    assert check_nondegenerate(fig8, fig8_z) is None


def test_equal_adjacent_regions_named(trefoil_kink, trefoil_w):
    seg = trefoil_kink.segments[2]
    vals = dict(trefoil_w.values)
    vals[seg.left_region] = vals[seg.right_region]
    err = check_nondegenerate(trefoil_kink, Assignment("w", vals))
    assert err is not None and err.kind == "segment"
    assert f"segment {err.where}" in str(err)


def test_all_equal_w_rejected(fig8):
    a = Assignment("w", {r.id: 2.0 for r in fig8.regions})
    with pytest.raises(NondegeneracyError):
        residuals(build_t5_system(fig8), a)


def test_za_equal_zc_names_crossing(fig8, fig8_z):
    c = fig8.crossings[1]
    vals = dict(fig8_z.values)
    vals[c.under_out] = vals[c.under_in]
    err = check_nondegenerate(fig8, Assignment("z", vals))
    assert err is not None and err.kind == "crossing" and err.where == 1


def test_cross_product_degeneracy(fig8):
    a = _random(fig8, "w", 5)
    f = local_frames(fig8, "w")[0]
    vals = dict(a.values)
    wa, wb, wc = (vals[f.ids[k]] for k in "abc")
    vals[f.ids["d"]] = wa * wc / wb
    err = check_nondegenerate(fig8, Assignment("w", vals))
    assert err is not None
    assert err.kind in ("crossing", "segment")


def test_assignment_json_round_trip(fig8_z):
    back = Assignment.from_json(fig8_z.to_json())
    assert back == fig8_z
    with pytest.raises(ValueError):
        Assignment.from_json({"mode": "z"})
