"""Randomized property suites (100+ examples each)."""

import cmath
import math

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from conftest import FIG8_PD, NONALT_PD, SIX_PD, TREFOIL_KINK_PD
from octa_ptolemy.diagram import local_frames, parse_pd
from octa_ptolemy.gluing import Assignment, NondegeneracyError, build_system, log_derivatives, residuals
from octa_ptolemy.invariants import CUSP_TOL, cusp_shape, lattice_errors
from octa_ptolemy.ptolemy import PtolemyError, graph_parameters, ptolemy_consistency_check, sigma_at_crossing
from octa_ptolemy.specfun import bloch_wigner, dilog

PROP = settings(max_examples=120, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])

finite = st.floats(-3, 3, allow_nan=False)
scalars = st.builds(complex, finite, finite).filter(lambda c: abs(c) > 0.05)
points = st.builds(complex, st.floats(-4, 4), st.floats(-4, 4)).filter(
    lambda z: abs(z) > 1e-2 and abs(z - 1) > 1e-2 and abs(z.imag) > 1e-3
)

DIAGRAMS = {"fig8": FIG8_PD, "trefoil-kink": TREFOIL_KINK_PD, "six": SIX_PD, "nonalt": NONALT_PD}


def _random_assignment(d, mode, rng):
    ids = sorted(d.segments) if mode == "z" else [r.id for r in d.regions]
    while True:
        a = Assignment(mode, {k: complex(*rng.normal(size=2)) for k in ids})
        try:
            residuals(build_system(d, mode), a)
            return a
        except NondegeneracyError:
            continue


@pytest.fixture(scope="module")
def solution_pool(fig8, trefoil_kink, six, fig8_z, trefoil_w, fig8_z_solutions, fig8_w_solutions, six_z_solutions):
    pool = [(fig8, fig8_z), (trefoil_kink, trefoil_w)]
    for d, sols in ((fig8, fig8_z_solutions), (fig8, fig8_w_solutions), (six, six_z_solutions)):
        for a in sols:
            mags = np.abs(a.vector())
            if mags.max() / mags.min() < 1e6:
                pool.append((d, a))
    return pool


def _modes(name):
    return ["w"] if name == "trefoil-kink" else ["z", "w"]


@PROP
@given(st.sampled_from(sorted(DIAGRAMS)), st.integers(0, 2**32 - 1), scalars)
def test_residual_scaling_invariance(name, seed, c):
    d = parse_pd(DIAGRAMS[name])
    rng = np.random.default_rng(seed)
    for mode in _modes(name):
        a = _random_assignment(d, mode, rng)
        s = build_system(d, mode)
        r0, r1 = residuals(s, a), residuals(s, a.scaled(c))
        assert np.max(np.abs(r0 - r1)) <= 1e-10 * max(1.0, np.max(np.abs(r0)))


@PROP
@given(st.sampled_from(sorted(DIAGRAMS)), st.integers(0, 2**32 - 1), scalars)
def test_sigma_lambda_horizontal_scaling(name, seed, c):
    d = parse_pd(DIAGRAMS[name])
    rng = np.random.default_rng(seed)
    from octa_ptolemy import local

    for mode in _modes(name):
        a = _random_assignment(d, mode, rng)
        b = a.scaled(c)
        for f in local_frames(d, mode):
            s0, s1 = sigma_at_crossing(f, a), sigma_at_crossing(f, b)
            assert abs(s0 - s1) <= 1e-10 * max(1.0, abs(s0))
            l0, l1 = local.lam(mode, *f.values(a)), local.lam(mode, *f.values(b))
            assert abs(l0 - l1) <= 1e-10 * max(1.0, abs(l0))
        if mode == "z":
            try:
                h0 = graph_parameters(d, a)[1]
            except NondegeneracyError:
                continue
            h1 = graph_parameters(d, b)[1]
            for k in h0:
                assert abs(h0[k] - h1[k]) <= 1e-10 * max(1.0, abs(h0[k]))


@PROP
@given(st.data())
def test_lambda_prime_agreement(solution_pool, data):
    d, a = data.draw(st.sampled_from(solution_pool))
    c = data.draw(scalars)
    cs = cusp_shape(d, a.scaled(c))
    assert abs(sum(cs.lambdas) - sum(cs.lambda_primes)) <= CUSP_TOL * max(1.0, abs(sum(cs.lambdas)))


@PROP
@given(st.data())
def test_sigma_product_pm1_at_solutions(solution_pool, data):
    d, a = data.draw(st.sampled_from(solution_pool))
    rep = ptolemy_consistency_check(d, a.scaled(data.draw(scalars)))
    assert rep.ok, rep.failures
    assert min(abs(rep.product_sigma - 1), abs(rep.product_sigma + 1)) < 1e-8


@PROP
@given(st.data())
def test_consistency_fails_off_variety(solution_pool, data):
    d, a = data.draw(st.sampled_from(solution_pool))
    seed = data.draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    noisy = Assignment(a.mode, {k: v * (1 + 1e-2 * cmath.exp(2j * math.pi * rng.uniform())) for k, v in a.values.items()})
    try:
        rep = ptolemy_consistency_check(d, noisy)
    except (PtolemyError, NondegeneracyError):
        return
    assert not rep.ok


@PROP
@given(st.data())
def test_lattice_quantization(solution_pool, data):
    d, a = data.draw(st.sampled_from(solution_pool))
    errs = lattice_errors(d, a.scaled(data.draw(scalars)))
    assert max(errs.values()) < 1e-8


@PROP
@given(st.sampled_from(sorted(DIAGRAMS)), st.integers(0, 2**32 - 1))
def test_jacobian_vs_finite_differences(name, seed):
    d = parse_pd(DIAGRAMS[name])
    rng = np.random.default_rng(seed)
    mode = _modes(name)[rng.integers(len(_modes(name)))]
    s = build_system(d, mode)
    a = _random_assignment(d, mode, rng)
    jac = log_derivatives(s, a)
    x = a.vector(s.var_ids)
    h = 1e-6
    j = rng.integers(len(x))
    xp, xm = x.copy(), x.copy()
    xp[j] *= cmath.exp(h)
    xm[j] *= cmath.exp(-h)
    fd = (s.evaluate(xp)[0] - s.evaluate(xm)[0]) / (2 * h)
    assert np.max(np.abs(fd - jac[:, j])) <= 1e-5 * max(1.0, np.max(np.abs(jac[:, j])))


@PROP
@given(points)
def test_dilog_reflection(z):
    lhs = dilog(z) + dilog(1 - z)
    rhs = math.pi**2 / 6 - cmath.log(z) * cmath.log(1 - z)
    assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(rhs))


@PROP
@given(points, points)
def test_five_term(x, y):
    xy = x * y
    if abs(1 - xy) < 1e-2:
        return
    terms = [x, y, (1 - x) / (1 - xy), 1 - xy, (1 - y) / (1 - xy)]
    if any(abs(t) < 1e-6 or abs(t - 1) < 1e-6 for t in terms):
        return
    assert abs(sum(bloch_wigner(t) for t in terms)) < 1e-10


@PROP
@given(points)
def test_bloch_wigner_conjugation(z):
    assert abs(bloch_wigner(z.conjugate()) + bloch_wigner(z)) < 1e-12
