import numpy as np
import pytest

from conftest import SIX_PD
from octa_ptolemy import _kernels_py, kernels
from octa_ptolemy.diagram import parse_pd
from octa_ptolemy.gluing import build_t4_system

compiled = pytest.importorskip("octa_ptolemy._kernels")


def test_backend_is_compiled():
    assert kernels.BACKEND == "cython"


def test_dilog_backends_agree():
    rng = np.random.default_rng(0)
    for z in rng.normal(size=300) * 3 + 1j * rng.normal(size=300) * 3:
        assert abs(compiled.dilog(z) - _kernels_py.dilog(z)) < 1e-13 * max(1, abs(_kernels_py.dilog(z)))
    for x in (1.0, 2.0, 5.0, -1.0, 0.0):
        assert abs(compiled.dilog(complex(x)) - _kernels_py.dilog(complex(x))) < 1e-13


def test_eval_system_backends_agree():
    s = build_t4_system(parse_pd(SIX_PD))
    rng = np.random.default_rng(1)
    x = np.exp(rng.uniform(-1, 1, 12) + 1j * rng.uniform(-3, 3, 12))
    a = compiled.eval_system(x, *s._arrays, len(s))
    b = _kernels_py.eval_system(x, *s._arrays, len(s))
    for u, v in zip(a[:2], b[:2]):
        assert np.max(np.abs(np.asarray(u) - np.asarray(v))) < 1e-12
