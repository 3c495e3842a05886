import math
import sys
import warnings

import pytest

from octa_ptolemy.diagram import parse_pd
from octa_ptolemy.gluing import Assignment, build_t4_system, build_t5_system
from octa_ptolemy.invariants import FlatTetrahedronWarning
from octa_ptolemy.solver import SolverConfig, search_solutions

FIG8_PD = "X[1,5,2,4]; X[7,2,8,3]; X[3,6,4,7]; X[5,1,6,8]"
TREFOIL_KINK_PD = "X[1,5,2,4]; X[3,1,4,8]; X[7,3,8,2]; X[5,6,6,7]"
TREFOIL_PD = "X[1,5,2,4]; X[3,1,4,6]; X[5,3,6,2]"
# 6 crossings, alternating, no kinks
SIX_PD = "X[1,7,2,6]; X[3,10,4,11]; X[5,3,6,2]; X[7,1,8,12]; X[9,4,10,5]; X[11,9,12,8]"
# 3 crossings, not alternating, no kinks
NONALT_PD = "X[1,5,2,4]; X[6,3,1,4]; X[5,3,6,2]"

S3 = math.sqrt(3)
FIG8_Z = [1 + 1j, 1j * (1 + S3), (-1 + 1j * S3) / (-1 + S3), 2j, -1 + 1j, 1j,
          (1 + 1j * S3) / (-1 + S3), -2j / (-1 + S3)]
# region ids of the parsed diagram -> values (5,3,7,2,1,8) of the worked example
TREFOIL_W = {1: 5, 2: 2, 3: 1, 4: 7, 5: 3, 6: 8}


@pytest.fixture(autouse=True)
def _quiet_flat():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", FlatTetrahedronWarning)
        yield


@pytest.fixture(scope="session")
def fig8():
    return parse_pd(FIG8_PD)


@pytest.fixture(scope="session")
def trefoil_kink():
    return parse_pd(TREFOIL_KINK_PD)


@pytest.fixture(scope="session")
def fig8_z():
    return Assignment("z", {i + 1: z for i, z in enumerate(FIG8_Z)})


@pytest.fixture(scope="session")
def trefoil_w():
    return Assignment("w", TREFOIL_W)


@pytest.fixture(scope="session")
def fig8_z_solutions(fig8):
    return [s.assignment for s in search_solutions(build_t4_system(fig8), SolverConfig(seed=0, restarts=30))]


@pytest.fixture(scope="session")
def fig8_w_solutions(fig8):
    return [s.assignment for s in search_solutions(build_t5_system(fig8), SolverConfig(seed=0, restarts=60))]


@pytest.fixture(scope="session")
def trefoil_kink_w_solutions(trefoil_kink):
    return [s.assignment for s in search_solutions(build_t5_system(trefoil_kink), SolverConfig(seed=0, restarts=40))]


@pytest.fixture(scope="session")
def six():
    return parse_pd(SIX_PD)


@pytest.fixture(scope="session")
def six_z_solutions(six):
    return [s.assignment for s in search_solutions(build_t4_system(six), SolverConfig(seed=1, restarts=30))]


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
