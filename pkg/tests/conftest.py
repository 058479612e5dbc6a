import json
from pathlib import Path

import numpy as np
import pytest

from lefsolver.problem import NonlinearityF, NonlinearityG, ProblemSpec, WeightP

ORACLES = json.loads((Path(__file__).parent / "oracles" / "frozen.json").read_text())
CONFIGS = Path(__file__).resolve().parents[1] / "configs"


def reference_spec(f=None, p=None):
    """g = t^-3, f = t^(1/2), p = (1 + r^2)^-2, a = 1/2, N = 3."""
    return ProblemSpec(3, 0.5, NonlinearityG.power_singular(3.0),
                       f or NonlinearityF.power(0.5), p or WeightP.inverse_power_sq(4.0))


@pytest.fixture(scope="session")
def oracle():
    return ORACLES


@pytest.fixture(scope="session")
def ref_spec():
    return reference_spec()


@pytest.fixture(scope="session")
def ref_cert(ref_spec):
    from lefsolver.barriers import build_certificate

    return build_certificate(ref_spec, 1.0)


@pytest.fixture(scope="session")
def ref_barrier(ref_spec):
    from lefsolver.barriers import global_barrier

    return global_barrier(ref_spec)


@pytest.fixture(scope="session")
def ref_ground(ref_spec):
    from lefsolver.groundstate import solve_ground_state

    return solve_ground_state(ref_spec)


@pytest.fixture(scope="session")
def ref_solution(ref_spec, ref_cert):
    from lefsolver.bvp import solve_ball

    return solve_ball(ref_spec, cert=ref_cert)


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
