import numpy as np
import pytest
from conftest import reference_spec

from lefsolver.errors import LefError, PreconditionError
from lefsolver.groundstate import (GroundStateResult, decay_profile, solve_ground_state,
                                   tail_monotone)
from lefsolver.grid import RadialGrid
from lefsolver.problem import WeightP


def test_pipeline_reference(ref_ground):
    g = ref_ground
    assert g.complete and not g.stopped_early and len(g.solutions) == 4
    assert min(g.monotonicity) >= -1e-6
    assert min(g.domination) >= -1e-6
    c = g.cauchy
    assert all(b < a for a, b in zip(c[1:], c[2:])) and c[-1] <= c[0]
    assert g.solutions[-1].values[-1] <= 1e-3


def test_shared_grid(ref_ground):
    big = ref_ground.grid
    assert big.R == 32 and big.nodes[1] == pytest.approx(1 / 128)
    for n, cert in zip(ref_ground.schedule, ref_ground.certificates):
        assert cert.grid.prefix_of(big) and cert.R == n


def test_domination_nodewise(ref_ground):
    v = ref_ground.v.values
    for u in ref_ground.solutions:
        assert np.all(u.values <= v + 1e-6)


def test_decay_table(ref_ground):
    rows = decay_profile(ref_ground)
    r = [row[0] for row in rows]
    assert r[0] == 0.0 and r[-1] == 32.0 and 1.0 in r
    u = np.array([row[1] for row in rows])
    v = np.array([row[2] for row in rows])
    assert np.all(np.diff(u) <= 0) and np.all(u <= v) and u[-1] == 0.0
    assert isinstance(tail_monotone(ref_ground), bool)


def test_schedule_validation(ref_spec):
    for bad in ((4, 4, 8), (4, 8), (0, 4, 8), (8, 4, 16)):
        with pytest.raises(PreconditionError):
            solve_ground_state(ref_spec, bad)


def test_divergent_weight_refused():
    with pytest.raises(PreconditionError, match="sufficient"):
        solve_ground_state(reference_spec(p=WeightP.inverse_power(1.5)))


def test_empty_result_has_no_decay():
    res = GroundStateResult((4, 8, 16), 0.125, RadialGrid.with_spacing(16, 0.125))
    assert decay_profile(res) == [] and res.profile is None
    assert res.to_dict()["stages_completed"] == 0


def test_stage_failure_carries_partial(ref_spec):
    class Stop(LefError):
        pass

    def hook(stage, res):
        if stage == 1:
            raise Stop("halt")

    with pytest.raises(Stop) as exc:
        solve_ground_state(ref_spec, (4, 8, 16), dr=1 / 64, on_stage=hook)
    assert exc.value.stage == 1 and len(exc.value.partial.solutions) == 2
    assert not exc.value.partial.complete


def test_early_stop(ref_spec):
    res = solve_ground_state(ref_spec, (4, 8, 16, 32), dr=1 / 64, tol_gs=10.0)
    assert res.stopped_early and res.complete and len(res.solutions) == 3
