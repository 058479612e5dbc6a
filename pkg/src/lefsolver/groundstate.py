"""Solutions on expanding balls B_n, extended by zero, and their limit on R^N."""

from dataclasses import dataclass, field

import numpy as np

from .barriers import build_certificate, global_barrier
from .bvp import TOL_CMP, comparison_ratio_check, solve_ball
from .conditions import SphereSampler, sufficient_condition
from .errors import CertificateError, LefError, MonotonicityError, PreconditionError
from .grid import RadialGrid
from .problem import infimum_g_plus_f, validate_hypotheses

TOL_GS = 1e-7
DR_DEFAULT = 1.0 / 128
SCHEDULE_DEFAULT = (4, 8, 16, 32)


@dataclass
class GroundStateResult:
    schedule: tuple
    dr: float
    grid: RadialGrid
    solutions: list = field(default_factory=list)
    reports: list = field(default_factory=list)
    certificates: list = field(default_factory=list)
    comparisons: list = field(default_factory=list)
    monotonicity: list = field(default_factory=list)
    domination: list = field(default_factory=list)
    cauchy: list = field(default_factory=list)
    v: object = None
    barrier: object = None
    stopped_early: bool = False
    complete: bool = False

    @property
    def profile(self):
        return self.solutions[-1] if self.solutions else None

    def to_dict(self):
        return {
            "schedule": list(self.schedule),
            "dr": self.dr,
            "stages_completed": len(self.solutions),
            "complete": self.complete,
            "stopped_early": self.stopped_early,
            "solve_reports": [r.to_dict() for r in self.reports],
            "certificates": [c.to_dict() for c in self.certificates],
            "comparisons": [c.to_dict() for c in self.comparisons],
            "monotonicity_margins": list(self.monotonicity),
            "domination_margins": list(self.domination),
            "cauchy_diffs": list(self.cauchy),
            "global_barrier": self.barrier.to_dict() if self.barrier is not None else None,
            "decay": [list(row) for row in decay_profile(self)],
        }


def _check_schedule(schedule):
    s = tuple(float(x) for x in schedule)
    if len(s) < 3:
        raise PreconditionError("the schedule needs at least 3 radii")
    if any(b <= a for a, b in zip(s, s[1:])) or s[0] <= 0:
        raise PreconditionError(f"schedule {s} is not strictly increasing and positive")
    return s


def solve_ground_state(spec, schedule=SCHEDULE_DEFAULT, dr=DR_DEFAULT, tol_gs=TOL_GS,
                       tol_cmp=TOL_CMP, eta=None, beta=None, verify_factor=0, sampler=None,
                       on_stage=None):
    """Solve on each B_n of ``schedule`` with the common spacing ``dr``.

    Stops early once the sup difference on the first ball stays below
    ``tol_gs`` for two consecutive stages.  A stage failure propagates with
    ``stage`` and ``partial`` attributes attached to the exception.
    """
    schedule = _check_schedule(schedule)
    sampler = sampler or SphereSampler(N=spec.N)
    report = validate_hypotheses(spec)
    if not report.passed:
        raise PreconditionError("hypotheses fail: " + ", ".join(report.failures()))
    verdict = sufficient_condition(spec, sampler)
    if not verdict.convergent:
        raise PreconditionError(
            f"sufficient condition int_1^inf t phi(t) dt is {verdict.status}; "
            "no global barrier exists")
    big = RadialGrid.with_spacing(schedule[-1], dr)
    res = GroundStateResult(schedule, float(dr), big)
    stage = -1
    try:
        gb = global_barrier(spec, sampler)
        res.barrier = gb
        res.v = gb.restrict(big, spec.N)
        m = infimum_g_plus_f(spec).m
        n0_nodes = RadialGrid.with_spacing(schedule[0], dr).nodes.size
        below = 0
        for stage, n in enumerate(schedule):
            grid = RadialGrid.with_spacing(n, dr)
            cert = build_certificate(spec, n, grid=grid, eta=eta, beta=beta, m=m,
                                     verify_factor=verify_factor, sampler=sampler)
            u, rep = solve_ball(spec, cert=cert)
            uz = u.zero_extend(big)
            res.certificates.append(cert)
            res.reports.append(rep)
            dom = float(np.min(res.v.values - uz.values))
            if dom < -tol_cmp:
                raise CertificateError(
                    f"u_{n:g} exceeds the global barrier by {-dom:.3g}", "domination")
            if res.solutions:
                prev = res.solutions[-1]
                res.comparisons.append(
                    comparison_ratio_check(prev.restrict(grid), u, spec, tol_cmp))
                # interior of the previous ball; beyond it both sides vanish or u >= 0
                k_prev = RadialGrid.with_spacing(schedule[stage - 1], dr).J
                mono = float(np.min(uz.values[:k_prev] - prev.values[:k_prev]))
                res.monotonicity.append(mono)
                if mono < -tol_cmp:
                    raise MonotonicityError(
                        f"u_{n:g} < previous stage by {-mono:.3g}; refine the grid spacing")
                diff = float(np.max(np.abs(uz.values[:n0_nodes] - prev.values[:n0_nodes])))
                res.cauchy.append(diff)
                below = below + 1 if diff <= tol_gs else 0
            res.solutions.append(uz)
            res.domination.append(dom)
            if on_stage is not None:
                on_stage(stage, res)
            if below >= 2:
                res.stopped_early = stage < len(schedule) - 1
                break
    except LefError as exc:
        exc.stage = stage
        exc.partial = res
        raise
    res.complete = True
    return res


def decay_profile(result):
    """Rows (r, u(r), v(r)) at r = 0 and the dyadic radii up to the last ball."""
    if not result.solutions:
        return []
    u = result.solutions[-1]
    r_last = result.schedule[len(result.solutions) - 1]
    radii = [0.0] + [2.0 ** j for j in range(-3, 64) if 2.0 ** j <= r_last]
    if radii[-1] != r_last:
        radii.append(float(r_last))
    rows = []
    for r in radii:
        i = int(np.argmin(np.abs(u.r - r)))
        rows.append((float(u.r[i]), float(u.values[i]), float(result.v.values[i])))
    return rows


def tail_monotone(result):
    """Whether the last profile is nonincreasing past its interior maximum (reported only)."""
    u = result.solutions[-1].values
    i = int(np.argmax(u))
    return bool(np.all(np.diff(u[i:]) <= 0))
