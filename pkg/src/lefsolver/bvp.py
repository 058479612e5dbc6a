"""Dirichlet problem on a ball by barrier-clamped damped Picard iteration, and
the ratio comparison between solutions on nested balls."""

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import DomainError, PreconditionError, SolveError
from .grid import RadialField, RadialGrid, dirichlet_operator, solve_poisson

TOL_PDE = 1e-8
TOL_FIX = 1e-10
TOL_CMP = 1e-6
K_PICARD = 5000
RHO = 0.5
RETRIES = 2
EPS_U = 1e-14


@dataclass(frozen=True)
class SolveReport:
    iterations: int
    residual: float
    damping: float
    clamp_count: int
    attempts: int = 1
    history: tuple = field(default=(), repr=False)

    def to_dict(self):
        return {"iterations": self.iterations, "residual": self.residual,
                "damping": self.damping, "clamp_count": self.clamp_count,
                "attempts": self.attempts}


def _terms(spec):
    g, f, a = spec.g, spec.f, spec.a

    def terms(r, u, du):
        return g(np.maximum(u, EPS_U)) + f(u) + np.abs(du) ** a

    return terms


def pde_residual(spec, u, terms=None):
    """-Lap_h u - p (g(u) + f(u) + |Du|^a) at the interior nodes."""
    terms = terms or _terms(spec)
    r = u.r
    J = r.size - 1
    lap = u.laplacian()[:J]
    du = u.gradient()[:J]
    return -lap - spec.p.radial(r[:J]) * terms(r[:J], u.values[:J], du)


def _picard(spec, grid, sub, sup, rho, tol, max_iter, terms):
    r = grid.nodes
    J = grid.J
    N = spec.N
    op = dirichlet_operator(grid, N)
    p = spec.p.radial(r[:J])
    u = sub.copy() if sub is not None else np.zeros(J + 1)
    clamps = 0
    history = []
    for k in range(1, max_iter + 1):
        if sub is not None:
            outside = (u < sub) | (u > sup)
            clamps += int(np.count_nonzero(outside))
            ut = np.clip(u, sub, sup)
        else:
            ut = u
        du = kernels.central_gradient(r, ut)
        F = p * terms(r[:J], ut[:J], du[:J])
        ustar = solve_poisson(grid, N, F, operator=op)
        un = (1.0 - rho) * u + rho * ustar
        upd = float(np.max(np.abs(un - u)))
        u = un
        uc = np.clip(u, sub, sup) if sub is not None else u
        res = float(np.max(np.abs(pde_residual(spec, RadialField(grid, uc, N), terms))))
        history.append(res)
        if upd <= TOL_FIX and res <= tol:
            return uc, SolveReport(k, res, rho, clamps, history=tuple(history))
    raise SolveError(f"Picard iteration (rho={rho:g}) did not reach residual {tol:g} in "
                     f"{max_iter} steps; last residual {history[-1]:.3g}", tuple(history))


def solve_ball(spec, R=None, grid=None, cert=None, rho=RHO, tol=TOL_PDE, max_iter=K_PICARD,
               retries=RETRIES, terms=None):
    """Solve -Lap u = p (g(u) + f(u) + |Du|^a) on B_R with u(R) = 0.

    Iterates start at the sub-solution and are clamped into [sub, super] of the
    certificate before the right side is assembled.  ``terms(r, u, du)``
    replaces g(u) + f(u) + |Du|^a (used for linear checks; then ``cert`` may
    be None).  On failure the damping is halved up to ``retries`` times.
    """
    if not spec.p.is_radial:
        raise PreconditionError("the ball solver needs a radial weight")
    if cert is not None and grid is None:
        grid = cert.grid
    elif grid is None:
        raise PreconditionError("a grid or a certificate is required")
    if cert is None and terms is None:
        raise PreconditionError("the nonlinear problem needs a barrier certificate")
    terms = terms or _terms(spec)
    sub = sup = None
    if cert is not None:
        sub, sup = cert.sub.values, cert.super.values
        if grid is not cert.grid:
            # window carried to another grid of the same ball by interpolation
            if not np.isclose(grid.R, cert.grid.R, rtol=1e-12):
                raise PreconditionError("certificate and grid describe different balls")
            sub = np.interp(grid.nodes, cert.grid.nodes, sub)
            sup = np.interp(grid.nodes, cert.grid.nodes, sup)
    err = None
    for attempt in range(retries + 1):
        try:
            u, rep = _picard(spec, grid, sub, sup, rho, tol, max_iter, terms)
        except SolveError as exc:
            err = exc
            rho *= 0.5
            continue
        rep = SolveReport(rep.iterations, rep.residual, rep.damping, rep.clamp_count,
                          attempt + 1, rep.history)
        return RadialField(grid, u, spec.N), rep
    raise err


@dataclass(frozen=True)
class ComparisonReport:
    """Ratio zeta = u_small / u_large over the interior of the larger ball.

    When the ordering fails, the comparison brackets are
    evaluated at the maximizer r0:
      cont1 = [(g+f)(u_s)/u_s - (g+f)(u_l)/u_l] + [|Du_s|^a/u_s - |Du_l|^a/u_l]
      cont2 = the gradient bracket alone
      power_gap = u_s^(a-1) - u_l^(a-1)
    """

    max_zeta: float
    r0: float
    index0: int
    ordering_holds: bool
    cont1_nonlinear: float = float("nan")
    cont1_gradient: float = float("nan")
    cont1: float = float("nan")
    cont2: float = float("nan")
    power_gap: float = float("nan")
    zeta_slope: float = float("nan")

    @property
    def cont1_nonnegative(self):
        return bool(self.cont1 >= 0)

    @property
    def cont2_positive(self):
        return bool(self.cont2 > 0)

    @property
    def power_gap_positive(self):
        return bool(self.power_gap > 0)

    def to_dict(self):
        d = {"max_zeta": self.max_zeta, "r0": self.r0, "index0": self.index0,
             "ordering_holds": self.ordering_holds}
        if not self.ordering_holds:
            d.update({"cont1_nonlinear": self.cont1_nonlinear,
                      "cont1_gradient": self.cont1_gradient, "cont1": self.cont1,
                      "cont1_nonnegative": self.cont1_nonnegative, "cont2": self.cont2,
                      "cont2_positive": self.cont2_positive, "power_gap": self.power_gap,
                      "power_gap_positive": self.power_gap_positive,
                      "zeta_slope": self.zeta_slope})
        return d


def comparison_ratio_check(u_small, u_large, spec, tol=TOL_CMP):
    """Locate max zeta = u_small/u_large on the interior nodes of u_large's ball.

    ``u_small`` may live on a shorter grid; it is extended by zero.
    """
    if u_small.grid.prefix_of(u_large.grid):
        us_f = u_small.zero_extend(u_large.grid)
    elif u_large.grid.prefix_of(u_small.grid):
        us_f = u_small.restrict(u_large.grid)
    else:
        raise PreconditionError("fields do not share a common grid")
    J = u_large.grid.J
    ul = u_large.values[:J]
    if np.any(ul <= 0):
        i = int(np.argmax(ul <= 0))
        raise DomainError(f"u_large is not positive at interior node r={u_large.r[i]:.6g}")
    us = us_f.values[:J]
    zeta = us / ul
    i0 = int(np.argmax(zeta))
    mz = float(zeta[i0])
    r = u_large.r
    if mz <= 1.0 + tol:
        return ComparisonReport(mz, float(r[i0]), i0, True)

    a = spec.a
    g, f = spec.g, spec.f
    s, l = us[i0], ul[i0]
    ds = float(us_f.gradient()[i0])
    dl = float(u_large.gradient()[i0])
    nonlin = float((g(s) + f(s)) / s - (g(l) + f(l)) / l)
    grad = float(abs(ds) ** a / s - abs(dl) ** a / l)
    zslope = float(kernels.central_gradient(r[:J + 1], np.append(zeta, zeta[-1]))[i0])
    return ComparisonReport(mz, float(r[i0]), i0, False, nonlin, grad, nonlin + grad, grad,
                            float(s ** (a - 1) - l ** (a - 1)), zslope)
