"""First Dirichlet eigenpair of -Lap on a ball (radial), and Hopf data."""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import EigenError, HopfError, PreconditionError
from .grid import RadialField, RadialGrid, dirichlet_operator

TOL_EIG = 1e-8
MAX_ITER = 10_000
THETAS = tuple(np.round(np.arange(0.10, 0.9001, 0.05), 2))


@dataclass(frozen=True, eq=False)
class EigenPair:
    """``lambda1`` is the Richardson-corrected estimate when a nested coarse grid
    exists, ``lambda1_h`` the eigenvalue of the discrete operator itself."""

    lambda1: float
    lambda1_h: float
    phi1: RadialField
    N: int
    R: float
    iterations: int = 0

    def residual(self):
        """sup |-Lap_h phi - lambda_h phi| over the unknown nodes."""
        lap = self.phi1.laplacian()[:-1]
        return float(np.max(np.abs(-lap - self.lambda1_h * self.phi1.values[:-1])))


def _inverse_iteration(grid, N, tol=1e-12, max_iter=MAX_ITER):
    lower, diag, upper, _ = dirichlet_operator(grid, N)
    x = np.ones(grid.J)
    lam = np.inf
    for it in range(1, max_iter + 1):
        y = kernels.tridiag_solve(lower, diag, upper, x)
        lam_new = float(x @ x) / float(x @ y)
        x = y / np.max(np.abs(y))
        if abs(lam_new - lam) <= tol * lam_new:
            return lam_new, x, it
        lam = lam_new
    raise EigenError(f"inverse iteration did not converge in {max_iter} steps")


def first_eigenpair(N, R=1.0, grid=None, J=2000, richardson=True):
    """Inverse power iteration (shift 0) on the radial Dirichlet operator."""
    grid = grid or RadialGrid.uniform(R, J)
    if grid.J < 200:
        raise PreconditionError("eigenpair needs at least 200 intervals")
    lam_h, x, its = _inverse_iteration(grid, N)
    phi = np.append(x, 0.0)
    if phi[np.argmax(np.abs(phi))] < 0:
        phi = -phi
    phi /= np.max(phi)
    lam = lam_h
    if richardson and grid.J % 2 == 0 and grid.J // 2 >= 100:
        lam_2h, _, _ = _inverse_iteration(grid.coarsen(), N)
        lam = (4.0 * lam_h - lam_2h) / 3.0
    return EigenPair(float(lam), float(lam_h), RadialField(grid, phi, N), int(N), grid.R, its)


@dataclass(frozen=True)
class HopfData:
    """omega = {phi1 > theta}; |phi1'| > delta off omega and phi1 > delta on omega."""

    theta: float
    delta: float
    scan: tuple = ()

    def omega_mask(self, phi):
        return phi > self.theta


def _delta_for(theta, phi, dphi):
    inside = phi > theta
    a = np.min(np.abs(dphi[~inside])) if np.any(~inside) else np.inf
    b = np.min(phi[inside]) if np.any(inside) else np.inf
    return float(min(a, b))


def hopf_data(ep, thetas=THETAS):
    """Pick the threshold theta maximizing delta(theta); ties go to smaller theta."""
    phi = ep.phi1.values
    dphi = ep.phi1.gradient()
    scan = tuple((float(th), _delta_for(th, phi, dphi)) for th in thetas)
    best_theta, best = None, 0.0
    for th, d in scan:
        if d > best:
            best_theta, best = th, d
    if best_theta is None or not np.isfinite(best):
        raise HopfError("no threshold gives a positive Hopf constant on this grid")
    # strict inequalities on the grid
    return HopfData(best_theta, best * (1.0 - 1e-12), scan)
