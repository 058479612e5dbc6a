"""NumPy/SciPy implementations of the compiled kernels (import fallback)."""

import numpy as np
from scipy.linalg import solve_banded


def tridiag_solve(lower, diag, upper, rhs):
    n = diag.shape[0]
    ab = np.zeros((3, n))
    ab[0, 1:] = upper[:-1]
    ab[1] = diag
    ab[2, :-1] = lower[1:]
    return solve_banded((1, 1), ab, rhs, check_finite=False)


def _interior_weights(r):
    hm = r[1:-1] - r[:-2]
    hp = r[2:] - r[1:-1]
    return hm, hp


def radial_laplacian(r, u, N):
    n = r.shape[0]
    lap = np.full(n, np.nan)
    if n < 3:
        return lap
    hm, hp = _interior_weights(r)
    um, u0, up = u[:-2], u[1:-1], u[2:]
    d2 = 2.0 * (up / (hp * (hm + hp)) - u0 / (hm * hp) + um / (hm * (hm + hp)))
    d1 = -hp / (hm * (hm + hp)) * um + (hp - hm) / (hm * hp) * u0 + hm / (hp * (hm + hp)) * up
    lap[0] = 2.0 * N * (u[1] - u[0]) / (r[1] - r[0]) ** 2
    lap[1:-1] = d2 + (N - 1) * d1 / r[1:-1]
    return lap


def central_gradient(r, u):
    n = r.shape[0]
    du = np.zeros(n)
    if n < 3:
        return du
    hm, hp = _interior_weights(r)
    du[1:-1] = (-hp / (hm * (hm + hp)) * u[:-2] + (hp - hm) / (hm * hp) * u[1:-1]
                + hm / (hp * (hm + hp)) * u[2:])
    hm, hp = r[-2] - r[-3], r[-1] - r[-2]
    du[-1] = ((hm + 2.0 * hp) / (hp * (hm + hp)) * u[-1] - (hm + hp) / (hm * hp) * u[-2]
              + hp / (hm * (hm + hp)) * u[-3])
    return du
