# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops: tridiagonal solve and radial finite differences."""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def tridiag_solve(const double[::1] lower, const double[::1] diag,
                  const double[::1] upper, const double[::1] rhs):
    """Thomas algorithm. ``lower[i]`` multiplies x[i-1], ``upper[i]`` x[i+1]."""
    cdef Py_ssize_t n = diag.shape[0]
    cdef Py_ssize_t i
    cdef double denom
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] x = out
    cdef double[::1] cp = np.empty(n, dtype=np.float64)
    cdef double[::1] dp = np.empty(n, dtype=np.float64)
    if n == 0:
        return out
    cp[0] = upper[0] / diag[0]
    dp[0] = rhs[0] / diag[0]
    for i in range(1, n):
        denom = diag[i] - lower[i] * cp[i - 1]
        cp[i] = upper[i] / denom
        dp[i] = (rhs[i] - lower[i] * dp[i - 1]) / denom
    x[n - 1] = dp[n - 1]
    for i in range(n - 2, -1, -1):
        x[i] = dp[i] - cp[i] * x[i + 1]
    return out


def radial_laplacian(const double[::1] r, const double[::1] u, int N):
    """u'' + (N-1)/r u' on nodes 0..n-2; node 0 uses the ghost-point form N*u''(0)."""
    cdef Py_ssize_t n = r.shape[0]
    cdef Py_ssize_t i
    cdef double hm, hp, d2, d1
    out = np.full(n, np.nan, dtype=np.float64)
    cdef double[::1] lap = out
    if n < 3:
        return out
    hp = r[1] - r[0]
    lap[0] = 2.0 * N * (u[1] - u[0]) / (hp * hp)
    for i in range(1, n - 1):
        hm = r[i] - r[i - 1]
        hp = r[i + 1] - r[i]
        d2 = 2.0 * (u[i + 1] / (hp * (hm + hp)) - u[i] / (hm * hp)
                    + u[i - 1] / (hm * (hm + hp)))
        d1 = (-hp / (hm * (hm + hp)) * u[i - 1] + (hp - hm) / (hm * hp) * u[i]
              + hm / (hp * (hm + hp)) * u[i + 1])
        lap[i] = d2 + (N - 1) * d1 / r[i]
    return out


def central_gradient(const double[::1] r, const double[::1] u):
    """Second-order first derivative; zero at the symmetry node r=0."""
    cdef Py_ssize_t n = r.shape[0]
    cdef Py_ssize_t i
    cdef double hm, hp
    out = np.zeros(n, dtype=np.float64)
    cdef double[::1] du = out
    if n < 3:
        return out
    for i in range(1, n - 1):
        hm = r[i] - r[i - 1]
        hp = r[i + 1] - r[i]
        du[i] = (-hp / (hm * (hm + hp)) * u[i - 1] + (hp - hm) / (hm * hp) * u[i]
                 + hm / (hp * (hm + hp)) * u[i + 1])
    hm = r[n - 2] - r[n - 3]
    hp = r[n - 1] - r[n - 2]
    du[n - 1] = ((hm + 2.0 * hp) / (hp * (hm + hp)) * u[n - 1]
                 - (hm + hp) / (hm * hp) * u[n - 2]
                 + hp / (hm * (hm + hp)) * u[n - 3])
    return out
