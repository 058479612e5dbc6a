"""Adaptive Gauss-Legendre quadrature, vectorized over many panels.

Each panel is estimated with a 15-point rule and compared against the sum of
its two halves; panels that miss the tolerance are bisected.  All panels of a
refinement level are evaluated in one integrand call, so the integrand must
accept 1-D arrays.
"""

import numpy as np

_X, _W = np.polynomial.legendre.leggauss(15)

ABS_TOL = 1e-10
REL_TOL = 1e-13


def _eval(f, x):
    y = np.asarray(f(x.ravel()), dtype=float)
    return np.broadcast_to(y, x.size).reshape(x.shape)


def gl15(f, a, b):
    """One 15-point panel per (a[i], b[i])."""
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    half = 0.5 * (b - a)
    x = (0.5 * (a + b))[:, None] + half[:, None] * _X
    return half * (_eval(f, x) @ _W)


MAX_PANELS = 1 << 20


def integrate_segments(f, a, b, abs_tol=ABS_TOL, rel_tol=REL_TOL, max_depth=40):
    """Integrate ``f`` over each segment [a[i], b[i]].

    Returns ``(values, error_estimates)`` as arrays shaped like ``a``.
    Refinement stops at ``max_depth`` or when the live panel count would
    exceed MAX_PANELS; non-finite panel estimates are not refined.
    """
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.broadcast_to(np.asarray(b, dtype=float), a.shape).copy()
    values = np.zeros(a.shape)
    errors = np.zeros(a.shape)
    live = (a != b).ravel()
    idx = np.flatnonzero(live)
    lo, hi = a.ravel()[live].copy(), b.ravel()[live].copy()
    whole = gl15(f, lo, hi)
    depth = 0
    flat_v, flat_e = values.ravel(), errors.ravel()
    while idx.size:
        mid = 0.5 * (lo + hi)
        both = gl15(f, np.concatenate([lo, mid]), np.concatenate([mid, hi]))
        left, right = both[: idx.size], both[idx.size:]
        est = left + right
        err = np.abs(est - whole)
        done = (err <= np.maximum(abs_tol, rel_tol * np.abs(est))) | ~np.isfinite(err)
        if depth >= max_depth or 2 * np.count_nonzero(~done) > MAX_PANELS:
            done[:] = True
        np.add.at(flat_v, idx[done], est[done])
        np.add.at(flat_e, idx[done], err[done])
        keep = ~done
        idx = np.concatenate([idx[keep], idx[keep]])
        lo, hi = np.concatenate([lo[keep], mid[keep]]), np.concatenate([mid[keep], hi[keep]])
        whole = np.concatenate([left[keep], right[keep]])
        depth += 1
    return flat_v.reshape(a.shape), flat_e.reshape(a.shape)


def integrate(f, a, b, abs_tol=ABS_TOL, rel_tol=REL_TOL):
    """Scalar adaptive integral of ``f`` over [a, b]; returns (value, error)."""
    if a == b:
        return 0.0, 0.0
    sign = 1.0
    if b < a:
        a, b, sign = b, a, -1.0
    v, e = integrate_segments(f, np.array([a]), np.array([b]), abs_tol, rel_tol)
    return sign * float(v[0]), float(e[0])


def cumulative(f, nodes, abs_tol=ABS_TOL, rel_tol=REL_TOL):
    """Running integral of ``f`` from nodes[0] evaluated at every node."""
    nodes = np.asarray(nodes, dtype=float)
    seg, err = integrate_segments(f, nodes[:-1], nodes[1:], abs_tol, rel_tol)
    return np.concatenate([[0.0], np.cumsum(seg)]), float(err.sum())
