"""The auxiliary profile h'' = -g(h), h(0) = 0, h' (eta) = beta.

Built from the energy first integral

    h'(t)^2 = beta^2 + 2 int_{h(t)}^{h(eta)} g,

so t(H) = int_0^H dh / h'(h) is a plain quadrature; h(eta) is the root of
t(H) = eta and the table h(t_j) is obtained by inverting t(H).
"""

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicHermiteSpline
from scipy.optimize import brentq

from .errors import HSolveError, PreconditionError
from .quadrature import integrate, integrate_segments

H_MAX = 1e8
SAFETY_C = 0.01
J_DEFAULT = 400
# per-panel absolute tolerance is scaled by the travel-time bound H/beta
_REL = 1e-14
_ABS = 1e-16


def _slope(g, beta, H, H_eta):
    """h' as a function of the value h = H (energy identity)."""
    with np.errstate(over="ignore", invalid="ignore"):
        return np.sqrt(beta * beta + 2.0 * g.integral(H, H_eta))


def _travel_time(g, beta, H_eta, lo, hi):
    """int_lo^hi dh / h'(h), vectorized over segment bounds."""
    def inv_slope(h):
        with np.errstate(divide="ignore"):
            return 1.0 / _slope(g, beta, h, H_eta)

    v, _ = integrate_segments(inv_slope, lo, hi, abs_tol=_ABS * H_eta / beta, rel_tol=_REL)
    return v


@dataclass(frozen=True)
class HSolution:
    eta: float
    beta: float
    H_eta: float
    t: np.ndarray
    h: np.ndarray
    hp: np.ndarray
    g: object

    @property
    def hp0_infinite(self):
        """h'(0+) = +inf (g not integrable at 0)."""
        return not np.isfinite(self.hp[0])

    @property
    def _spline(self):
        # t as a function of h; dt/dh = 1/h' stays bounded even where h' blows up
        sp = self.__dict__.get("_sp")
        if sp is None:
            with np.errstate(divide="ignore"):
                dt = 1.0 / self.hp
            sp = CubicHermiteSpline(self.h, self.t, dt)
            object.__setattr__(self, "_sp", sp)
        return sp

    def h_at(self, s):
        """h(s) for s in [0, eta]."""
        s = np.asarray(s, dtype=float)
        if np.any(s < 0) or np.any(s > self.eta * (1 + 1e-12)):
            raise PreconditionError("h is only tabulated on [0, eta]")
        flat = np.clip(s.ravel(), 0.0, self.eta)
        sp = self._spline
        dsp = sp.derivative()
        i = np.clip(np.searchsorted(self.t, flat, side="right") - 1, 0, self.t.size - 2)
        lo, hi = self.h[i], self.h[i + 1]
        frac = (flat - self.t[i]) / (self.t[i + 1] - self.t[i])
        H = lo + frac * (hi - lo)
        for _ in range(30):
            F = sp(H) - flat
            d = dsp(H)
            lo = np.where(F < 0, H, lo)
            hi = np.where(F > 0, H, hi)
            with np.errstate(divide="ignore", invalid="ignore"):
                step = np.where(d > 0, F / d, np.inf)
            Hn = H - step
            bad = ~((Hn > lo) & (Hn < hi))
            Hn = np.where(bad, 0.5 * (lo + hi), Hn)
            done = np.abs(Hn - H) <= 1e-15 * np.maximum(np.abs(H), 1e-300)
            H = Hn
            if np.all(done):
                break
        return H.reshape(s.shape)

    def hp_at(self, s):
        """h'(s), from the energy identity at h(s)."""
        return _slope(self.g, self.beta, self.h_at(s), self.H_eta)

    def energy_residual(self, integral=None):
        """|h'^2 - 2 int_h^{h(eta)} g - beta^2| at nodes t_j > 0.

        ``integral(lo, hi)`` may be supplied by an independent quadrature.
        """
        integral = integral or self.g.integral
        lhs = self.hp[1:] ** 2
        rhs = 2.0 * np.array([integral(x, self.H_eta) for x in self.h[1:]]) + self.beta ** 2
        return np.abs(lhs - rhs)


def solve_h(g, eta=1.0, beta=1.0, J=J_DEFAULT, H_max=H_MAX):
    """Tabulate h on the graded mesh t_j = eta (j/J)^2."""
    if eta <= 0 or beta <= 0:
        raise PreconditionError("eta and beta must be positive")

    def travel(H):
        return integrate(lambda h: 1.0 / _slope(g, beta, h, H), 0.0, H,
                         abs_tol=_ABS * H / beta, rel_tol=_REL)[0]

    lo = np.log(eta * beta * 1e-6)
    hi = np.log(H_max)
    if not travel(np.exp(hi)) > eta:
        raise HSolveError(f"t(H) stays below eta={eta} up to H_MAX={H_max:g}")
    if not travel(np.exp(lo)) < eta:
        raise HSolveError("t(H) exceeds eta at the lower bracket end")
    x = brentq(lambda x: travel(np.exp(x)) - eta, lo, hi, xtol=1e-15, rtol=1e-15, maxiter=200)
    H_eta = float(np.exp(x))

    # invert t(H) = t_j: coarse table for the bracket, then safeguarded Newton
    K = 4 * J
    Hg = H_eta * (np.arange(K + 1) / K) ** 2
    Tg = np.concatenate([[0.0], np.cumsum(_travel_time(g, beta, H_eta, Hg[:-1], Hg[1:]))])
    Tg *= eta / Tg[-1]  # absorbs the brentq residual (relative ~1e-15)
    t = eta * (np.arange(J + 1) / J) ** 2
    k = np.clip(np.searchsorted(Tg, t, side="right") - 1, 0, K - 1)
    lo_b, hi_b = Hg[k].copy(), Hg[k + 1].copy()
    H = np.interp(t, Tg, Hg)
    for _ in range(60):
        T = Tg[k] + _travel_time(g, beta, H_eta, Hg[k], H)
        F = T - t
        lo_b = np.where(F < 0, H, lo_b)
        hi_b = np.where(F > 0, H, hi_b)
        with np.errstate(invalid="ignore"):
            Hn = H - F * _slope(g, beta, H, H_eta)
        bad = ~((Hn >= lo_b) & (Hn <= hi_b)) | ~np.isfinite(Hn)
        Hn = np.where(bad, 0.5 * (lo_b + hi_b), Hn)
        done = np.abs(Hn - H) <= 1e-14 * np.maximum(H, 1e-300)
        H = Hn
        if np.all(done):
            break
    H[0], H[-1] = 0.0, H_eta
    hp = _slope(g, beta, H, H_eta)
    hp[-1] = beta
    if np.any(np.diff(H) <= 0):
        raise HSolveError("tabulated h is not strictly increasing; refine J")
    return HSolution(float(eta), float(beta), H_eta, t, H, hp, g)


def hprim_power_constant(hsol, g, a):
    """C with (h')^a <= C g(h) on the table, padded by SAFETY_C."""
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = hsol.hp ** a / g(hsol.h)
    ratio = ratio[np.isfinite(ratio)]
    return float((1.0 + SAFETY_C) * np.max(ratio))
