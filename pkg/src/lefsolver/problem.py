"""Problem data for -Lap u = p(x) (g(u) + f(u) + |grad u|^a) on R^N.

Nonlinearities and weights are built from a family tag plus parameters
(closed forms) or from monotone tables.  All evaluators are vectorized.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.optimize import minimize_scalar

from .errors import BracketError, EvalDomainError, SpecError

LOG_FLOOR = 1e-3

# probe thresholds for the limit hypotheses
G_BIG = 1e3
F_BIG = 1e2
F_SMALL = 1e-4
TOL_M = 1e-9


class _Table:
    """Monotone piecewise-cubic table, held constant outside its range."""

    def __init__(self, t, values):
        t = np.asarray(t, dtype=float)
        values = np.asarray(values, dtype=float)
        if t.ndim != 1 or t.size < 2 or np.any(np.diff(t) <= 0):
            raise SpecError("table abscissae must be strictly increasing with >= 2 points")
        if values.shape != t.shape:
            raise SpecError("table values must match abscissae")
        self.t = t
        self.values = values
        self._p = PchipInterpolator(t, values, extrapolate=False)
        self._dp = self._p.derivative()
        self._ap = self._p.antiderivative()

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return self._p(np.clip(x, self.t[0], self.t[-1]))

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        inside = (x >= self.t[0]) & (x <= self.t[-1])
        return np.where(inside, self._dp(np.clip(x, self.t[0], self.t[-1])), 0.0)

    def antiderivative(self, x):
        x = np.asarray(x, dtype=float)
        t0, t1 = self.t[0], self.t[-1]
        xc = np.clip(x, t0, t1)
        out = self._ap(xc)
        out = out + np.where(x < t0, self.values[0] * (x - t0), 0.0)
        out = out + np.where(x > t1, self.values[-1] * (x - t1), 0.0)
        return out


class NonlinearityG:
    """Singular nonlinearity g: (0, inf) -> (0, inf).

    ``antiderivative`` returns some primitive A with A' = g; only differences
    A(b) - A(a) are meaningful.
    """

    def __init__(self, family, params, value, derivative, antiderivative=None):
        self.family = family
        self.params = dict(params)
        self._value = value
        self._derivative = derivative
        self._antiderivative = antiderivative

    def __repr__(self):
        return f"NonlinearityG({self.family!r}, {self.params!r})"

    def __call__(self, t):
        return self._value(np.asarray(t, dtype=float))

    def derivative(self, t):
        return self._derivative(np.asarray(t, dtype=float))

    def integral(self, lo, hi):
        """Integral of g over [lo, hi] (vectorized over either bound)."""
        lo = np.asarray(lo, dtype=float)
        hi = np.asarray(hi, dtype=float)
        if self._antiderivative is not None:
            return self._antiderivative(hi) - self._antiderivative(lo)
        from .quadrature import integrate_segments

        lo_b, hi_b = np.broadcast_arrays(lo, hi)
        v, _ = integrate_segments(self, lo_b.ravel(), hi_b.ravel(), abs_tol=1e-15)
        return v.reshape(lo_b.shape)

    @classmethod
    def power_singular(cls, gamma):
        gamma = float(gamma)

        def anti(t):
            with np.errstate(divide="ignore"):
                if gamma == 1.0:
                    return np.log(t)
                return t ** (1.0 - gamma) / (1.0 - gamma)

        def value(t):
            with np.errstate(divide="ignore"):
                return t ** (-gamma)

        def deriv(t):
            with np.errstate(divide="ignore"):
                return -gamma * t ** (-gamma - 1.0)

        return cls("power_singular", {"gamma": gamma}, value, deriv, anti)

    @classmethod
    def log_singular(cls, floor=LOG_FLOOR):
        floor = float(floor)
        t_c = np.exp(-floor)

        def anti(t):
            # primitive of -log t is t - t log t; continued linearly past t_c
            tc = np.minimum(t, t_c)
            with np.errstate(divide="ignore", invalid="ignore"):
                base = np.where(tc > 0, tc - tc * np.log(tc), 0.0)
            return base + floor * np.maximum(t - t_c, 0.0)

        def value(t):
            with np.errstate(divide="ignore"):
                return np.maximum(-np.log(t), floor)

        def deriv(t):
            return np.where(t < t_c, -1.0 / t, 0.0)

        return cls("log_singular", {"floor": floor}, value, deriv, anti)

    @classmethod
    def table(cls, t, values):
        tab = _Table(t, values)
        return cls(
            "table",
            {"t": tab.t.tolist(), "values": tab.values.tolist()},
            tab,
            tab.derivative,
            tab.antiderivative,
        )

    @classmethod
    def from_callable(cls, fn, derivative=None, name="custom"):
        if derivative is None:
            def derivative(t):
                eps = 1e-6 * np.maximum(t, 1e-300)
                return (fn(t + eps) - fn(t - eps)) / (2 * eps)
        return cls(name, {}, lambda t: np.asarray(fn(t), dtype=float), derivative)


class NonlinearityF:
    """Sublinear nonnegative nonlinearity f: [0, inf) -> [0, inf)."""

    def __init__(self, family, params, value):
        self.family = family
        self.params = dict(params)
        self._value = value

    def __repr__(self):
        return f"NonlinearityF({self.family!r}, {self.params!r})"

    def __call__(self, t):
        return self._value(np.asarray(t, dtype=float))

    @classmethod
    def power(cls, q):
        q = float(q)
        return cls("power", {"q": q}, lambda t: np.maximum(t, 0.0) ** q)

    @classmethod
    def power_shift(cls, q, s):
        q, s = float(q), float(s)
        return cls("power_shift", {"q": q, "s": s},
                   lambda t: (np.maximum(t, 0.0) + s) ** q - s ** q)

    @classmethod
    def table(cls, t, values):
        tab = _Table(t, values)
        return cls("table", {"t": tab.t.tolist(), "values": tab.values.tolist()}, tab)

    @classmethod
    def from_callable(cls, fn, name="custom"):
        return cls(name, {}, lambda t: np.asarray(fn(t), dtype=float))


class WeightP:
    """Positive weight p on R^N.

    Radial weights are evaluated from the radius; non-radial ones from
    Cartesian points of shape (..., N).  ``tail_exponent`` is the decay rate e
    in p ~ r^(-e) (``inf`` for faster-than-algebraic decay), or None if unknown.
    """

    def __init__(self, family, params, fn, is_radial, tail_exponent=None):
        self.family = family
        self.params = dict(params)
        self._fn = fn
        self.is_radial = is_radial
        self.tail_exponent = tail_exponent

    def __repr__(self):
        return f"WeightP({self.family!r}, {self.params!r})"

    def radial(self, r):
        if not self.is_radial:
            raise SpecError(f"weight {self.family!r} is not radial")
        r = np.asarray(r, dtype=float)
        return np.broadcast_to(self._fn(r), r.shape) * 1.0

    def at(self, x):
        x = np.asarray(x, dtype=float)
        if self.is_radial:
            return self.radial(np.linalg.norm(x, axis=-1))
        return self._fn(x)

    # radial closed forms
    @classmethod
    def inverse_power(cls, sigma):
        sigma = float(sigma)
        return cls("inverse_power", {"sigma": sigma}, lambda r: (1.0 + r) ** (-sigma), True, sigma)

    @classmethod
    def inverse_power_sq(cls, sigma):
        sigma = float(sigma)
        return cls("inverse_power_sq", {"sigma": sigma},
                   lambda r: (1.0 + r * r) ** (-0.5 * sigma), True, sigma)

    @classmethod
    def gaussian(cls, scale=1.0):
        scale = float(scale)
        return cls("gaussian", {"scale": scale}, lambda r: np.exp(-(r / scale) ** 2), True, np.inf)

    @classmethod
    def exponential(cls, scale=1.0):
        scale = float(scale)
        return cls("exponential", {"scale": scale}, lambda r: np.exp(-r / scale), True, np.inf)

    @classmethod
    def constant(cls, value=1.0):
        value = float(value)
        return cls("constant", {"value": value}, lambda r: np.full(np.shape(r), value), True, 0.0)

    # non-radial closed forms
    @classmethod
    def gaussian_sin(cls):
        """exp(-|x|^2) (2 + sin x_1)."""

        def fn(x):
            return np.exp(-np.sum(x * x, axis=-1)) * (2.0 + np.sin(x[..., 0]))

        return cls("gaussian_sin", {}, fn, False, np.inf)

    @classmethod
    def dipole(cls, sigma):
        """(1 + |x|)^(-sigma) (2 + x_1/|x|), with the angular factor 2 at the origin."""
        sigma = float(sigma)

        def fn(x):
            r = np.linalg.norm(x, axis=-1)
            with np.errstate(invalid="ignore", divide="ignore"):
                cos = np.where(r > 0, x[..., 0] / np.where(r > 0, r, 1.0), 0.0)
            return (1.0 + r) ** (-sigma) * (2.0 + cos)

        return cls("dipole", {"sigma": sigma}, fn, False, sigma)

    @classmethod
    def from_callable(cls, fn, is_radial=True, tail_exponent=None, name="custom"):
        return cls(name, {}, fn, is_radial, tail_exponent)


@dataclass(frozen=True)
class ProblemSpec:
    N: int
    a: float
    g: NonlinearityG
    f: NonlinearityF
    p: WeightP

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 3:
            raise SpecError(f"N must be an integer >= 3, got {self.N!r}")
        if not 0.0 < self.a < 1.0:
            raise SpecError(f"a must lie in (0, 1), got {self.a!r}")


@dataclass(frozen=True)
class ProbeConfig:
    t_min: float = 1e-8
    t_max: float = 1e8
    n: int = 321
    g_big: float = G_BIG
    f_big: float = F_BIG
    f_small: float = F_SMALL

    def points(self):
        if self.n < 200:
            raise SpecError("probe grid needs at least 200 points")
        return np.logspace(np.log10(self.t_min), np.log10(self.t_max), self.n)


@dataclass(frozen=True)
class HypothesisCheck:
    passed: bool
    witness: tuple | None = None
    detail: str = ""


@dataclass(frozen=True)
class HypothesisReport:
    checks: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(c.passed for c in self.checks.values())

    def failures(self):
        return {k: c for k, c in self.checks.items() if not c.passed}

    def to_dict(self):
        return {
            k: {"passed": c.passed, "witness": list(c.witness) if c.witness else None,
                "detail": c.detail}
            for k, c in self.checks.items()
        }


def _finite(name, fn, t):
    v = np.asarray(fn(t), dtype=float)
    v = np.broadcast_to(v, t.shape)
    bad = ~np.isfinite(v)
    if bad.any():
        i = int(np.argmax(bad))
        raise EvalDomainError(name, float(t[i]), float(v[i]))
    return np.array(v)


def _first_increase(t, v, rel=1e-12):
    """First consecutive pair where v goes up (beyond roundoff)."""
    bad = v[1:] > v[:-1] + rel * np.abs(v[:-1])
    if bad.any():
        i = int(np.argmax(bad))
        return (float(t[i]), float(t[i + 1]))
    return None


def validate_hypotheses(spec, probes=ProbeConfig()):
    """Probe g (positive, nonincreasing, singular at 0) and f (nondecreasing, f(t)/t
    nonincreasing from +inf to 0) on a log grid."""
    t = probes.points()
    gv = _finite("g", spec.g, t)
    fv = _finite("f", spec.f, t)
    checks = {}

    neg = gv <= 0
    checks["g_positive"] = HypothesisCheck(
        not neg.any(), (float(t[np.argmax(neg)]),) if neg.any() else None)

    w = _first_increase(t, gv)
    checks["g_nonincreasing"] = HypothesisCheck(w is None, w)

    decade = t <= probes.t_min * 10.0 * (1 + 1e-12)
    gd = gv[decade]
    strictly = np.all(gd[:-1] > gd[1:])
    big = gv[0] >= probes.g_big
    checks["g1_singular_limit"] = HypothesisCheck(
        bool(big and strictly), None if (big and strictly) else (float(t[0]),),
        f"g(t_min)={gv[0]:.6g}")

    w = _first_increase(t, -fv)
    checks["f_nondecreasing"] = HypothesisCheck(w is None, w)

    ratio = fv / t
    w = _first_increase(t, ratio)
    checks["f1_ratio_nonincreasing"] = HypothesisCheck(w is None, w)

    lo_ok = ratio[0] >= probes.f_big
    hi_ok = ratio[-1] <= probes.f_small
    wit = None
    if not lo_ok:
        wit = (float(t[0]),)
    elif not hi_ok:
        wit = (float(t[-1]),)
    checks["f2_limits"] = HypothesisCheck(
        bool(lo_ok and hi_ok), wit, f"f/t at t_min={ratio[0]:.6g}, at t_max={ratio[-1]:.6g}")
    return HypothesisReport(checks)


@dataclass(frozen=True)
class Infimum:
    m: float
    t_star: float
    at_boundary: bool = False


def infimum_g_plus_f(spec, probes=ProbeConfig(), strict=True):
    """m = inf_{t>0} g(t)+f(t), located by probe scan and golden-section refinement."""
    t = probes.points()
    s = _finite("g+f", lambda x: spec.g(x) + spec.f(x), t)
    i = int(np.argmin(s))
    if i == 0 or i == t.size - 1:
        if strict:
            raise BracketError(
                f"infimum of g+f attained at probe boundary t={t[i]:.3g} (value {s[i]:.6g})",
                float(s[i]), float(t[i]))
        return Infimum(float(s[i]), float(t[i]), True)

    def obj(x):
        tt = np.exp(x)
        return float(spec.g(tt) + spec.f(tt))

    lt = np.log(t)
    res = minimize_scalar(obj, bracket=(lt[i - 1], lt[i], lt[i + 1]), method="golden",
                          tol=1e-12)
    if res.fun <= s[i]:
        return Infimum(float(res.fun), float(np.exp(res.x)))
    return Infimum(float(s[i]), float(t[i]))
