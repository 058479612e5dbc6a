"""Sub- and super-solutions on balls and the global barrier on R^N.

Ball barriers: the sub-solution solves -Lap u = m p, and the super-solution is
u_bar = M h(c phi1), with (c, M) found by halving / doubling searches against
the constant inequalities bm1..bm5.  Every pointwise inequality of the
verification chain is then re-evaluated on the grid and recorded as a margin.

Global barrier: k -> xi(r) = k int_r^inf Phi -> w = G^{-1}(xi) with
G(w) = int_0^w dt / (g(t) + 1) -> v = M_v w.
"""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from . import kernels
from .conditions import (R_FAR, SphereSampler, capital_phi_of, envelopes,
                         sufficient_condition, sup_capital_phi)
from .eigen import first_eigenpair, hopf_data, _delta_for
from .errors import (CertificateError, ConstantSearchError, DomainError, InvertError,
                     PreconditionError)
from .grid import RadialField, RadialGrid, solve_poisson
from .hode import hprim_power_constant, solve_h
from .problem import infimum_g_plus_f
from .quadrature import cumulative, integrate_segments

C_MIN = 1e-8
M_MAX = 1e12
EPS_K = 1e-6
TOL_GRAD = 1e-6
DECAY_TOL = 1e-6
W_MAX = 1e12
TOL_INV = 1e-12
# uniform step of the global table on [0, 1]; geometric ratio 1 + H0 beyond
H0_TABLE = 1.0 / 2048
J_BALL = 400
VERIFY_FACTOR = 4

MARGIN_NAMES = ("bm1", "bm2", "bm3", "bm4", "bm5",
                "ineg5", "ineg6", "ineg6bis", "ineg8", "sandwich")

# (eta, beta) fallbacks for the auxiliary profile, tried in order when the
# configured pair leaves bm3 unreachable.  Large eta with small beta keeps h
# in its singular regime h' ~ sqrt(2 int g) over the whole range [0, c theta].
H_LADDER = ((1.0, 1.0),) + tuple((10.0 ** e, 0.1 * 10.0 ** (-e / 2)) for e in range(2, 17, 2))


# --------------------------------------------------------------------------
# margins


@dataclass(frozen=True)
class Margin:
    """Minimal relative slack (lhs - rhs) / max(|lhs|, |rhs|) and where it occurs."""

    slack: float
    worst_index: int = -1
    worst_r: float = float("nan")

    def to_dict(self):
        return {"slack": self.slack, "worst_index": self.worst_index,
                "worst_r": None if np.isnan(self.worst_r) else self.worst_r}


def relative_slack(lhs, rhs):
    lhs = np.asarray(lhs, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    with np.errstate(invalid="ignore", divide="ignore"):
        scale = np.maximum(np.abs(lhs), np.abs(rhs))
        s = (lhs - rhs) / scale
    s = np.where(np.isposinf(lhs) & np.isfinite(rhs), 1.0, s)
    s = np.where(np.isposinf(rhs) & np.isfinite(lhs), -1.0, s)
    s = np.where(scale == 0, 0.0, s)
    return np.where(np.isnan(s), -np.inf, s)


def _margin(lhs, rhs, r=None, idx=None):
    s = np.atleast_1d(relative_slack(lhs, rhs))
    if s.size == 0:
        return Margin(1.0)
    i = int(np.argmin(s))
    if r is None:
        return Margin(float(s[i]))
    gi = int(idx[i]) if idx is not None else i
    return Margin(float(s[i]), gi, float(r[gi]))


# --------------------------------------------------------------------------
# sub-solution


def weight_envelopes(spec, sampler=None, tabulated=False):
    """(psi, phi) radial envelopes of p; both equal p for radial weights."""
    return envelopes(spec.p, sampler or SphereSampler(N=spec.N), tabulated)


def subsolution(spec, m, R=None, grid=None, sampler=None):
    """Solve -Lap u = m psi(r) on B_R, u(R) = 0 (psi = p for radial weights)."""
    if grid is None:
        grid = RadialGrid.uniform(R, J_BALL)
    if m < 0:
        raise PreconditionError("m must be nonnegative")
    psi, _ = weight_envelopes(spec, sampler)
    u = solve_poisson(grid, spec.N, m * psi(grid.nodes))
    return RadialField(grid, u, spec.N)


# --------------------------------------------------------------------------
# super-solution M h(c phi1)


@dataclass(frozen=True)
class _BallData:
    """Grid quantities shared by the constant search and the margins."""

    phi: np.ndarray
    dphi: np.ndarray
    omega: np.ndarray      # phi > theta
    outer: np.ndarray      # interior nodes with phi <= theta
    inner: np.ndarray      # nodes of omega
    p_int: np.ndarray      # phi-envelope of p at interior nodes
    p_max: float
    lam: float
    delta: float
    theta: float
    phi_min_omega: float
    grad_max: float


def _ball_data(spec, ep, hd, sampler=None, delta=None):
    _, pw = weight_envelopes(spec, sampler)
    phi = ep.phi1.values
    dphi = ep.phi1.gradient()
    J = phi.size - 1
    omega = phi > hd.theta
    interior = np.arange(J)
    outer = interior[~omega[:J]]
    inner = interior[omega[:J]]
    if inner.size == 0:
        raise PreconditionError("omega contains no grid node")
    p_all = pw(ep.phi1.r)
    return _BallData(
        phi=phi, dphi=dphi, omega=omega, outer=outer, inner=inner,
        p_int=p_all, p_max=float(np.max(p_all)), lam=float(ep.lambda1),
        delta=float(hd.delta if delta is None else delta), theta=float(hd.theta),
        phi_min_omega=float(np.min(phi[inner])), grad_max=float(np.max(np.abs(dphi))))


def _bm3(spec, hsol, bd, c):
    t = c * bd.phi[bd.outer]
    H = hsol.h_at(t)
    with np.errstate(divide="ignore", over="ignore"):
        lhs = (c * bd.delta) ** 2 * spec.g(H)
    rhs = 3.0 * bd.p_max * spec.f(H)
    return lhs, rhs


def _m_dependent(spec, hsol, bd, C, c, M):
    """lhs / rhs pairs of bm1, bm2, bm4 (scalars) and bm5 (nodes of omega).

    bm2 and bm4 carry the factor min_omega phi1 and bm5 the factor max p, which
    the deduction of the omega inequality needs.
    """
    a = spec.a
    cd = c * bd.delta
    beta = hsol.beta
    out = {
        "bm1": (min(M * cd ** 2, M ** (1 - a) * cd ** (2 - a) / C), 3.0 * bd.p_max),
        "bm2": ((M * c) ** (1 - a) * bd.lam * bd.phi_min_omega * beta ** (1 - a),
                3.0 * bd.p_max * bd.grad_max ** a),
        "bm4": (M * c * bd.lam * bd.phi_min_omega * beta,
                3.0 * bd.p_max * float(spec.g(hsol.h_at(c * bd.phi_min_omega)))),
    }
    t = c * bd.phi[bd.inner]
    lhs5 = M * c * bd.lam * bd.phi[bd.inner] * hsol.hp_at(t)
    rhs5 = 3.0 * bd.p_max * spec.f(M * hsol.h_at(t))
    out["bm5"] = (lhs5, rhs5)
    return out


def _check_c(hsol, ep, c):
    if not c * float(np.max(ep.phi1.values)) < hsol.eta:
        raise PreconditionError(f"c={c:g} violates c max(phi1) < eta={hsol.eta:g}")


def supersolution_constants(spec, hsol, ep, hd, C, c=None, sampler=None):
    """(c, M): c halved from eta/2 until bm3 holds on the grid, then M doubled
    from 2 until bm1, bm2, bm4 and bm5 hold."""
    bd = _ball_data(spec, ep, hd, sampler)
    if c is not None:
        _check_c(hsol, ep, c)
        lhs, rhs = _bm3(spec, hsol, bd, c)
        if not np.all(relative_slack(lhs, rhs) > 0):
            raise ConstantSearchError("bm3 unreachable")
    else:
        c = 0.5 * hsol.eta
        while True:
            lhs, rhs = _bm3(spec, hsol, bd, c)
            if np.all(relative_slack(lhs, rhs) > 0):
                break
            c *= 0.5
            if c < C_MIN:
                raise ConstantSearchError("bm3 unreachable")
    M = 2.0
    while True:
        pairs = _m_dependent(spec, hsol, bd, C, c, M)
        if all(np.all(relative_slack(l, r) > 0) for l, r in pairs.values()):
            return float(c), float(M)
        M *= 2.0
        if M > M_MAX:
            raise ConstantSearchError("M search diverged")


def supersolution_field(hsol, ep, c, M, grid=None):
    """u_bar = M h(c phi1) on the eigenpair grid."""
    _check_c(hsol, ep, c)
    if grid is not None and grid is not ep.phi1.grid:
        raise PreconditionError("u_bar lives on the eigenpair grid")
    u = M * hsol.h_at(c * ep.phi1.values)
    u[-1] = 0.0
    return RadialField(ep.phi1.grid, u, ep.N)


def certificate_margins(spec, hsol, ep, hd, C, c, M, sub, sup, sampler=None, delta=None):
    """Minimal relative slack of each named inequality over its grid region."""
    bd = _ball_data(spec, ep, hd, sampler, delta)
    r = ep.phi1.r
    a = spec.a
    g, f = spec.g, spec.f
    margins = {}
    for name, (lhs, rhs) in _m_dependent(spec, hsol, bd, C, c, M).items():
        margins[name] = _margin(lhs, rhs, r, bd.inner) if name == "bm5" else _margin(lhs, rhs)
    margins["bm3"] = _margin(*_bm3(spec, hsol, bd, c), r, bd.outer)

    # outside omega: one third of M c^2 g(h) |phi'|^2 bounds each term
    o = bd.outer
    t = c * bd.phi[o]
    H = hsol.h_at(t)
    ub = M * H
    with np.errstate(divide="ignore", over="ignore"):
        third = M * c * c * g(H) * bd.dphi[o] ** 2 / 3.0
        grad_ub = M * c * hsol.hp_at(t) * np.abs(bd.dphi[o])
        margins["ineg5"] = _margin(third, bd.p_int[o] * g(ub), r, o)
        margins["ineg6"] = _margin(third, bd.p_int[o] * f(ub), r, o)
        margins["ineg6bis"] = _margin(third, bd.p_int[o] * grad_ub ** a, r, o)

    i = bd.inner
    t = c * bd.phi[i]
    hp = hsol.hp_at(t)
    ub = M * hsol.h_at(t)
    lhs = M * c * bd.lam * bd.phi[i] * hp
    rhs = bd.p_int[i] * (g(ub) + f(ub) + (M * c * hp * np.abs(bd.dphi[i])) ** a)
    margins["ineg8"] = _margin(lhs, rhs, r, i)

    J = r.size - 1
    idx = np.arange(J)
    margins["sandwich"] = _margin(sup.values[:J], sub.values[:J], r, idx)
    return {k: margins[k] for k in MARGIN_NAMES}


def verify_supersolution(spec, ub, sampler=None, raise_on_fail=True):
    """Discrete check -Lap_h u_bar >= p (g + f + |D u_bar|^a) at interior nodes."""
    vals = ub.values
    J = vals.size - 1
    if np.any(vals[:J] <= 0):
        raise PreconditionError("u_bar must be positive at interior nodes")
    _, pw = weight_envelopes(spec, sampler)
    lap = ub.laplacian()[:J]
    du = ub.gradient()[:J]
    r = ub.r
    rhs = pw(r[:J]) * (spec.g(vals[:J]) + spec.f(vals[:J]) + np.abs(du) ** spec.a)
    m = _margin(-lap, rhs, r, np.arange(J))
    if raise_on_fail and not m.slack > 0:
        raise CertificateError(
            f"super-solution inequality fails at r={m.worst_r:.6g} (slack {m.slack:.3g})",
            "discrete", m.worst_index, m.slack)
    return m


@dataclass(frozen=True, eq=False)
class BarrierCertificate:
    sub: RadialField
    super: RadialField
    c: float
    M: float
    C: float
    delta: float
    theta: float
    eta: float
    beta: float
    margins: dict
    m: float = float("nan")
    lambda1: float = float("nan")
    discrete: Margin = Margin(float("nan"))
    fine_margins: dict = field(default_factory=dict)
    fine_discrete: Margin = Margin(float("nan"))
    hsol: object = None

    @property
    def R(self):
        return self.sub.grid.R

    @property
    def grid(self):
        return self.sub.grid

    def min_margin(self):
        return min(m.slack for m in self.margins.values())

    def to_dict(self):
        return {
            "R": self.R, "J": self.grid.J, "N": self.sub.N,
            "constants": {"c": self.c, "M": self.M, "C": self.C, "delta": self.delta,
                          "theta": self.theta, "eta": self.eta, "beta": self.beta,
                          "m": self.m, "lambda1": self.lambda1},
            "margins": {k: v.to_dict() for k, v in self.margins.items()},
            "discrete_supersolution": self.discrete.to_dict(),
            "fine_margins": {k: v.to_dict() for k, v in self.fine_margins.items()},
            "fine_discrete_supersolution": self.fine_discrete.to_dict(),
        }


def _first_failure(margins):
    for name, m in margins.items():
        if not m.slack > 0:
            return name, m
    return None


@lru_cache(maxsize=64)
def _cached_h(g, eta, beta, J):
    return solve_h(g, eta, beta, J=J)


def build_certificate(spec, R, grid=None, J=J_BALL, eta=None, beta=None, c=None, m=None,
                      verify_factor=VERIFY_FACTOR, sampler=None, h_J=400):
    """Sub-solution, super-solution and all margins for B_R.

    With ``eta``/``beta`` unset the pair (1, 1) is tried first, then the
    entries of H_LADDER, until bm3 becomes reachable.
    """
    grid = grid or RadialGrid.uniform(R, J)
    sampler = sampler or SphereSampler(N=spec.N)
    if m is None:
        m = infimum_g_plus_f(spec).m
    ep = first_eigenpair(spec.N, grid.R, grid)
    hd = hopf_data(ep)
    sub = subsolution(spec, m, grid=grid, sampler=sampler)

    if eta is not None or beta is not None:
        ladder = ((eta if eta is not None else 1.0, beta if beta is not None else 1.0),)
    else:
        ladder = H_LADDER
    last = None
    for e, b in ladder:
        hsol = _cached_h(spec.g, float(e), float(b), h_J)
        C = hprim_power_constant(hsol, spec.g, spec.a)
        try:
            c_val, M = supersolution_constants(spec, hsol, ep, hd, C, c=c, sampler=sampler)
            break
        except ConstantSearchError as exc:
            if "bm3" not in str(exc):
                raise
            last = exc
    else:
        raise last

    sup = supersolution_field(hsol, ep, c_val, M)
    margins = certificate_margins(spec, hsol, ep, hd, C, c_val, M, sub, sup, sampler)
    bad = _first_failure(margins)
    if bad:
        name, mg = bad
        raise CertificateError(f"margin {name} is not positive ({mg.slack:.3g})",
                               name, mg.worst_index, mg.slack)
    discrete = verify_supersolution(spec, sup, sampler)

    fine_margins, fine_discrete = {}, Margin(float("nan"))
    if verify_factor:
        fgrid = grid.refine(verify_factor)
        fep = first_eigenpair(spec.N, fgrid.R, fgrid)
        phi, dphi = fep.phi1.values, fep.phi1.gradient()
        fhd = type(hd)(hd.theta, _delta_for(hd.theta, phi, dphi) * (1 - 1e-12))
        fsub = subsolution(spec, m, grid=fgrid, sampler=sampler)
        fsup = supersolution_field(hsol, fep, c_val, M)
        fine_margins = certificate_margins(spec, hsol, fep, fhd, C, c_val, M, fsub, fsup,
                                           sampler)
        fine_discrete = verify_supersolution(spec, fsup, sampler, raise_on_fail=False)

    return BarrierCertificate(sub, sup, c_val, M, C, hd.delta, hd.theta, hsol.eta, hsol.beta,
                              margins, float(m), ep.lambda1, discrete, fine_margins,
                              fine_discrete, hsol)


# --------------------------------------------------------------------------
# global barrier


def k_from_sup(s, a):
    """k = max(2 + EPS_K, (2 s^a)^(1/(1-a)))."""
    return float(max(2.0 + EPS_K, (2.0 * s ** a) ** (1.0 / (1.0 - a))))


def global_k(spec, sampler=None):
    s, _ = sup_capital_phi(spec, sampler)
    return k_from_sup(s, spec.a)


class GInverse:
    """G(w) = int_0^w dt / (g(t) + 1) on cached geometric anchors, and its inverse."""

    def __init__(self, g, w_max=W_MAX):
        self.g = g
        top = int(np.ceil(4 * np.log2(w_max)))
        self.anchors = np.concatenate([[0.0], 2.0 ** (np.arange(-400, top + 1) / 4.0)])
        self.prefix, _ = cumulative(self._density, self.anchors, abs_tol=1e-300, rel_tol=1e-15)

    def _density(self, t):
        with np.errstate(divide="ignore", over="ignore"):
            return 1.0 / (self.g(t) + 1.0)

    @property
    def w_max(self):
        return float(self.anchors[-1])

    def G(self, w):
        w = np.asarray(w, dtype=float)
        flat = w.ravel()
        if np.any(flat < 0) or np.any(flat > self.w_max):
            raise DomainError(f"G is tabulated on [0, {self.w_max:g}]")
        idx = np.clip(np.searchsorted(self.anchors, flat, side="right") - 1, 0,
                      self.anchors.size - 1)
        seg, _ = integrate_segments(self._density, self.anchors[idx], flat,
                                    abs_tol=1e-300, rel_tol=1e-15)
        return (self.prefix[idx] + seg).reshape(w.shape)

    def invert(self, y):
        """w with G(w) = y: bracketed on the anchors, then safeguarded Newton."""
        y = np.asarray(y, dtype=float)
        flat = y.ravel()
        if np.any(flat < 0):
            raise PreconditionError("xi must be nonnegative")
        if np.any(flat > self.prefix[-1]):
            raise InvertError(f"xi exceeds G(W_MAX) = {self.prefix[-1]:g}; raise W_MAX")
        out = np.zeros(flat.shape)
        pos = flat > 0
        yy = flat[pos]
        i = np.clip(np.searchsorted(self.prefix, yy, side="right") - 1, 0,
                    self.anchors.size - 2)
        lo, hi = self.anchors[i].copy(), self.anchors[i + 1].copy()
        frac = (yy - self.prefix[i]) / (self.prefix[i + 1] - self.prefix[i])
        w = lo + frac * (hi - lo)
        for _ in range(100):
            F = self.G(w) - yy
            lo = np.where(F < 0, w, lo)
            hi = np.where(F > 0, w, hi)
            wn = w - F * (self.g(w) + 1.0)
            bad = ~((wn > lo) & (wn < hi)) | ~np.isfinite(wn)
            wn = np.where(bad, 0.5 * (lo + hi), wn)
            done = (np.abs(F) <= 1e-15 * yy) | (np.abs(wn - w) <= 1e-16 * w)
            w = np.where(done, w, wn)
            if np.all(done):
                break
        out[pos] = w
        return out.reshape(y.shape)


@lru_cache(maxsize=16)
def g_inverse(g):
    return GInverse(g)


def invert_w(g, xi_val):
    """Nonnegative w with int_0^w dt/(g(t)+1) = xi_val."""
    w = g_inverse(g).invert(np.asarray(xi_val, dtype=float))
    return float(w) if np.ndim(w) == 0 else w


def _phi_tail_exponent(cp, r):
    """Local decay rate d of Phi near r (Phi ~ r^-d)."""
    v = cp(np.array([0.5 * r, r]))
    return float(np.log2(v[0] / v[1]))


def xi_at(spec, k, r, sampler=None, r_far=R_FAR):
    """xi(r) = k int_r^inf Phi: quadrature to r_far plus a power-law tail."""
    sampler = sampler or SphereSampler(N=spec.N)
    cp = capital_phi_of(spec, sampler)
    r = np.asarray(r, dtype=float)
    flat = r.ravel()
    d = _phi_tail_exponent(cp, r_far)
    if not d > 1.0:
        raise PreconditionError(f"Phi decays like r^-{d:.3g}; not integrable")
    tail = float(cp(np.array([r_far]))[0]) * r_far / (d - 1.0)
    near = flat < r_far
    out = np.empty(flat.shape)
    if np.any(near):
        head, _ = integrate_segments(cp, flat[near], np.full(int(near.sum()), r_far),
                                     abs_tol=1e-300, rel_tol=1e-14)
        out[near] = head + tail
    far = ~near
    if np.any(far):
        out[far] = cp(flat[far]) * flat[far] / (d - 1.0)
    return (k * out).reshape(r.shape)


def table_nodes(r_end, h0=H0_TABLE):
    """Uniform step h0 on [0, 1], geometric ratio 1 + h0 on [1, r_end]."""
    n0 = int(round(1.0 / h0))
    uni = np.arange(n0 + 1) / n0
    n = int(np.ceil(np.log(r_end) / np.log1p(h0)))
    geo = np.exp(np.arange(1, n + 1) * np.log1p(h0))
    geo = geo[geo < r_end]
    if geo.size and (r_end - geo[-1]) < 0.5 * h0 * geo[-1]:
        geo = geo[:-1]
    return np.concatenate([uni, geo, [r_end]])


def _simpson_segments(fn, r):
    mid = 0.5 * (r[:-1] + r[1:])
    fr = fn(r)
    fm = fn(mid)
    return np.diff(r) / 6.0 * (fr[:-1] + 4.0 * fm + fr[1:]), fr


def _gradient_nonuniform(r, u):
    return kernels.central_gradient(r, u)


@dataclass(frozen=True)
class TailDescriptor:
    """Beyond r_end: Phi ~ Phi(r_end) (r_end/r)^d and xi ~ xi(r_end) (r_end/r)^(d-1)."""

    r_end: float
    exponent: float
    xi_end: float
    w_end: float


@dataclass(frozen=True, eq=False)
class GlobalBarrier:
    k: float
    M_v: float
    sup_phi: float
    r_sup: float
    xi_table: RadialField
    w_table: RadialField
    v_table: RadialField
    dw: np.ndarray
    tail: TailDescriptor
    ctrd_residual: float
    ctrd_worst_r: float
    ppq: Margin
    g: object = None

    @property
    def r(self):
        return self.w_table.r

    @property
    def _spline(self):
        sp = self.__dict__.get("_sp")
        if sp is None:
            sp = CubicHermiteSpline(self.r, self.w_table.values, self.dw)
            object.__setattr__(self, "_sp", sp)
        return sp

    def w_at(self, r):
        r = np.asarray(r, dtype=float)
        if np.any(r < 0) or np.any(r > self.tail.r_end):
            raise DomainError(f"w is tabulated on [0, {self.tail.r_end:g}]")
        return self._spline(r)

    def v_at(self, r):
        return self.M_v * self.w_at(r)

    def restrict(self, grid, N=None):
        """v on the nodes of a ball grid."""
        return RadialField(grid, self.v_at(grid.nodes), N or self.w_table.N)

    def certified(self):
        return self.ctrd_residual <= TOL_GRAD and self.ppq.slack > 0 \
            and self.tail.w_end <= DECAY_TOL

    def to_dict(self):
        return {"k": self.k, "M_v": self.M_v, "sup_Phi": self.sup_phi, "argsup_Phi": self.r_sup,
                "table_nodes": int(self.r.size), "r_end": self.tail.r_end,
                "tail_exponent": self.tail.exponent, "xi_end": self.tail.xi_end,
                "w_end": self.tail.w_end, "w_at_R_FAR": float(self.w_at(min(R_FAR,
                                                                          self.tail.r_end))),
                "ctrd_residual": self.ctrd_residual, "ctrd_worst_r": self.ctrd_worst_r,
                "ppq": self.ppq.to_dict()}


def _xi_tail(cp, k, r_end):
    d = _phi_tail_exponent(cp, r_end)
    if not d > 1.0:
        raise PreconditionError(f"Phi decays like r^-{d:.3g}; not integrable")
    return d, k * float(cp(np.array([r_end]))[0]) * r_end / (d - 1.0)


def global_barrier(spec, sampler=None, h0=H0_TABLE, decay_tol=DECAY_TOL,
                   raise_on_fail=True):
    """Assemble k, the xi / w / v tables and their certificates."""
    sampler = sampler or SphereSampler(N=spec.N)
    v = sufficient_condition(spec, sampler)
    if not v.convergent:
        raise PreconditionError(f"int_1^inf t phi(t) dt is {v.status}")
    s, r_s = sup_capital_phi(spec, sampler)
    k = k_from_sup(s, spec.a)
    cp = capital_phi_of(spec, sampler)
    ginv = g_inverse(spec.g)
    _, phi_env = weight_envelopes(spec, sampler, tabulated=True)

    # far end: where the power-law tail of xi drops below G(decay_tol) / 2
    target = 0.5 * float(ginv.G(np.array([decay_tol]))[0])
    r_end = R_FAR
    for _ in range(64):
        d, xi_end = _xi_tail(cp, k, r_end)
        if xi_end <= target:
            break
        grow = (xi_end / target) ** (1.0 / (d - 1.0))
        r_end *= 2.0 ** max(1, int(np.ceil(np.log2(grow))))
    else:
        raise DomainError("could not find a radius where w <= DECAY_TOL")

    r = table_nodes(r_end, h0)
    seg, Phi = _simpson_segments(cp, r)
    xi = np.empty(r.size)
    xi[-1] = xi_end
    xi[:-1] = xi_end + k * np.cumsum(seg[::-1])[::-1]
    w = ginv.invert(xi)
    gw1 = spec.g(w) + 1.0
    dw = -k * Phi * gw1

    # ctrd: |w'| by finite differences against k Phi (g(w) + 1)
    fd = _gradient_nonuniform(r, w)
    inner = slice(1, r.size - 1)
    res = np.abs(-fd[inner] - k * Phi[inner] * gw1[inner]) / (k * Phi[inner] * gw1[inner])
    ictrd = int(np.argmax(res))
    ctrd = float(res[ictrd])

    # M_v doubling until M_v > sup f(M_v w)
    M = 2.0
    while not M > float(np.max(spec.f(M * w))):
        M *= 2.0
        if M > M_MAX:
            raise ConstantSearchError("M_v search diverged")
    vv = M * w

    # ppq on the table: -Lap_h v >= phi (g(v) + f(v) + |Dv|^a)
    lap = kernels.radial_laplacian(r, vv, spec.N)
    dv = _gradient_nonuniform(r, vv)
    n = r.size - 1
    rhs = phi_env(r[:n]) * (spec.g(vv[:n]) + spec.f(vv[:n]) + np.abs(dv[:n]) ** spec.a)
    ppq = _margin(-lap[:n], rhs, r, np.arange(n))

    grid = RadialGrid(r, "geometric")
    tail = TailDescriptor(float(r_end), float(d), float(xi_end), float(w[-1]))
    gb = GlobalBarrier(k, float(M), float(s), float(r_s), RadialField(grid, xi, spec.N),
                       RadialField(grid, w, spec.N), RadialField(grid, vv, spec.N),
                       dw, tail, ctrd, float(r[inner][ictrd]), ppq, spec.g)
    if raise_on_fail:
        if ctrd > TOL_GRAD:
            raise CertificateError(f"gradient identity residual {ctrd:.3g} > {TOL_GRAD:g}",
                                   "ctrd", ictrd + 1, -ctrd)
        if not ppq.slack > 0:
            raise CertificateError(f"global inequality fails at r={ppq.worst_r:.6g}",
                                   "ppq", ppq.worst_index, ppq.slack)
    return gb
