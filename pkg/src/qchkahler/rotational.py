"""Rotational hypersurfaces: meridian profiles, their Kahler chart, and closed forms.

A rotational hypersurface in R^{2n+1} is described by its meridian, arc length
``s``, parallel radius ``t(s) > 0`` and axial height ``q(s)`` with
``q'^2 + t'^2 = 1``.  The induced metric is the warped product
``ds^2 + t^2 g_sphere``.

Chart.  Put ``r = exp(L(s))`` with ``L' = 1/t``.  Then ``ds = t dr / r`` and the
induced metric becomes conformally flat, ``gbar = (t/r)^2 delta``, with the
hypersurface complex structure equal to the standard J0.  The complex
dilatational metric multiplies the span{xi, J xi} block by ``t'``:

    A = t^2 / r^2,   B = t' t^2 / r^2,

in the notation of :mod:`qchkahler.metric_families`.  Because ``dr/ds = r/t``
it satisfies ``B = d(rho A)/d rho``, so it is Kahler.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import mpmath
import numpy as np
from numpy.polynomial import chebyshev as C
from scipy.integrate import solve_ivp

from .diffgeo_engine import Annulus, MetricField, _connection, riemann
from .errors import DomainError
from .metric_families import radial_data, radial_field
from .qch_invariants import QchCoefficients
from .radial import Jet, RadialScalar, inverse_function_derivatives
from .tensor_core import adapted_frame, standard_complex_structure

_NAN = float("nan")


@dataclass(frozen=True)
class RotationalProfile:
    """Parallel radius t(s) with derivatives; ``t4`` is optional (NaN when absent)."""

    t: Callable[[float], float]
    t1: Callable[[float], float]
    t2: Callable[[float], float]
    t3: Callable[[float], float]
    s_domain: tuple
    name: str = "profile"
    t4: Optional[Callable[[float], float]] = None
    q: Optional[Callable[[float], float]] = None
    extras: dict = field(default_factory=dict, compare=False)

    def derivatives(self, s: float) -> list:
        return [self.t(s), self.t1(s), self.t2(s), self.t3(s), self.t4(s) if self.t4 else _NAN]

    def q1(self, s: float) -> float:
        """q' on the branch with q' <= 0."""
        return -math.sqrt(max(0.0, 1.0 - self.t1(s) ** 2))

    def contains(self, s: float) -> bool:
        lo, hi = self.s_domain
        return lo <= s <= hi

    def admissibility_violations(self, m: int = 400) -> list:
        """Sample points where t > 0, 0 < t' <= 1 fails."""
        lo, hi = self.s_domain
        bad = []
        for s in np.linspace(lo, hi, m):
            t, t1 = self.t(s), self.t1(s)
            if not (t > 0 and t1 > 0 and t1 <= 1 + 1e-12):
                bad.append((float(s), float(t), float(t1)))
        return bad

    def require_admissible(self) -> None:
        bad = self.admissibility_violations()
        if bad:
            s, t, t1 = bad[0]
            raise DomainError(f"profile {self.name} is not admissible at s = {s:.6g} (t = {t:.4g}, t' = {t1:.4g})")

    # ---- stock profiles
    @classmethod
    def sine(cls, s_domain=(0.1, 1.5)) -> "RotationalProfile":
        """t = sin s: the round sphere of radius 1."""
        return cls(math.sin, math.cos, lambda s: -math.sin(s), lambda s: -math.cos(s), tuple(s_domain),
                   "sin", t4=math.sin, q=math.cos)

    @classmethod
    def ramp(cls, s_domain=(-1.0, 1.0)) -> "RotationalProfile":
        """t = s/2 + 0.4 log cosh s + 2, whose slope runs smoothly between 0.1 and 0.9."""
        def sech2(s):
            return 1.0 / math.cosh(s) ** 2
        return cls(
            lambda s: 0.5 * s + 0.4 * math.log(math.cosh(s)) + 2.0,
            lambda s: 0.5 + 0.4 * math.tanh(s),
            lambda s: 0.4 * sech2(s),
            lambda s: -0.8 * sech2(s) * math.tanh(s),
            tuple(s_domain), "ramp",
            t4=lambda s: 1.6 * sech2(s) * math.tanh(s) ** 2 - 0.8 * sech2(s) ** 2,
        )

    @classmethod
    def linear(cls, t0: float = 1.0, s_domain=(0.0, 2.0)) -> "RotationalProfile":
        """t = s + t0: a hyperplane piece (t' = 1)."""
        return cls(lambda s: s + t0, lambda s: 1.0, lambda s: 0.0, lambda s: 0.0, tuple(s_domain),
                   "linear", t4=lambda s: 0.0, q=lambda s: 0.0)

    @classmethod
    def tangent_at_zero(cls, beta: float = 0.5, t0: float = 1.0, s_domain=(-0.8, 0.8)) -> "RotationalProfile":
        """t' = 1 - beta s^2: slope 1 only at s = 0."""
        return cls(lambda s: t0 + s - beta * s ** 3 / 3, lambda s: 1 - beta * s * s, lambda s: -2 * beta * s,
                   lambda s: -2 * beta, tuple(s_domain), "tangent", t4=lambda s: 0.0)

    @classmethod
    def constant_curvature(cls, a: float, s_domain: Optional[tuple] = None) -> "RotationalProfile":
        """Closed-form solution of the b = 0 equation: t = tanh(beta s)/beta with beta = sqrt(a)/2.

        Along it t' = 1 - a t^2/4, so the holomorphic curvature a is constant.
        """
        if a <= 0:
            raise DomainError("constant holomorphic curvature profile needs a > 0")
        be = math.sqrt(a) / 2

        def parts(s):
            T = math.tanh(be * s)
            return T, 1 - T * T
        return cls(
            lambda s: parts(s)[0] / be,
            lambda s: parts(s)[1],
            lambda s: -2 * be * parts(s)[0] * parts(s)[1],
            lambda s: -2 * be ** 2 * parts(s)[1] * (parts(s)[1] - 2 * parts(s)[0] ** 2),
            s_domain or (0.1 / be, 2.0 / be), f"const-hol[{a:g}]",
            t4=lambda s: (16 * be ** 3 * parts(s)[0] * parts(s)[1] ** 2
                          - 8 * be ** 3 * parts(s)[0] ** 3 * parts(s)[1]),
            extras={"a": a},
        )


# ---------------------------------------------------------------- chart

def _L_derivatives(d: Sequence[float]) -> list:
    """L', L'', L''', L'''' for L' = 1/t, given [t, t', t'', t''']."""
    t, t1, t2, t3 = d[:4]
    L3 = (2 * t1 * t1 - t * t2) / t ** 3
    L4 = (3 * t1 * t2 - t * t3) / t ** 3 - 3 * t1 * (2 * t1 * t1 - t * t2) / t ** 4
    return [1 / t, -t1 / t ** 2, L3, L4]


class RadialChart:
    """The chart r = exp(int_{s_ref}^s ds / t) in which J becomes the standard J0."""

    def __init__(self, profile: RotationalProfile, s_ref: Optional[float] = None, degree: int = 120):
        profile.require_admissible()
        self.profile = profile
        lo, hi = profile.s_domain
        self.s_ref = 0.5 * (lo + hi) if s_ref is None else float(s_ref)
        inv_t = C.Chebyshev.interpolate(np.vectorize(lambda s: 1.0 / profile.t(s)), degree, domain=[lo, hi])
        self._L = inv_t.integ(lbnd=self.s_ref)

    def L(self, s: float) -> float:
        return float(self._L(s))

    def rho(self, s: float) -> float:
        """Chart radius r(s) (the name follows the usual notation for this chart)."""
        return math.exp(self.L(s))

    r_of_s = rho

    def s_of_r(self, r: float) -> float:
        return self.s_of_lambda(math.log(r))

    def s_of_lambda(self, lam: float) -> float:
        lo, hi = self.profile.s_domain
        Llo, Lhi = self.L(lo), self.L(hi)
        if not (Llo - 1e-12 <= lam <= Lhi + 1e-12):
            raise DomainError(f"radius exp({lam:.6g}) is outside the chart of profile {self.profile.name}")
        s = lo + (hi - lo) * (lam - Llo) / (Lhi - Llo)
        for _ in range(60):
            step = (self.L(s) - lam) * self.profile.t(s)
            s = min(max(s - step, lo), hi)
            if abs(step) < 1e-15 * max(1.0, abs(s)):
                break
        return s

    def annulus(self, margin: float = 0.0) -> Annulus:
        lo, hi = self.profile.s_domain
        return Annulus(self.rho(lo) * (1 + margin), self.rho(hi) * (1 - margin))

    def s_jet(self, rho: float) -> Jet:
        """s as a function of rho = r^2, with four derivatives."""
        lam = Jet.variable(rho).log() * 0.5
        s = self.s_of_lambda(lam.value)
        outer = [s] + inverse_function_derivatives(_L_derivatives(self.profile.derivatives(s)))
        return lam.compose(outer)

    def t_jet(self, rho: float, order: int = 0) -> Jet:
        """t^{(order)}(s(rho)) as a jet in rho."""
        sj = self.s_jet(rho)
        d = self.profile.derivatives(sj.value)[order:] + [_NAN] * order
        return sj.compose(d)

    def point(self, s: float, direction: np.ndarray) -> np.ndarray:
        u = np.asarray(direction, float)
        return self.rho(s) * u / np.linalg.norm(u)


def _chart_scalars(chart: RadialChart):
    T = RadialScalar.from_jet(lambda r: chart.t_jet(r, 0), name="t")
    T1 = RadialScalar.from_jet(lambda r: chart.t_jet(r, 1), name="t'")
    return T, T1, RadialScalar.rho()


def rotational_metric(profile: RotationalProfile, n: int, chart: Optional[RadialChart] = None) -> MetricField:
    """The complex dilatational Kahler metric in the radial chart: A = t^2/r^2, B = t' t^2/r^2."""
    chart = chart or RadialChart(profile)
    T, T1, rho = _chart_scalars(chart)
    A = T * T / rho
    return radial_field(A, T1 * A, n, chart.annulus(), name=f"rotational[{profile.name}]",
                        chart=chart, profile=profile)


def induced_metric(profile: RotationalProfile, n: int, chart: Optional[RadialChart] = None) -> MetricField:
    """The induced warped-product metric gbar = (t/r)^2 delta; Hermitian but not Kahler unless t' = 1."""
    chart = chart or RadialChart(profile)
    T, _, rho = _chart_scalars(chart)
    A = T * T / rho
    return radial_field(A, A, n, chart.annulus(), name=f"induced[{profile.name}]", kahler=False,
                        chart=chart, profile=profile)


# ---------------------------------------------------------------- closed forms

def dilatational_coefficients(profile: RotationalProfile, s: float) -> QchCoefficients:
    """(a, b, c) of the dilatational metric from t, t', t'', t''' at s."""
    t, t1, t2, t3 = profile.derivatives(s)[:4]
    if t1 == 0:
        raise DomainError("t' = 0: the coefficients are undefined")
    a = 4 * (1 - t1) / t ** 2
    b = 8 * ((t1 - 1) / t ** 2 - t2 / (2 * t * t1))
    c = 4 * (1 - t1) / t ** 2 + 5 * t2 / (2 * t * t1) + (t2 * t2 - t1 * t3) / (2 * t1 ** 3)
    return QchCoefficients(a, b, c, k=2 * math.sqrt(t1) / t)


def warped_curvature(profile: RotationalProfile, s: float) -> tuple:
    """The two coefficients of the induced curvature, ``Rbar = K1 pibar + K2 Phibar``."""
    t, t1, t2 = profile.derivatives(s)[:3]
    return ((1 - t1 * t1) / t ** 2, -(1 - t1 * t1 + t * t2) / t ** 2)


def warped_curvature_tensor(profile: RotationalProfile, s: float, n: int) -> np.ndarray:
    """``K1 pibar + K2 Phibar`` in an orthonormal frame whose first vector is the meridian direction.

    ``pibar_abcd = d_bc d_ad - d_ac d_bd`` and
    ``Phibar_abcd = d_bc e_a e_d - d_ac e_b e_d + e_b e_c d_ad - e_a e_c d_bd`` with e the first covector.
    """
    K1, K2 = warped_curvature(profile, s)
    d = np.eye(2 * n)
    e = d[0]
    ein = np.einsum
    pib = ein("bc,ad->abcd", d, d) - ein("ac,bd->abcd", d, d)
    phib = (ein("bc,a,d->abcd", d, e, e) - ein("ac,b,d->abcd", d, e, e)
            + ein("b,c,ad->abcd", e, e, d) - ein("a,c,bd->abcd", e, e, d))
    return K1 * pib + K2 * phib


def warped_curvature_residual(profile: RotationalProfile, s: float, n: int = 3, direction=None,
                              field_: Optional[MetricField] = None) -> float:
    """Max gap between the numeric curvature of gbar and ``K1 pibar + K2 Phibar``, relative to max(|K1|, |K2|, 1)."""
    gbar = field_ or induced_metric(profile, n)
    chart = radial_data(gbar).extras["chart"]
    p = chart.point(s, _direction(n, direction))
    g = gbar.value(p)
    xi = p / math.sqrt(p @ g @ p)
    frame = adapted_frame(gbar.space(p), xi)
    R = riemann(gbar, p, frame).components
    K1, K2 = warped_curvature(profile, s)
    return float(np.max(np.abs(R - warped_curvature_tensor(profile, s, n)))) / max(abs(K1), abs(K2), 1.0)


def _direction(n: int, direction) -> np.ndarray:
    if direction is None:
        u = np.arange(1, 2 * n + 1, dtype=float)
        return u / np.linalg.norm(u)
    u = np.asarray(direction, float)
    return u / np.linalg.norm(u)


def nabla_J_identity_residual(profile: RotationalProfile, s: float, n: int = 3,
                              direction=None, J: Optional[np.ndarray] = None,
                              field_: Optional[MetricField] = None) -> float:
    """Max gap between nablabar J and its closed form, over orthonormal-frame components.

    The closed form is ``(nablabar_X J)Y = ((t'-1)/t) (gbar(X,Y) J xi - etat(Y) X - eta(Y) JX
    + gbar(JX,Y) xi)``.  Passing another complex structure ``J`` gives a negative control.
    """
    gbar = field_ or induced_metric(profile, n)
    chart = radial_data(gbar).extras["chart"]
    p = chart.point(s, _direction(n, direction))
    J = standard_complex_structure(n) if J is None else np.asarray(J, float)
    con = _connection(gbar, p)
    G, g = con.gamma, con.g
    lhs = np.einsum("ikm,mj->kij", G, J) - np.einsum("im,mkj->kij", J, G)     # [k, i, j]
    xi = p / math.sqrt(p @ g @ p)
    eta, etat = g @ xi, g @ (J @ xi)
    t, t1 = profile.t(s), profile.t1(s)
    I = np.eye(2 * n)
    rhs = (t1 - 1) / t * (np.einsum("kj,i->kij", g, J @ xi) - np.einsum("j,ik->kij", etat, I)
                          - np.einsum("j,ik->kij", eta, J) + np.einsum("kj,i->kij", J.T @ g, xi))
    F = adapted_frame(gbar.space(p), xi).F
    W = F.T @ g
    diff = np.einsum("kij,ka,ci,jb->acb", lhs - rhs, F, W, F)
    return float(np.max(np.abs(diff)))


# ---------------------------------------------------------------- constant holomorphic curvature

def meridian_y(a: float, x):
    """Axial height of the constant-curvature meridian on the (+) branch with y0 = 0."""
    S = np.sqrt(8 - a * np.asarray(x, float) ** 2)
    return (S + np.log((S - 2) / (S + 2))) / math.sqrt(a)


def meridian_x_range(a: float, margin: float = 1e-3) -> tuple:
    if a <= 0:
        raise DomainError(f"meridian needs a > 0, got {a}")
    xmax = 2 / math.sqrt(a)
    return margin * xmax, xmax * (1 - margin)


def constant_curvature_meridian(a: float, samples: int) -> list:
    """Sampled (x, y) on the meridian whose dilatational metric has constant holomorphic curvature a."""
    if samples < 2:
        raise DomainError("samples must be at least 2")
    lo, hi = meridian_x_range(a)
    xs = np.linspace(lo, hi, samples)
    return [(float(x), float(y)) for x, y in zip(xs, meridian_y(a, xs))]


def meridian_b_residuals(a: float, xs: Sequence[float], dps: int = 40) -> np.ndarray:
    """|t'' - 2t'(t'-1)/t| along the closed-form curve, with t'(s), t''(s) from high-precision derivatives.

    With x = t and y = q, ``t' = (1 + y_x^2)^{-1/2}`` and ``t'' = t' d(t')/dx``.
    """
    out = []
    with mpmath.workdps(dps):
        sa = mpmath.sqrt(a)

        def y(x):
            S = mpmath.sqrt(8 - a * x * x)
            return (S + mpmath.log((S - 2) / (S + 2))) / sa

        for x in xs:
            x = mpmath.mpf(x)
            y1 = mpmath.diff(y, x, 1)
            y2 = mpmath.diff(y, x, 2)
            tp = 1 / mpmath.sqrt(1 + y1 * y1)
            tpp = tp * (-y1 * y2 * (1 + y1 * y1) ** mpmath.mpf(-1.5))
            out.append(float(abs(tpp - 2 * tp * (tp - 1) / x)))
    return np.array(out)


def meridian_b_values(a: float, xs: Sequence[float]) -> np.ndarray:
    """b from the closed-form coefficients along the meridian (x = t)."""
    res = meridian_b_residuals(a, xs)
    xs = np.asarray(xs, float)
    t1 = 1 - a * xs ** 2 / 4
    # b = -(4 / (t t')) (t'' - 2t'(t'-1)/t), so |b| scales the ODE residual
    return 4 * res / (xs * t1)


def _b_zero_rhs(s, y):
    t, t1, _ = y
    return [t1, 2 * t1 * (t1 - 1) / t, -math.sqrt(max(0.0, 1 - t1 * t1))]


def _t3(t, t1, t2):
    return 2 * t2 * (2 * t1 - 1) / t - 2 * t1 * t1 * (t1 - 1) / t ** 2


def _t4(t, t1, t2, t3):
    dt = -2 * t2 * (2 * t1 - 1) / t ** 2 + 4 * t1 * t1 * (t1 - 1) / t ** 3
    dt1 = 4 * t2 / t - 2 * (3 * t1 * t1 - 2 * t1) / t ** 2
    dt2 = 2 * (2 * t1 - 1) / t
    return dt * t1 + dt1 * t2 + dt2 * t3


def solve_b_zero_ode(a_target: float, t0: float, s_span: tuple, s0: float = 0.0,
                     q0: float = 0.0, rtol: float = 1e-10, atol: float = 1e-12) -> RotationalProfile:
    """Integrate t'' = 2t'(t'-1)/t from t(s0) = t0, t'(s0) = 1 - a t0^2/4.

    The axial height q (with q' = -sqrt(1 - t'^2)) is integrated alongside so
    the curve can be compared with the closed-form meridian.
    """
    lo, hi = s_span
    if not lo <= s0 <= hi:
        raise DomainError("s0 must lie in s_span")
    if t0 <= 0:
        raise DomainError("t0 must be positive")
    t1_0 = 1 - a_target * t0 * t0 / 4
    if not 0 < t1_0 <= 1:
        raise DomainError(f"initial slope t' = {t1_0:.6g} is outside (0, 1]")

    def leave_low(s, y):
        return y[1]

    def leave_high(s, y):
        return 1 + 1e-9 - y[1]

    def leave_t(s, y):
        return y[0]

    for ev in (leave_low, leave_high, leave_t):
        ev.terminal = True
    sols = {}
    for end in (lo, hi):
        if end == s0:
            continue
        sol = solve_ivp(_b_zero_rhs, (s0, end), [t0, t1_0, q0], method="RK45", rtol=rtol, atol=atol,
                        dense_output=True, events=(leave_low, leave_high, leave_t))
        if sol.status == 1:
            which, s_exit = next((i, e[0]) for i, e in enumerate(sol.t_events) if len(e))
            what = ("t' reached 0", "t' exceeded 1", "t reached 0")[which]
            raise DomainError(f"solution left the admissible region ({what}) at s = {s_exit:.6g}")
        if not sol.success:
            raise DomainError(f"integration failed: {sol.message}")
        sols[end > s0] = sol.sol

    def state(s):
        return (sols[True] if s >= s0 and True in sols else sols[False])(s)

    def t2(s):
        t, t1, _ = state(s)
        return 2 * t1 * (t1 - 1) / t

    def t3(s):
        t, t1, _ = state(s)
        return _t3(t, t1, t2(s))

    def t4(s):
        t, t1, _ = state(s)
        tt2 = t2(s)
        return _t4(t, t1, tt2, _t3(t, t1, tt2))

    return RotationalProfile(lambda s: float(state(s)[0]), lambda s: float(state(s)[1]), t2, t3,
                             (lo, hi), f"ode[{a_target:g}]", t4=t4, q=lambda s: float(state(s)[2]),
                             extras={"a": a_target, "s0": s0})
