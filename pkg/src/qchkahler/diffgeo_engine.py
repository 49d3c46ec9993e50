"""Connection, curvature and distribution geometry of a metric field on a chart.

A :class:`MetricField` is a callable ``point -> g`` on an open domain of R^{2n}
with the standard complex structure.  When a family supplies analytic first and
second derivatives they are used directly; otherwise fourth-order central
differences stand in.  The distribution quantities follow the real-coordinate
conventions below (all in an orthonormal adapted frame ``F``):

* ``N[a, b] = (nabla_{F_a} eta)(F_b)`` and ``Nt[a, b] = (nabla_{F_a} eta~)(F_b)``;
* ``d eta(X, Y) = (nabla_X eta)(Y) - (nabla_Y eta)(X)``, i.e. ``N - N^T``;
* ``k = div_0(xi) / (n - 1)`` where ``div_0`` traces over the D-directions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DegenerateFrameError, DomainError
from .tensor_core import (
    AdaptedFrame,
    KahlerTensor4,
    TangentSpace,
    adapted_frame,
    frame_complex_structure,
    standard_complex_structure,
)

FD_STEP = np.finfo(float).eps ** 0.2
_FD_W = np.array([1.0, -8.0, 8.0, -1.0]) / 12.0
_FD_OFF = np.array([-2.0, -1.0, 1.0, 2.0])


def central_gradient(fn: Callable[[np.ndarray], np.ndarray], p: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order central differences; output has the point index first."""
    p = np.asarray(p, float)
    out = []
    for k in range(p.size):
        acc = 0.0
        for w, o in zip(_FD_W, _FD_OFF):
            q = p.copy()
            q[k] += o * h
            acc = acc + w * np.asarray(fn(q))
        out.append(acc / h)
    return np.array(out)


def directional_derivative(fn: Callable[[np.ndarray], float], p: np.ndarray, v: np.ndarray, h: float) -> float:
    """Fourth-order central difference of a scalar function along v."""
    p = np.asarray(p, float)
    return float(sum(w * fn(p + o * h * v) for w, o in zip(_FD_W, _FD_OFF)) / h)


# ---------------------------------------------------------------- domains

@dataclass(frozen=True)
class Annulus:
    """``r_min < |x| < r_max`` in R^{2n}."""

    r_min: float
    r_max: float

    def distance_to_boundary(self, p: np.ndarray) -> float:
        r = float(np.linalg.norm(p))
        return min(r - self.r_min, self.r_max - r)

    def contains(self, p: np.ndarray) -> bool:
        return self.distance_to_boundary(p) > 0


@dataclass(frozen=True)
class Box:
    """Axis-aligned open box ``lo < x_i < hi``."""

    lo: float
    hi: float

    def distance_to_boundary(self, p: np.ndarray) -> float:
        p = np.asarray(p)
        return float(min(np.min(p - self.lo), np.min(self.hi - p)))

    def contains(self, p: np.ndarray) -> bool:
        return self.distance_to_boundary(p) > 0


# ---------------------------------------------------------------- fields

@dataclass(frozen=True)
class MetricField:
    """A Hermitian metric on a chart domain.

    ``derivative1(p)[k, i, j] = d_k g_ij`` and ``derivative2(p)[l, k, i, j] = d_l d_k g_ij``.
    ``kahler`` is a construction-time claim, checked by :func:`kahler_form_residual`.
    """

    n: int
    domain: object
    value: Callable[[np.ndarray], np.ndarray]
    derivative1: Optional[Callable[[np.ndarray], np.ndarray]] = None
    derivative2: Optional[Callable[[np.ndarray], np.ndarray]] = None
    name: str = "metric"
    kahler: bool = True
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def dim(self) -> int:
        return 2 * self.n

    @property
    def J(self) -> np.ndarray:
        return standard_complex_structure(self.n)

    def space(self, p: np.ndarray) -> TangentSpace:
        return TangentSpace(self.n, self.J, self.value(np.asarray(p, float)))

    def fd_step(self, p: np.ndarray) -> float:
        return FD_STEP * max(1.0, float(np.linalg.norm(p)))

    def check_point(self, p: np.ndarray, stencil: float = 0.0) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        if p.shape != (self.dim,):
            raise DomainError(f"point must have {self.dim} coordinates")
        dist = self.domain.distance_to_boundary(p)
        if dist <= stencil:
            raise DomainError(f"point at distance {dist:.3g} from the domain boundary; "
                              f"need more than {stencil:.3g}")
        return p

    def dg(self, p: np.ndarray) -> np.ndarray:
        if self.derivative1 is not None:
            return self.derivative1(p)
        return central_gradient(self.value, p, self.fd_step(p))

    def ddg(self, p: np.ndarray) -> np.ndarray:
        if self.derivative2 is not None:
            return self.derivative2(p)
        h = self.fd_step(p)
        return central_gradient(lambda q: central_gradient(self.value, q, h), p, h)

    def stencil_width(self, p: np.ndarray, depth: int = 1) -> float:
        if self.derivative1 is not None and self.derivative2 is not None:
            return 0.0
        return 2 * depth * self.fd_step(p)

    def derivative_mismatch(self, p: np.ndarray) -> float:
        """Relative gap between the analytic first derivative and finite differences."""
        p = np.asarray(p, float)
        if self.derivative1 is None:
            return 0.0
        fd = central_gradient(self.value, p, self.fd_step(p))
        an = self.derivative1(p)
        return float(np.max(np.abs(fd - an)) / max(np.max(np.abs(an)), 1.0))


@dataclass(frozen=True)
class DistributionField:
    """A unit vector field xi on the domain of ``metric``; D-perp = span{xi, J xi}."""

    metric: MetricField
    xi: Callable[[np.ndarray], np.ndarray]
    name: str = "xi"
    jacobian: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def unit_residual(self, p: np.ndarray) -> float:
        x = self.xi(p)
        return abs(float(x @ self.metric.value(p) @ x) - 1.0)

    def frame(self, p: np.ndarray) -> AdaptedFrame:
        return adapted_frame(self.metric.space(p), self.xi(p))

    def eta(self, p: np.ndarray) -> np.ndarray:
        return self.metric.value(p) @ self.xi(p)

    def eta_tilde(self, p: np.ndarray) -> np.ndarray:
        return self.metric.value(p) @ (self.metric.J @ self.xi(p))

    def rotated(self, angle: Callable[[np.ndarray], float] | float, name: str | None = None) -> "DistributionField":
        """Rotate (xi, J xi) pointwise by ``angle``; the distribution D is unchanged."""
        J = self.metric.J
        ang = angle if callable(angle) else (lambda p, a=float(angle): a)

        def xi(p):
            x = self.xi(p)
            t = ang(p)
            return np.cos(t) * x + np.sin(t) * (J @ x)

        return DistributionField(self.metric, xi, name or f"{self.name}-rotated")


def radial_distribution(metric: MetricField) -> DistributionField:
    """xi = position vector normalised in the metric; the concentric-sphere structure."""
    def xi(p):
        p = np.asarray(p, float)
        return p / np.sqrt(p @ metric.value(p) @ p)
    return DistributionField(metric, xi, "radial")


def constant_distribution(metric: MetricField, axis: int = 0) -> DistributionField:
    """xi = a fixed coordinate axis, normalised."""
    def xi(p):
        v = np.zeros(metric.dim)
        v[axis] = 1.0
        return v / np.sqrt(v @ metric.value(p) @ v)
    return DistributionField(metric, xi, f"axis{axis}")


# ---------------------------------------------------------------- connection & curvature

@dataclass(frozen=True)
class ConnectionData:
    g: np.ndarray
    ginv: np.ndarray
    dg: np.ndarray
    gamma: np.ndarray        # gamma[l, i, j] = Gamma^l_ij
    gamma_low: np.ndarray    # gamma_low[m, i, j] = Gamma_{m, ij}


def _connection(field_: MetricField, p: np.ndarray) -> ConnectionData:
    g = field_.value(p)
    ginv = np.linalg.inv(g)
    dg = field_.dg(p)
    low = 0.5 * (np.einsum("ijm->mij", dg) + np.einsum("jim->mij", dg) - np.einsum("mij->mij", dg))
    return ConnectionData(g, ginv, dg, np.einsum("lm,mij->lij", ginv, low), low)


def christoffel(field_: MetricField, p: np.ndarray) -> np.ndarray:
    """Levi-Civita symbols ``Gamma[l, i, j] = Gamma^l_ij`` at p."""
    p = field_.check_point(p, field_.stencil_width(p))
    return _connection(field_, p).gamma


def metric_compatibility_residual(field_: MetricField, p: np.ndarray) -> float:
    """Relative size of ``d_k g_ij - Gamma^m_ki g_mj - Gamma^m_kj g_im``."""
    p = np.asarray(p, float)
    c = _connection(field_, p)
    r = c.dg - np.einsum("mki,mj->kij", c.gamma, c.g) - np.einsum("mkj,im->kij", c.gamma, c.g)
    return float(np.max(np.abs(r)) / max(np.max(np.abs(c.dg)), 1.0))


def riemann_coordinates(field_: MetricField, p: np.ndarray) -> np.ndarray:
    """Covariant curvature ``R[i, j, k, l] = g(R(d_i, d_j) d_k, d_l)`` at p."""
    p = field_.check_point(p, field_.stencil_width(p, depth=2))
    c = _connection(field_, p)
    ddg = field_.ddg(p)                                       # [k, a, i, j] = d_k d_a g_ij
    dlow = 0.5 * (np.einsum("kijm->kmij", ddg) + np.einsum("kjim->kmij", ddg) - np.einsum("kmij->kmij", ddg))
    dginv = -np.einsum("la,kab,bm->klm", c.ginv, c.dg, c.ginv)
    dgam = np.einsum("klm,mij->klij", dginv, c.gamma_low) + np.einsum("lm,kmij->klij", c.ginv, dlow)
    G = c.gamma
    rud = (np.einsum("iljk->ijkl", dgam) - np.einsum("jlik->ijkl", dgam)
           + np.einsum("lim,mjk->ijkl", G, G) - np.einsum("ljm,mik->ijkl", G, G))
    return np.einsum("ijkm,ml->ijkl", rud, c.g)


def riemann(field_: MetricField, p: np.ndarray, frame: AdaptedFrame | None = None) -> KahlerTensor4:
    """Curvature at p projected onto ``frame`` (default: frame of the standard axis)."""
    p = np.asarray(p, float)
    if frame is None:
        frame = adapted_frame(field_.space(p), np.eye(field_.dim)[0])
    return KahlerTensor4.from_coordinates(riemann_coordinates(field_, p), frame)


def covariant_derivative_riemann(field_: MetricField, p: np.ndarray) -> np.ndarray:
    """``nablaR[m, i, j, k, l] = (nabla_m R)_ijkl`` by differencing the analytic curvature."""
    p = np.asarray(p, float)
    h = field_.fd_step(p)
    field_.check_point(p, 2 * h)
    dR = central_gradient(lambda q: riemann_coordinates(field_, q), p, h)
    G = _connection(field_, p).gamma
    R = riemann_coordinates(field_, p)
    return (dR - np.einsum("smi,sjkl->mijkl", G, R) - np.einsum("smj,iskl->mijkl", G, R)
            - np.einsum("smk,ijsl->mijkl", G, R) - np.einsum("sml,ijks->mijkl", G, R))


def second_bianchi_residual(field_: MetricField, p: np.ndarray) -> float:
    """Relative size of the cyclic sum ``nabla_m R_ijkl + nabla_i R_jmkl + nabla_j R_mikl``."""
    nR = covariant_derivative_riemann(field_, p)
    cyc = nR + nR.transpose(1, 2, 0, 3, 4) + nR.transpose(2, 0, 1, 3, 4)
    return float(np.max(np.abs(cyc)) / max(np.max(np.abs(nR)), 1e-300))


def kahler_form_exterior_derivative(field_: MetricField, p: np.ndarray) -> np.ndarray:
    """``dOmega[k, i, j] = d_k Omega_ij + d_i Omega_jk + d_j Omega_ki`` with ``Omega = J^T g``."""
    p = np.asarray(p, float)
    dOm = np.einsum("mi,kmj->kij", field_.J, field_.dg(p))
    return dOm + dOm.transpose(1, 2, 0) + dOm.transpose(2, 0, 1)


def kahler_form_residual(field_: MetricField, p: np.ndarray) -> float:
    """max|dOmega| relative to max|dg|; zero for Kahler fields."""
    p = np.asarray(p, float)
    scale = max(float(np.max(np.abs(field_.dg(p)))), 1.0)
    return float(np.max(np.abs(kahler_form_exterior_derivative(field_, p))) / scale)


def omega_wedge(omega: np.ndarray, Om: np.ndarray) -> np.ndarray:
    """``(omega ^ Omega)[k, i, j] = omega_k Omega_ij + omega_i Omega_jk + omega_j Omega_ki``."""
    w = np.einsum("k,ij->kij", omega, Om)
    return w + w.transpose(1, 2, 0) + w.transpose(2, 0, 1)


def lee_form(field_: MetricField, p: np.ndarray) -> np.ndarray:
    """Coordinate covector of the Lee form: the omega with ``dOmega = omega ^ Omega`` when one exists."""
    p = field_.check_point(p, field_.stencil_width(p))
    g = field_.value(p)
    ginv = np.linalg.inv(g)
    Om = field_.J.T @ g
    Om_up = ginv @ Om @ ginv
    return np.einsum("kij,ij->k", kahler_form_exterior_derivative(field_, p), Om_up) / (2 * (field_.n - 1))


def w4_residual(field_: MetricField, p: np.ndarray) -> float:
    """max|dOmega - omega ^ Omega| relative to max|dOmega| (or 1)."""
    p = np.asarray(p, float)
    dOm = kahler_form_exterior_derivative(field_, p)
    Om = field_.J.T @ field_.value(p)
    r = dOm - omega_wedge(lee_form(field_, p), Om)
    return float(np.max(np.abs(r)) / max(np.max(np.abs(dOm)), 1.0))


# ---------------------------------------------------------------- distribution geometry

@dataclass(frozen=True)
class DistributionGeometry:
    """Covariant derivatives of eta and eta~ at a point, in an adapted frame."""

    frame: AdaptedFrame
    N: np.ndarray
    Nt: np.ndarray

    @property
    def n(self) -> int:
        return self.frame.n

    @property
    def div0_xi(self) -> float:
        return float(np.trace(self.N[2:, 2:]))

    @property
    def div0_jxi(self) -> float:
        return float(np.trace(self.Nt[2:, 2:]))

    @property
    def k(self) -> float:
        return self.div0_xi / (self.n - 1)

    @property
    def p(self) -> float:
        """g(nabla_xi xi, J xi)."""
        return float(self.N[0, 1])

    @property
    def p_star(self) -> float:
        """g(nabla_{J xi} J xi, xi)."""
        return float(self.Nt[1, 0])

    @property
    def theta(self) -> np.ndarray:
        th = self.N[0].copy()
        th[1] -= self.p
        return th

    @property
    def theta_star(self) -> np.ndarray:
        th = self.Nt[1].copy()
        th[0] -= self.p_star
        return th

    @property
    def d_eta(self) -> np.ndarray:
        return self.N - self.N.T

    @property
    def d_eta_tilde(self) -> np.ndarray:
        return self.Nt - self.Nt.T

    @property
    def omega(self) -> np.ndarray:
        """Kahler form in frame components."""
        return frame_complex_structure(self.n).T

    def closed_form_nabla_eta(self) -> np.ndarray:
        """``(k/2)(g - eta^2 - eta~^2) - p* eta~^2`` (plus the p term, zero for B0) in frame components."""
        E = np.zeros_like(self.N)
        E[2:, 2:] = 0.5 * self.k * np.eye(self.frame.dim - 2)
        E[1, 1] = -self.p_star
        E[0, 1] = self.p
        return E

    def b0_defect(self) -> np.ndarray:
        """``(nabla_x eta)(y) - (nabla_{Jx} eta)(Jy)`` on D."""
        Jf = frame_complex_structure(self.n)
        return (self.N - Jf.T @ self.N @ Jf)[2:, 2:]


def _xi_jacobian(dist: DistributionField, p: np.ndarray) -> np.ndarray:
    """``D[i, k] = d_k xi^i``, analytic when the field provides it."""
    if dist.jacobian is not None:
        return dist.jacobian(p)
    h = dist.metric.fd_step(p)
    return central_gradient(dist.xi, p, h).T


def nabla_eta(field_: MetricField, dist: DistributionField, p: np.ndarray,
              frame: AdaptedFrame | None = None) -> DistributionGeometry:
    """nabla eta and nabla eta~ at p, expressed in the adapted frame of ``dist``."""
    margin = 0.0 if dist.jacobian is not None else 2 * field_.fd_step(p)
    p = field_.check_point(p, margin + field_.stencil_width(p))
    c = _connection(field_, p)
    xi = dist.xi(p)
    J = field_.J
    dxi = _xi_jacobian(dist, p)
    D = dxi + np.einsum("ikm,m->ik", c.gamma, xi)                  # (nabla_k xi)^i
    Dt = J @ dxi + np.einsum("ikm,m->ik", c.gamma, J @ xi)         # (nabla_k J xi)^i
    frame = frame or adapted_frame(TangentSpace(field_.n, J, c.g), xi)
    F = frame.F
    N = F.T @ D.T @ c.g @ F
    Nt = F.T @ Dt.T @ c.g @ F
    return DistributionGeometry(frame, N, Nt)


@dataclass(frozen=True)
class Involutivity:
    D_involutive: bool
    Dperp_involutive: bool
    Delta_involutive: bool
    residuals: tuple

    def __iter__(self):
        return iter((self.D_involutive, self.Dperp_involutive, self.Delta_involutive))


def involutivity(field_: MetricField, dist: DistributionField, p: np.ndarray, tol: float = 1e-6) -> Involutivity:
    """Which of D, D-perp and Delta = ker(eta) are involutive at p.

    D needs d eta and d eta~ to vanish on D; D-perp needs theta + theta* = 0 on D;
    Delta needs d eta to vanish on ker(eta).
    """
    geo = nabla_eta(field_, dist, p)
    rD = max(np.max(np.abs(geo.d_eta[2:, 2:])), np.max(np.abs(geo.d_eta_tilde[2:, 2:])))
    rP = np.max(np.abs((geo.theta + geo.theta_star)[2:]))
    rL = np.max(np.abs(geo.d_eta[1:, 1:]))
    return Involutivity(bool(rD < tol), bool(rP < tol), bool(rL < tol), (float(rD), float(rP), float(rL)))


def principal_angle(geo: DistributionGeometry) -> float:
    d1, d2 = geo.div0_xi, geo.div0_jxi
    if d1 * d1 + d2 * d2 < 1e-12:
        raise DegenerateFrameError("no principal frame: both relative divergences vanish")
    return float(np.arctan2(d2, d1))


def principal_frame(field_: MetricField, dist: DistributionField, p: np.ndarray) -> AdaptedFrame:
    """Rotate (xi, J xi) so that div_0(J xi') = 0 and div_0(xi') >= 0."""
    geo = nabla_eta(field_, dist, p)
    return geo.frame.rotated(principal_angle(geo))


def principal_distribution(field_: MetricField, dist: DistributionField) -> DistributionField:
    """The field of principal frames as a distribution field (angle recomputed pointwise)."""
    return dist.rotated(lambda q: principal_angle(nabla_eta(field_, dist, q)), name=f"{dist.name}-principal")
