"""Metric families: flat space, potential metrics and their biconformal relatives.

Every family here is U(n)-invariant and radial, of the form

    g = A(rho) * delta + E(rho) * M(x),   E = (B - A) / rho,
    M_ij = x_i x_j + (Jx)_i (Jx)_j,       rho = |x|^2,

so ``A`` is the metric on the complex-tangent directions of the spheres and
``B`` the metric on span{x, Jx}.  Such a metric is Kahler exactly when
``B = d(rho A)/d rho``.  Radial unit field: ``xi = x / (r sqrt(B))``; its
one-form is ``eta = sqrt(B) dr`` and ``k = 2 (1 + rho A'/A) / (r sqrt(B))``.

Because A and B are carried as jets, the metric's first and second coordinate
derivatives are exact, and the curvature is limited only by round-off.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .diffgeo_engine import Annulus, DistributionField, MetricField, radial_distribution
from .errors import ConstraintError, DomainError
from .radial import Jet, RadialScalar, log1p_potential
from .tensor_core import standard_complex_structure

DEFAULT_ANNULUS = Annulus(0.2, 5.0)


@dataclass(frozen=True)
class RadialMetric:
    """The pair (A, B) of a U(n)-invariant Hermitian metric."""

    A: RadialScalar
    B: RadialScalar
    n: int
    domain: Annulus = DEFAULT_ANNULUS
    name: str = "radial"
    kahler: bool = True
    extras: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_jets", functools.lru_cache(maxsize=4096)(self._compute_jets))

    def _compute_jets(self, rho: float):
        a = self.A.jet(rho)
        b = self.B.jet(rho)
        e = (b - a) / Jet.variable(rho)
        return a.c.copy(), e.c.copy()

    def jets(self, rho: float):
        return self._jets(float(rho))

    # ---- coordinate components
    def _pieces(self, p):
        p = np.asarray(p, float)
        J = standard_complex_structure(self.n)
        Jx = J @ p
        I = np.eye(p.size)
        M = np.outer(p, p) + np.outer(Jx, Jx)
        a, e = self.jets(p @ p)
        return p, J, Jx, I, M, a, e

    def value(self, p) -> np.ndarray:
        _, _, _, I, M, a, e = self._pieces(p)
        return a[0] * I + e[0] * M

    def derivative1(self, p) -> np.ndarray:
        x, J, Jx, I, M, a, e = self._pieces(p)
        dM = (np.einsum("ik,j->kij", I, x) + np.einsum("i,jk->kij", x, I)
              + np.einsum("ik,j->kij", J, Jx) + np.einsum("i,jk->kij", Jx, J))
        return (2 * a[1] * np.einsum("k,ij->kij", x, I) + 2 * e[1] * np.einsum("k,ij->kij", x, M)
                + e[0] * dM)

    def derivative2(self, p) -> np.ndarray:
        x, J, Jx, I, M, a, e = self._pieces(p)
        dM = (np.einsum("ik,j->kij", I, x) + np.einsum("i,jk->kij", x, I)
              + np.einsum("ik,j->kij", J, Jx) + np.einsum("i,jk->kij", Jx, J))
        ddM = (np.einsum("ik,jl->lkij", I, I) + np.einsum("il,jk->lkij", I, I)
               + np.einsum("ik,jl->lkij", J, J) + np.einsum("il,jk->lkij", J, J))
        xx = np.outer(x, x)
        return (4 * a[2] * np.einsum("kl,ij->lkij", xx, I) + 2 * a[1] * np.einsum("kl,ij->lkij", I, I)
                + 4 * e[2] * np.einsum("kl,ij->lkij", xx, M) + 2 * e[1] * np.einsum("kl,ij->lkij", I, M)
                + 2 * e[1] * np.einsum("k,lij->lkij", x, dM) + 2 * e[1] * np.einsum("l,kij->lkij", x, dM)
                + e[0] * ddM)

    def field(self) -> MetricField:
        return MetricField(self.n, self.domain, self.value, self.derivative1, self.derivative2,
                           name=self.name, kahler=self.kahler, meta={"radial": self})

    # ---- radial quantities
    def k(self) -> RadialScalar:
        """k = div_0(xi)/(n-1) of the radial structure, as a function of rho."""
        A, B = self.A, self.B
        r = RadialScalar.radius()
        return 2 * (1 + RadialScalar.rho() * A.derivative() / A) / (r * B.sqrt())

    def eta_scale(self) -> RadialScalar:
        """sqrt(B): eta = sqrt(B) dr."""
        return self.B.sqrt()

    def kahler_defect(self, rho: float) -> float:
        """|B - (rho A)'| relative to B; zero for Kahler metrics."""
        a = self.A.jet(rho)
        b = self.B.value(rho)
        return abs(b - (a[0] + rho * a[1])) / abs(b)

    def rho_grid(self, m: int = 200) -> np.ndarray:
        return np.linspace(self.domain.r_min, self.domain.r_max, m) ** 2


def radial_field(A: RadialScalar, B: RadialScalar, n: int, domain: Annulus = DEFAULT_ANNULUS,
                 name: str = "radial", kahler: bool = True, **extras) -> MetricField:
    if n < 2:
        raise DomainError("complex dimension n must be at least 2")
    return RadialMetric(A, B, n, domain, name, kahler, dict(extras)).field()


def radial_data(field_: MetricField) -> RadialMetric:
    """The (A, B) description behind a field built by this module."""
    try:
        return field_.meta["radial"]
    except KeyError:
        raise DomainError(f"field {field_.name!r} is not a radial family") from None


def canonical_distribution(field_: MetricField) -> DistributionField:
    """The radial unit field xi = x/(r sqrt(B)) of a radial family, with its exact Jacobian."""
    rm = field_.meta.get("radial")
    if rm is None:
        return radial_distribution(field_)
    phi = (RadialScalar.rho() * rm.B) ** -0.5

    def xi(p):
        p = np.asarray(p, float)
        return phi(float(p @ p)) * p

    def jac(p):
        p = np.asarray(p, float)
        j = phi.jet(float(p @ p))
        return j[0] * np.eye(p.size) + 2 * j[1] * np.outer(p, p)

    return DistributionField(field_, xi, "radial", jac)


# ---------------------------------------------------------------- flat and potential metrics

def flat_metric(n: int, domain: Annulus = DEFAULT_ANNULUS) -> MetricField:
    """Standard flat C^n on an annulus, with k = 2/r for the radial field."""
    one = RadialScalar.constant(1.0)
    return radial_field(one, one, n, domain, name="flat")


POTENTIALS: dict = {
    "linear": lambda: RadialScalar.polynomial([0.0, 0.5]),
    "quadratic": lambda: RadialScalar.polynomial([0.0, 1.0, 0.25]),
    "log1p": log1p_potential,
}


def potential_from_name(name: str, coeffs: Optional[Sequence[float]] = None) -> RadialScalar:
    """Registry lookup; ``polynomial`` takes coefficients of 1, rho, rho^2, ..."""
    if name == "polynomial":
        if not coeffs:
            raise ValueError("polynomial potential needs coefficients")
        return RadialScalar.polynomial(list(coeffs))
    try:
        return POTENTIALS[name]()
    except KeyError:
        raise ValueError(f"unknown potential {name!r}; choose from "
                         f"{sorted(list(POTENTIALS) + ['polynomial'])}") from None


def potential_metric(f: RadialScalar, n: int, domain: Annulus = DEFAULT_ANNULUS,
                     name: str | None = None) -> MetricField:
    """The Kahler metric with potential f(|z|^2): A = 2f', B = 2(f' + rho f'')."""
    fp = f.derivative()
    A = 2 * fp
    B = 2 * (fp + RadialScalar.rho() * fp.derivative())
    for rho in np.linspace(domain.r_min, domain.r_max, 400) ** 2:
        if not (A(rho) > 0 and B(rho) > 0):
            raise DomainError(f"potential {f.name} is not positive at r = {np.sqrt(rho):.6g} "
                              f"(f' = {A(rho) / 2:.3g}, f' + rho f'' = {B(rho) / 2:.3g})")
    return radial_field(A, B, n, domain, name=name or f"potential[{f.name}]", potential=f)


# ---------------------------------------------------------------- transformations

@dataclass(frozen=True)
class BiconformalPair:
    """Proper functions (u, v) of a biconformal transformation, with the source k and sqrt(B)."""

    u: RadialScalar
    v: RadialScalar
    k: RadialScalar
    eta_scale: RadialScalar = field(default_factory=lambda: RadialScalar.constant(1.0))

    def k_at(self, r: float) -> float:
        return self.k(r * r)

    def du_required(self, rho: float) -> float:
        """The u'(rho) forced by 2du = k (e^{2v} - 1) eta."""
        return 0.25 * self.k(rho) * np.expm1(2 * self.v(rho)) * self.eta_scale(rho) / np.sqrt(rho)

    def constraint_residual(self, rhos: Sequence[float]) -> float:
        worst = 0.0
        for rho in rhos:
            req = self.du_required(rho)
            worst = max(worst, abs(self.u.d1(rho) - req) / max(abs(req), 1.0))
        return worst

    def compose(self, other: "BiconformalPair") -> "BiconformalPair":
        """The single transform equal to ``self`` followed by ``other``."""
        return BiconformalPair(self.u + other.u, self.v + other.v, self.k, self.eta_scale)


def u_from_v(v: RadialScalar, k_at: RadialScalar, r0: float, r1: float,
             eta_scale: RadialScalar | None = None) -> RadialScalar:
    """Solve 2du = k (e^{2v} - 1) eta for u with u(r0) = 0.

    ``k_at`` is the source k as a function of rho and ``eta_scale`` is sqrt(B)
    (1 for the flat source), since eta = sqrt(B) dr.
    """
    scale = eta_scale if eta_scale is not None else RadialScalar.constant(1.0)
    for r in np.linspace(r0, r1, 64):
        kv = k_at(r * r)
        if not np.isfinite(kv) or kv == 0:
            raise DomainError(f"k must be finite and nonzero on [{r0}, {r1}]; k({r:.4g}) = {kv}")
    integrand = 0.25 * k_at * ((2 * v).exp() - 1) * scale / RadialScalar.radius()
    return RadialScalar.integral(integrand, r0 * r0, name=f"u[{v.name}]")


def make_pair(src: MetricField, v: RadialScalar) -> BiconformalPair:
    """The admissible pair (u, v) over the radial structure of ``src``."""
    rm = radial_data(src)
    k, s = rm.k(), rm.eta_scale()
    return BiconformalPair(u_from_v(v, k, rm.domain.r_min, rm.domain.r_max, s), v, k, s)


def biconformal_apply(src: MetricField, dist: DistributionField | None, pair: BiconformalPair,
                      tol: float = 1e-6) -> MetricField:
    """g' = e^{2u} (g + (e^{2v} - 1)(eta^2 + eta~^2)) for the radial structure of ``src``."""
    rm = radial_data(src)
    rhos = rm.rho_grid(64)
    dv = max(abs(pair.v.d1(r)) for r in rhos)
    if dv < 1e-14:
        raise ConstraintError("dv must be nonzero for a biconformal transformation")
    res = pair.constraint_residual(rhos)
    if res > tol:
        raise ConstraintError(f"biconformal constraint violated: residual {res:.3e} > {tol:.1e}")
    e2u = (2 * pair.u).exp()
    A = e2u * rm.A
    B = e2u * (2 * pair.v).exp() * rm.B
    return radial_field(A, B, rm.n, rm.domain, name=f"biconformal[{rm.name}]", kahler=rm.kahler,
                        source=src, pair=pair)


def dilatational_apply(src: MetricField, dist: DistributionField | None, q: RadialScalar) -> MetricField:
    """g* = g + (q - 1)(eta^2 + eta~^2); Hermitian, Kahler only when q is constant 1."""
    rm = radial_data(src)
    for rho in rm.rho_grid(200):
        if not q(rho) > 0:
            raise DomainError(f"dilatation factor q must be positive; q = {q(rho):.3g} at r = {np.sqrt(rho):.4g}")
    return radial_field(rm.A, q * rm.B, rm.n, rm.domain, name=f"dilatational[{rm.name}]",
                        kahler=False, source=src, q=q)


def biconformally_flat_normal_form(v: RadialScalar, n: int, domain: Annulus = DEFAULT_ANNULUS) -> MetricField:
    """g = e^{-2u} (g0 + (e^{-2v} - 1)(eta0^2 + eta0~^2)) over flat g0, with u(r_min) = 0.

    This is the flat metric moved by the pair (-u, -v), where d(-u)/d rho = (e^{-2v} - 1)/(2 rho).
    """
    flat = flat_metric(n, domain)
    pair = make_pair(flat, -v)
    g = biconformal_apply(flat, None, pair)
    rm = radial_data(g)
    return radial_field(rm.A, rm.B, n, domain, name=f"normal-form[{v.name}]", source=flat, pair=pair, v=v)


def random_normal_form_v(seed: int, domain: Annulus = DEFAULT_ANNULUS, degree: int = 3,
                         amplitude: float = 0.5) -> RadialScalar:
    """Seeded polynomial v(rho) with zero constant term, clamped so |v| <= amplitude on the domain."""
    rng = np.random.default_rng(seed)
    rmax = domain.r_max ** 2
    coeffs = [0.0] + [rng.uniform(-1, 1) * amplitude / (degree * rmax ** j) for j in range(1, degree + 1)]
    if abs(coeffs[1]) < 0.2 * amplitude / (degree * rmax):
        coeffs[1] = np.copysign(0.2 * amplitude / (degree * rmax), coeffs[1] or 1.0)
    return RadialScalar.polynomial(coeffs)


def potential_normal_form_v(f: RadialScalar) -> RadialScalar:
    """v with e^{-2v} = 1 + rho f''/f', the normal-form datum of a potential metric."""
    fp = f.derivative()
    return -0.5 * (1 + RadialScalar.rho() * fp.derivative() / fp).log()


def homothety_gap(g1: MetricField, g2: MetricField, points: Sequence[np.ndarray],
                  reference: np.ndarray) -> float:
    """Max relative componentwise gap between g1 and c * g2, with c fixed at ``reference``."""
    ref1, ref2 = g1.value(reference), g2.value(reference)
    c = ref1[0, 0] / ref2[0, 0]
    worst = 0.0
    for p in points:
        a, b = g1.value(p), c * g2.value(p)
        worst = max(worst, float(np.max(np.abs(a - b)) / np.max(np.abs(a))))
    return worst
