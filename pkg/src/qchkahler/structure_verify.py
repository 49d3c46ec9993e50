"""Residual reports for the structural statements about QCH Kahler metrics.

Each check evaluates one statement at a list of points and returns a
:class:`VerificationReport`.  A report passes exactly when every per-point
residual is at most its tolerance; failures are verdicts, never exceptions.
Exceptions are reserved for inputs outside a check's scope (a non-Kahler field
handed to a Kahler-only check, no principal frame, and so on).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Sequence

import numpy as np
from numpy.polynomial import chebyshev as C

from .diffgeo_engine import (
    DistributionField,
    DistributionGeometry,
    MetricField,
    _connection,
    directional_derivative,
    kahler_form_residual,
    nabla_eta,
    principal_distribution,
    riemann,
    riemann_coordinates,
)
from .errors import ConstraintError, DomainError, NotBiconformallyFlat
from .metric_families import (
    BiconformalPair,
    biconformal_apply,
    canonical_distribution,
    make_pair,
    radial_data,
)
from .qch_invariants import (
    Kind,
    QchCoefficients,
    invariant_tensor,
    qc_tensor,
    qch_decompose,
    ricci_deviation,
)
from .radial import RadialScalar
from .rotational import (
    RotationalProfile,
    _direction,
    dilatational_coefficients,
    induced_metric,
    rotational_metric,
)
from .tensor_core import kahler_symmetry_residual

DEFAULT_TOLERANCES = {
    "symmetry": 1e-6,        # relative to max|R|
    "qch": 1e-5,             # decomposition residual relative to max(|R|, 1)
    "ricci": 1e-4,
    "kahler": 1e-8,
    "b_distribution": 1e-6,
    "k_min": 1e-8,           # |k| below this means "k vanishes"
    "b0": 1e-4,
    "integrability": 1e-3,
    "qc_invariance": 1e-4,
    "cor57": 1e-5,
    "composition": 1e-8,
    "flatness": 1e-4,
    "dead_zone": 1e-8,
    "coefficients": 1e-4,
    "meridian_b": 1e-6,      # |b| along the closed-form meridian
}

DERIV_STEP = 1e-3


def tolerance(name: str, overrides: Optional[dict] = None) -> float:
    if overrides and name in overrides:
        return float(overrides[name])
    return DEFAULT_TOLERANCES[name]


@dataclass
class VerificationReport:
    """Per-point residuals of one checked statement."""

    name: str
    paper_ref: str
    points: list
    residuals: list
    tolerance: float
    values: list = field(default_factory=list)
    note: str = ""

    @property
    def verdict(self) -> str:
        ok = all(r <= self.tolerance for r in self.residuals)
        return "pass" if ok else "fail"

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    @property
    def max_residual(self) -> float:
        return max(self.residuals) if self.residuals else 0.0

    def to_dict(self) -> dict:
        d = {
            "name": self.name,
            "paper_ref": self.paper_ref,
            "points": [list(map(float, p)) for p in self.points],
            "residuals": [float(r) for r in self.residuals],
            "tolerance": float(self.tolerance),
            "verdict": self.verdict,
        }
        if self.values:
            d["values"] = self.values
        if self.note:
            d["note"] = self.note
        return d


def _pts(points) -> list:
    return [np.asarray(p, float) for p in points]


def _dim_note(field_: MetricField) -> str:
    return "out of stated dimension range (n < 3)" if field_.n < 3 else ""


def _geo_fn(field_: MetricField, dist: DistributionField, attr: str) -> Callable[[np.ndarray], float]:
    return lambda q: getattr(nabla_eta(field_, dist, q), attr)


def _step(p: np.ndarray) -> float:
    return DERIV_STEP * max(1.0, float(np.linalg.norm(p)))


def sample_points(field_: MetricField, count: int, seed: int = 0, margin: float = 0.05) -> list:
    """Seeded points at radii spread evenly over the interior of the field's annulus."""
    rng = np.random.default_rng(seed)
    dom = field_.domain
    lo, hi = dom.r_min * (1 + margin), dom.r_max * (1 - margin)
    radii = np.linspace(lo, hi, count) if count > 1 else [0.5 * (lo + hi)]
    out = []
    for r in radii:
        x = rng.normal(size=field_.dim)
        out.append(float(r) * x / np.linalg.norm(x))
    return out


def sample_arclengths(profile: RotationalProfile, count: int, margin: float = 0.1) -> np.ndarray:
    """Interior arc-length values of a profile, away from both ends."""
    lo, hi = profile.s_domain
    w = hi - lo
    return np.linspace(lo + margin * w, hi - margin * w, count)


# ---------------------------------------------------------------- pointwise curvature checks

def check_symmetries(field_: MetricField, dist: DistributionField, points, tol: Optional[float] = None) -> VerificationReport:
    """All Kahler curvature identities, relative to max|R|."""
    tol = tol if tol is not None else DEFAULT_TOLERANCES["symmetry"]
    res, vals = [], []
    for p in _pts(points):
        R = riemann(field_, p, dist.frame(p))
        nrm = R.norm()
        res.append(kahler_symmetry_residual(R) / max(nrm, 1e-300) if nrm > 1e-12 else kahler_symmetry_residual(R))
        vals.append({"norm": nrm})
    return VerificationReport("kahler_symmetries", "curvature identities of a Kahler manifold",
                              _pts(points), res, tol, vals)


def decompose_at(field_: MetricField, dist: DistributionField, p: np.ndarray) -> QchCoefficients:
    """(a, b, c) at p with k and p* attached."""
    p = np.asarray(p, float)
    geo = nabla_eta(field_, dist, p)
    R = riemann(field_, p, geo.frame)
    co = qch_decompose(R)
    return co.with_scalars(k=geo.k, p_star=geo.p_star, extras={"norm": R.norm()})


def check_qch(field_: MetricField, dist: DistributionField, points, tol: Optional[float] = None) -> VerificationReport:
    """R = a pi + b Phi + c Psi, residual relative to max(|R|, 1)."""
    tol = tol if tol is not None else DEFAULT_TOLERANCES["qch"]
    res, vals = [], []
    for p in _pts(points):
        co = decompose_at(field_, dist, p)
        res.append(co.residual / max(co.extras["norm"], 1.0))
        vals.append({"a": co.a, "b": co.b, "c": co.c})
    return VerificationReport("qch_decomposition", "QCH curvature form R = a pi + b Phi + c Psi",
                              _pts(points), res, tol, vals)


def check_ricci_identity(field_: MetricField, dist: DistributionField, points, tol: Optional[float] = None) -> VerificationReport:
    """Ricci tensor of a QCH metric, relative to max|rho|."""
    tol = tol if tol is not None else DEFAULT_TOLERANCES["ricci"]
    res = []
    for p in _pts(points):
        R = riemann(field_, p, dist.frame(p))
        dev = ricci_deviation(R)
        res.append(float(np.max(np.abs(dev)) / max(np.max(np.abs(R.ricci())), 1e-300)))
    return VerificationReport("ricci_identity", "Ricci tensor of a QCH manifold", _pts(points), res, tol)


# ---------------------------------------------------------------- B and B0 distributions

def b_distribution_residuals(geo: DistributionGeometry) -> dict:
    """Real-form conditions for a B-distribution; each value should vanish."""
    Om = geo.omega
    return {
        "delta_involutive": float(np.max(np.abs(geo.d_eta[1:, 1:]))),
        "dperp_involutive": float(np.max(np.abs((geo.theta + geo.theta_star)[2:]))),
        "d_eta_tilde_on_D": float(np.max(np.abs(geo.d_eta_tilde[2:, 2:] - geo.k * Om[2:, 2:]))),
    }


def check_b_distribution(field_: MetricField, dist: DistributionField, points,
                         tol: Optional[float] = None, k_min: Optional[float] = None) -> VerificationReport:
    """Delta and D-perp involutive, and d eta~ = k Omega on D with k != 0.

    A point where |k| < ``k_min`` gets residual 1 (the last condition fails).
    """
    tol = tol if tol is not None else DEFAULT_TOLERANCES["b_distribution"]
    k_min = k_min if k_min is not None else DEFAULT_TOLERANCES["k_min"]
    res, vals = [], []
    for p in _pts(points):
        geo = nabla_eta(field_, dist, p)
        parts = b_distribution_residuals(geo)
        scale = max(1.0, abs(geo.k))
        r = max(parts.values()) / scale
        if abs(geo.k) < k_min:
            r = max(r, 1.0)
        res.append(r)
        vals.append({"k": geo.k, **parts})
    return VerificationReport("b_distribution", "B-distribution conditions", _pts(points), res, tol, vals)


def b0_residuals(field_: MetricField, dist: DistributionField, p: np.ndarray) -> dict:
    """All B0 conditions and their consequences at p, each scaled to be dimensionless."""
    p = np.asarray(p, float)
    geo = nabla_eta(field_, dist, p)
    k, ps = geo.k, geo.p_star
    h = _step(p)
    F = geo.frame.F
    kfun = _geo_fn(field_, dist, "k")
    dk = np.array([directional_derivative(kfun, p, F[:, a], h) for a in range(F.shape[1])])
    xi_k = dk[0]

    def hfun(q):
        gq = nabla_eta(field_, dist, q)
        return gq.k ** 2 + 2 * gq.k * gq.p_star

    H = k * k + 2 * k * ps
    xi_H = directional_derivative(hfun, p, F[:, 0], h)
    R = riemann(field_, p, geo.frame)
    rho = R.ricci()
    n = field_.n
    sigma_model = xi_H / (2 * k) + (n + 1) / 2 * H
    kappa_model = xi_H / (2 * k) + H
    sigma, kappa = rho[0, 0], R[0, 1, 1, 0]
    # R(X,Y)xi with X, Y frame vectors: component d of R(F_a, F_b) xi is R[a, b, 0, d]
    Phi, Psi = invariant_tensor(Kind.PHI, n).components, invariant_tensor(Kind.PSI, n).components
    model14 = 4 * (sigma - kappa) / (n - 1) * (Phi[:, :, 0, :] - Psi[:, :, 0, :]) + kappa * Psi[:, :, 0, :]
    lin = max(abs(k), 1e-300)
    quad = max(k * k, abs(H), 1e-300)
    curv = max(R.norm(), quad)
    dk_expected = np.zeros_like(dk)
    dk_expected[0] = -k * (k + ps)
    return {
        "k": k,
        "p_star": ps,
        "b_distribution": max(b_distribution_residuals(geo).values()) / lin,
        "b0_defect": float(np.max(np.abs(geo.b0_defect()))) / lin,
        "theta": float(np.max(np.abs(geo.theta))) / lin,
        "p": abs(geo.p) / lin,
        "nabla_eta_closed_form": float(np.max(np.abs(geo.N - geo.closed_form_nabla_eta()))) / lin,
        "dk": float(np.max(np.abs(dk - dk_expected))) / quad,
        "p_star_relation": abs(ps + (xi_k + k * k) / k) / lin,
        "sigma": abs(sigma - sigma_model) / curv,
        "kappa": abs(kappa - kappa_model) / curv,
        "mixed": abs(R[2, 0, 0, 2] - H / 4) / curv,
        "R_xi": float(np.max(np.abs(R.components[:, :, 0, :] - model14))) / curv,
    }


B0_KEYS = ("b_distribution", "b0_defect", "theta", "p", "nabla_eta_closed_form", "dk",
           "p_star_relation", "sigma", "kappa", "mixed", "R_xi")


def check_b0_distribution(field_: MetricField, dist: DistributionField, points,
                          tol: Optional[float] = None) -> VerificationReport:
    """B0 conditions plus the closed form of nabla eta and the curvature relations they imply.

    Only Kahler fields are accepted.
    """
    tol = tol if tol is not None else DEFAULT_TOLERANCES["b0"]
    pts = _pts(points)
    for p in pts:
        kr = kahler_form_residual(field_, p)
        if kr > DEFAULT_TOLERANCES["kahler"]:
            raise DomainError(f"field {field_.name!r} is not Kahler (dOmega residual {kr:.2e}); "
                              "the B0 analysis does not apply")
    res, vals = [], []
    for p in pts:
        parts = b0_residuals(field_, dist, p)
        res.append(max(parts[k] for k in B0_KEYS))
        vals.append(parts)
    return VerificationReport("b0_distribution", "B0-distribution conditions and consequences",
                              pts, res, tol, vals, note=_dim_note(field_))


# ---------------------------------------------------------------- integrability

def check_integrability(field_: MetricField, dist: DistributionField, points,
                        tol: Optional[float] = None) -> VerificationReport:
    """The reduced integrability system in the principal frame.

    Checks xi(a) = b div0(xi) / (2(n-1)), xi(b) = (b + 4c) div0(xi) / (n-1), that the
    derivatives of a and b along J xi and D vanish, that c has no D-derivative, and
    theta = theta* = 0 on D.  Derivatives are fourth-order differences of the
    pointwise decomposition.
    """
    tol = tol if tol is not None else DEFAULT_TOLERANCES["integrability"]
    pdist = principal_distribution(field_, dist)
    n = field_.n

    def coeff(q, which):
        return getattr(qch_decompose(riemann(field_, q, dist.frame(q))), which)

    res, vals = [], []
    for p in _pts(points):
        geo = nabla_eta(field_, pdist, p)
        F = geo.frame.F
        h = _step(p)
        d = {w: np.array([directional_derivative(lambda q: coeff(q, w), p, F[:, i], h)
                          for i in range(F.shape[1])]) for w in "abc"}
        co = qch_decompose(riemann(field_, p, geo.frame))
        div = geo.div0_xi
        da_model = co.b * div / (2 * (n - 1))
        db_model = (co.b + 4 * co.c) * div / (n - 1)
        scale = max(abs(d["a"][0]), abs(d["b"][0]), abs(d["c"][0]),
                    (abs(co.a) + abs(co.b) + abs(co.c)) * abs(div), 1e-300)
        parts = {
            "xi_a": abs(d["a"][0] - da_model) / max(abs(da_model), abs(d["a"][0]), scale * 1e-3),
            "xi_b": abs(d["b"][0] - db_model) / max(abs(db_model), abs(d["b"][0]), scale * 1e-3),
            "a_transverse": float(np.max(np.abs(d["a"][1:]))) / scale,
            "b_transverse": float(np.max(np.abs(d["b"][1:]))) / scale,
            "c_on_D": float(np.max(np.abs(d["c"][2:]))) / scale,
            "theta": float(np.max(np.abs(geo.theta[2:]))) / max(abs(div), 1e-300),
            "theta_star": float(np.max(np.abs(geo.theta_star[2:]))) / max(abs(div), 1e-300),
        }
        res.append(max(parts.values()))
        vals.append({**parts, "xi(a)": float(d["a"][0]), "model_xi(a)": da_model,
                     "xi(b)": float(d["b"][0]), "model_xi(b)": db_model, "div0_xi": div})
    return VerificationReport("integrability", "reduced integrability system in a principal frame",
                              _pts(points), res, tol, vals, note=_dim_note(field_))


# ---------------------------------------------------------------- biconformal invariance

def _coordinate_ricci_deviation(R) -> np.ndarray:
    W = R.frame.coframe
    return W.T @ ricci_deviation(R) @ W


def check_qc_invariance(src: MetricField, transformed: MetricField, pair: BiconformalPair, points,
                        tol: Optional[float] = None, tol_cor: Optional[float] = None) -> VerificationReport:
    """QC(R') = QC(R), the Ricci-deviation invariant, and a' + k'^2 = e^{-2u}(a + k^2)."""
    tol = tol if tol is not None else DEFAULT_TOLERANCES["qc_invariance"]
    tol_cor = tol_cor if tol_cor is not None else DEFAULT_TOLERANCES["cor57"]
    if src.domain != transformed.domain:
        raise DomainError("source and transformed fields live on different domains")
    d0, d1 = canonical_distribution(src), canonical_distribution(transformed)
    res, vals = [], []
    for p in _pts(points):
        g0, g1 = nabla_eta(src, d0, p), nabla_eta(transformed, d1, p)
        R0, R1 = riemann(src, p, g0.frame), riemann(transformed, p, g1.frame)
        Q0, Q1 = qc_tensor(R0), qc_tensor(R1)
        Rc0 = np.einsum("ijkm,ml->ijkl", riemann_coordinates(src, p), np.linalg.inv(src.value(p)))
        Rc1 = np.einsum("ijkm,ml->ijkl", riemann_coordinates(transformed, p), np.linalg.inv(transformed.value(p)))
        qscale = max(np.max(np.abs(Rc0)), np.max(np.abs(Rc1)), 1e-300)
        qc_gap = float(np.max(np.abs(Q1 - Q0))) / qscale
        rd0, rd1 = _coordinate_ricci_deviation(R0), _coordinate_ricci_deviation(R1)
        ric0 = R0.frame.coframe.T @ R0.ricci() @ R0.frame.coframe
        ric1 = R1.frame.coframe.T @ R1.ricci() @ R1.frame.coframe
        ric_scale = max(np.max(np.abs(ric0)), np.max(np.abs(ric1)), 1e-300)
        ric_gap = float(np.max(np.abs(rd1 - rd0))) / ric_scale
        a0, a1 = qch_decompose(R0).a, qch_decompose(R1).a
        rho = float(p @ p)
        lhs = a1 + g1.k ** 2
        rhs = math.exp(-2 * pair.u(rho)) * (a0 + g0.k ** 2)
        cor_gap = abs(lhs - rhs) / max(abs(rhs), 1.0)
        u, v = pair.u.jet(rho), pair.v.jet(rho)
        k_model = math.exp(v[0] - u[0]) * g0.k
        k_gap = abs(g1.k - k_model) / max(abs(k_model), 1e-300)
        # xi(f) = f'(rho) * xi(rho) and xi(rho) = 2 r / sqrt(B) for the source
        xi_rho = 2 * math.sqrt(rho) / pair.eta_scale(rho)
        ps_model = math.exp(-(u[0] + v[0])) * (g0.p_star - (u[1] + v[1]) * xi_rho)
        ps_gap = abs(g1.p_star - ps_model) / max(abs(g1.k), abs(ps_model), 1e-300)
        # scale the corollary residual so a single tolerance decides the verdict
        res.append(max(qc_gap, ric_gap, k_gap, ps_gap, cor_gap * tol / tol_cor))
        vals.append({"qc_gap": qc_gap, "ricci_gap": ric_gap, "cor_gap": cor_gap, "k_gap": k_gap,
                     "p_star_gap": ps_gap, "k": g0.k, "k_prime": g1.k, "k_prime_formula": k_model,
                     "a_plus_k2": a0 + g0.k ** 2, "a_plus_k2_prime": lhs,
                     "p_star": g0.p_star, "p_star_prime": g1.p_star, "p_star_prime_formula": ps_model})
    return VerificationReport("qc_invariance", "biconformal invariance of QC(R)", _pts(points), res, tol, vals)


def composition_gap(src: MetricField, first: BiconformalPair, second: BiconformalPair, points) -> float:
    """max relative gap between (second after first) and the summed single transform."""
    step1 = biconformal_apply(src, None, first)
    two = biconformal_apply(step1, None, second)
    one = biconformal_apply(src, None, first.compose(second), tol=1e-6)
    worst = 0.0
    for p in _pts(points):
        A, B = two.value(p), one.value(p)
        worst = max(worst, float(np.max(np.abs(A - B)) / np.max(np.abs(A))))
    return worst


# ---------------------------------------------------------------- classification and flattening

class Classification(str, Enum):
    POSITIVE = "Positive"
    ZERO = "Zero"
    NEGATIVE = "Negative"


def classify_value(a: float, k: float, dead_zone: Optional[float] = None) -> Classification:
    dz = dead_zone if dead_zone is not None else DEFAULT_TOLERANCES["dead_zone"]
    s = a + k * k
    if abs(s) < dz:
        return Classification.ZERO
    return Classification.POSITIVE if s > 0 else Classification.NEGATIVE


def classify(field_: MetricField, dist: DistributionField, p, dead_zone: Optional[float] = None) -> Classification:
    """Sign class of a + k^2 at p."""
    co = decompose_at(field_, dist, p)
    return classify_value(co.a, co.k, dead_zone)


def _ray_direction(n: int) -> np.ndarray:
    u = np.ones(2 * n)
    return u / np.linalg.norm(u)


def fitted_a(field_: MetricField, dist: DistributionField, degree: int = 48,
             qc_tol: Optional[float] = None) -> RadialScalar:
    """a(r) along a ray as a Chebyshev series in ln r, with QCH checked at every node."""
    rm = radial_data(field_)
    qc_tol = qc_tol if qc_tol is not None else DEFAULT_TOLERANCES["qch"]
    u = _ray_direction(field_.n)
    lo, hi = math.log(rm.domain.r_min), math.log(rm.domain.r_max)

    def a_at(x):
        out = []
        for xx in np.atleast_1d(x):
            p = math.exp(xx) * u
            co = decompose_at(field_, dist, p)
            if co.residual > qc_tol * max(co.extras["norm"], 1.0):
                raise NotBiconformallyFlat(f"QC(R) does not vanish at r = {math.exp(xx):.4g} "
                                           f"(residual {co.residual:.2e})")
            s = co.a + co.k ** 2
            if s <= 0:
                raise NotBiconformallyFlat(f"not biconformally flat: a + k^2 = {s:.3e} at r = {math.exp(xx):.4g}")
            out.append(co.a)
        return np.array(out)

    series = C.Chebyshev.interpolate(a_at, degree, domain=[lo, hi])
    return RadialScalar.log_radius_chebyshev(series, name="a_fit")


def flatten(field_: MetricField, dist: Optional[DistributionField] = None, points=None,
            tol: Optional[float] = None, degree: int = 48):
    """Biconformal pair that makes a QCH radial metric flat, and the flatness report.

    v = (1/2) ln((a + k^2)/k^2) and 2du = k (e^{2v} - 1) eta with eta = sqrt(B) dr,
    which is the same as 2du = (a/k) ds.  The report lists max|R'| / max|R| per point.
    """
    tol = tol if tol is not None else DEFAULT_TOLERANCES["flatness"]
    dist = dist or canonical_distribution(field_)
    rm = radial_data(field_)
    a = fitted_a(field_, dist, degree)
    probe = np.linspace(math.log(rm.domain.r_min), math.log(rm.domain.r_max), 33)
    if max(abs(a(math.exp(2 * x))) for x in probe) < 1e-10:
        raise ConstraintError("already flat: a vanishes, so v = 0 and dv = 0")
    k = rm.k()
    v = 0.5 * ((a + k * k) / (k * k)).log()
    pair = make_pair(field_, v)
    flat = biconformal_apply(field_, dist, pair)
    if points is None:
        rng = np.random.default_rng(0)
        points = []
        for r in np.linspace(rm.domain.r_min, rm.domain.r_max, 12)[1:-1]:
            x = rng.normal(size=field_.dim)
            points.append(r * x / np.linalg.norm(x))
    res, vals = [], []
    for p in _pts(points):
        R = riemann_coordinates(field_, p)
        R1 = riemann_coordinates(flat, p)
        res.append(float(np.max(np.abs(R1)) / max(np.max(np.abs(R)), 1e-300)))
        vals.append({"norm_R": float(np.max(np.abs(R))), "norm_R_flat": float(np.max(np.abs(R1)))})
    report = VerificationReport("flatness", "biconformal flattening of a QCH metric", _pts(points), res, tol, vals)
    return pair, report


def check_coefficients(profile: RotationalProfile, n: int, s_values, seed: int = 0,
                       tol: Optional[float] = None, field_: Optional[MetricField] = None) -> VerificationReport:
    """Numeric (a, b, c) of the dilatational metric against its closed form in the derivatives of t.

    Each arc length is sampled along a seeded random direction; residuals are
    relative to max(|a|, |b|, |c|, 1) of the closed form.
    """
    tol = tol if tol is not None else DEFAULT_TOLERANCES["coefficients"]
    g = field_ or rotational_metric(profile, n)
    chart = radial_data(g).extras["chart"]
    dist = canonical_distribution(g)
    rng = np.random.default_rng(seed)
    pts, res, vals = [], [], []
    for s in s_values:
        p = chart.point(float(s), rng.normal(size=g.dim))
        num = decompose_at(g, dist, p)
        ref = dilatational_coefficients(profile, float(s))
        scale = max(1.0, *map(abs, ref.as_tuple()))
        gap = max(abs(x - y) for x, y in zip(num.as_tuple(), ref.as_tuple())) / scale
        pts.append(p)
        res.append(gap)
        vals.append({"s": float(s), "a": num.a, "b": num.b, "c": num.c,
                     "a_closed": ref.a, "b_closed": ref.b, "c_closed": ref.c,
                     "k": num.k, "k_closed": ref.k})
    return VerificationReport("coefficients", "closed-form (a, b, c) of the dilatational metric",
                              pts, res, tol, vals)


def five_conditions(profile, s: float, n: int = 3) -> dict:
    """At a point of a rotational hypersurface: g - gbar, nablabar J, Rbar and R (all max-norms)."""
    g = rotational_metric(profile, n)
    chart = radial_data(g).extras["chart"]
    gb = induced_metric(profile, n, chart)
    p = chart.point(s, _direction(n, None))
    G = _connection(gb, p).gamma
    J = gb.J
    nJ = np.einsum("ikm,mj->kij", G, J) - np.einsum("im,mkj->kij", J, G)
    return {
        "g_minus_gbar": float(np.max(np.abs(g.value(p) - gb.value(p)))),
        "nabla_J": float(np.max(np.abs(nJ))),
        "Rbar": float(np.max(np.abs(riemann_coordinates(gb, p)))),
        "R": float(np.max(np.abs(riemann_coordinates(g, p)))),
    }
