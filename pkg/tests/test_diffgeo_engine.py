import math

import numpy as np
import pytest

from qchkahler.diffgeo_engine import (
    Annulus,
    Box,
    MetricField,
    christoffel,
    constant_distribution,
    involutivity,
    kahler_form_residual,
    lee_form,
    metric_compatibility_residual,
    nabla_eta,
    principal_angle,
    principal_distribution,
    principal_frame,
    radial_distribution,
    riemann,
    riemann_coordinates,
    second_bianchi_residual,
    w4_residual,
)
from qchkahler.errors import DegenerateFrameError, DomainError
from qchkahler.metric_families import canonical_distribution, dilatational_apply
from qchkahler.qch_invariants import qch_decompose
from qchkahler.radial import RadialScalar
from qchkahler.tensor_core import kahler_symmetry_residual

from conftest import unit_points


def fd_only(field_):
    """The same metric with analytic derivatives stripped, forcing finite differences."""
    return MetricField(field_.n, field_.domain, field_.value, name=field_.name + "-fd")


class TestDomains:
    def test_annulus(self):
        a = Annulus(0.5, 2.0)
        assert a.contains(np.array([1.0, 0, 0, 0]))
        assert not a.contains(np.array([0.1, 0, 0, 0]))
        assert a.distance_to_boundary(np.array([1.5, 0, 0, 0])) == pytest.approx(0.5)

    def test_box(self):
        b = Box(-1.0, 1.0)
        assert b.contains(np.zeros(4))
        assert b.distance_to_boundary(np.array([0.9, 0, 0, 0])) == pytest.approx(0.1)

    def test_point_outside_domain(self, flat3):
        with pytest.raises(DomainError):
            riemann_coordinates(flat3, np.array([0.1, 0, 0, 0, 0, 0]))

    def test_wrong_point_shape(self, flat3):
        with pytest.raises(DomainError):
            christoffel(flat3, np.ones(4))


class TestConnection:
    def test_flat_christoffel_vanishes(self, flat3):
        assert np.max(np.abs(christoffel(flat3, unit_points([1.0])[0]))) == 0.0

    @pytest.mark.parametrize("p", unit_points([0.4, 1.3, 3.0], seed=2))
    def test_metric_compatibility(self, fs3, p):
        assert metric_compatibility_residual(fs3, p) < 1e-14

    def test_analytic_derivatives_match_differences(self, fs3):
        for p in unit_points([0.5, 2.0, 4.0], seed=3):
            assert fs3.derivative_mismatch(p) < 1e-9


class TestCurvature:
    def test_flat_curvature_vanishes(self, flat3):
        assert np.max(np.abs(riemann_coordinates(flat3, unit_points([2.0])[0]))) == 0.0

    @pytest.mark.parametrize("p", unit_points([0.3, 1.0, 2.5, 4.5], seed=4))
    def test_fubini_study_has_constant_holomorphic_curvature(self, fs3, p):
        co = qch_decompose(riemann(fs3, p, canonical_distribution(fs3).frame(p)))
        assert co.as_tuple() == pytest.approx((2.0, 0.0, 0.0), abs=1e-11)

    def test_finite_difference_fallback_agrees(self, fs3):
        p = unit_points([1.1], seed=5)[0]
        exact = riemann_coordinates(fs3, p)
        approx = riemann_coordinates(fd_only(fs3), p)
        assert np.max(np.abs(exact - approx)) < 1e-5 * np.max(np.abs(exact))

    def test_curvature_is_kahler(self, quad3):
        for p in unit_points([0.5, 3.0], seed=6):
            R = riemann(quad3, p)
            assert kahler_symmetry_residual(R) < 1e-12 * R.norm()

    def test_second_bianchi(self, quad3):
        assert second_bianchi_residual(quad3, unit_points([1.5], seed=7)[0]) < 1e-7


class TestKahlerForm:
    def test_potential_metric_is_kahler(self, fs3):
        for p in unit_points([0.5, 2.0], seed=8):
            assert kahler_form_residual(fs3, p) < 1e-14

    def test_dilatation_breaks_kahler_but_stays_w4(self, fs3):
        g = dilatational_apply(fs3, None, RadialScalar.constant(2.0))
        p = unit_points([1.2], seed=9)[0]
        assert kahler_form_residual(g, p) > 1e-2
        # dOmega picks up (q - 1) eta ^ d eta~, which is a multiple of eta ^ Omega
        assert w4_residual(g, p) < 1e-13
        omega = lee_form(g, p)
        eta = canonical_distribution(g).eta(p)
        assert np.linalg.norm(omega) > 1e-2
        assert np.linalg.norm(omega - (omega @ p) / (eta @ p) * eta) < 1e-12

    def test_non_w4_metric(self):
        # in complex dimension 3, scaling one complex line by a non-holomorphic
        # function is not locally conformal Kahler (in dimension 2 it always is)
        def value(p):
            g = np.eye(6)
            g[:2, :2] *= 1 + 0.3 * p[2] ** 2
            return g

        g = MetricField(3, Box(-1.0, 1.0), value, kahler=False)
        p = np.array([0.1, 0.2, 0.3, -0.1, 0.2, 0.05])
        assert w4_residual(g, p) > 1e-3


class TestDistributionGeometry:
    @pytest.mark.parametrize("r", [0.5, 1.0, 2.0])
    def test_flat_radial_scalars(self, flat3, r):
        p = unit_points([r], seed=11)[0]
        geo = nabla_eta(flat3, canonical_distribution(flat3), p)
        assert geo.k == pytest.approx(2 / r, abs=1e-12)
        assert geo.p == pytest.approx(0.0, abs=1e-12)
        assert geo.p_star == pytest.approx(-1 / r, abs=1e-12)
        assert np.max(np.abs(geo.theta)) < 1e-12
        assert np.max(np.abs(geo.theta_star)) < 1e-12
        assert np.max(np.abs(geo.b0_defect())) < 1e-12
        assert np.max(np.abs(geo.N - geo.closed_form_nabla_eta())) < 1e-12

    def test_generic_radial_distribution_matches_analytic_jacobian(self, fs3):
        p = unit_points([1.7], seed=12)[0]
        a = nabla_eta(fs3, canonical_distribution(fs3), p)
        b = nabla_eta(fs3, radial_distribution(fs3), p)
        assert np.max(np.abs(a.N - b.N)) < 1e-8
        assert np.max(np.abs(a.Nt - b.Nt)) < 1e-8

    def test_involutivity_radial(self, flat3):
        D, Dperp, Delta = involutivity(flat3, canonical_distribution(flat3), unit_points([1.0])[0])
        assert (D, Dperp, Delta) == (False, True, True)

    def test_involutivity_constant(self, flat3):
        assert tuple(involutivity(flat3, constant_distribution(flat3), unit_points([1.0])[0])) == (True, True, True)

    def test_principal_frame_undoes_rotation(self, flat3):
        dist = canonical_distribution(flat3).rotated(0.6)
        p = unit_points([1.4], seed=13)[0]
        geo = nabla_eta(flat3, dist, p)
        assert principal_angle(geo) == pytest.approx(-0.6, abs=1e-6)
        fr = principal_frame(flat3, dist, p)
        assert np.allclose(fr.xi, canonical_distribution(flat3).xi(p), atol=1e-6)
        pgeo = nabla_eta(flat3, principal_distribution(flat3, dist), p)
        assert abs(pgeo.div0_jxi) < 1e-6 and pgeo.div0_xi > 0

    def test_principal_frame_degenerate(self, flat3):
        with pytest.raises(DegenerateFrameError):
            principal_frame(flat3, constant_distribution(flat3), unit_points([1.0])[0])

    def test_frame_is_unit(self, fs3):
        dist = canonical_distribution(fs3)
        for p in unit_points([0.3, 4.0], seed=14):
            assert dist.unit_residual(p) < 1e-14
