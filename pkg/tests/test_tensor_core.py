import numpy as np
import pytest

from qchkahler.errors import DegenerateFrameError, DomainError
from qchkahler.qch_invariants import Kind, invariant_tensor
from qchkahler.tensor_core import (
    KahlerTensor4,
    TangentSpace,
    adapted_frame,
    angle_phi,
    curvature_scalars,
    frame_complex_structure,
    kahler_symmetry_residual,
    standard_complex_structure,
    symmetry_residuals,
)


def hermitian_metric(n, seed):
    rng = np.random.default_rng(seed)
    J = standard_complex_structure(n)
    M = rng.normal(size=(2 * n, 2 * n))
    g = M @ M.T + 2 * n * np.eye(2 * n)
    return 0.5 * (g + J.T @ g @ J)


class TestTangentSpace:
    def test_standard_J_squares_to_minus_one(self):
        J = standard_complex_structure(3)
        assert np.allclose(J @ J, -np.eye(6))
        assert J[1, 0] == 1.0 and J[0, 1] == -1.0

    def test_validate_accepts_hermitian(self):
        TangentSpace.standard(3, hermitian_metric(3, 1)).validate()

    def test_validate_rejects_non_hermitian(self):
        g = np.diag([1.0, 2.0, 1.0, 1.0])
        with pytest.raises(DomainError):
            TangentSpace.standard(2, g).validate()

    def test_validate_rejects_indefinite(self):
        g = np.diag([1.0, 1.0, -1.0, -1.0])
        with pytest.raises(DegenerateFrameError):
            TangentSpace.standard(2, g).validate()

    def test_shape_mismatch(self):
        with pytest.raises(DomainError):
            TangentSpace(3, np.eye(4), np.eye(4))

    def test_omega_is_antisymmetric(self):
        sp = TangentSpace.standard(2, hermitian_metric(2, 3))
        assert np.allclose(sp.omega, -sp.omega.T)


class TestAdaptedFrame:
    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_orthonormal_and_j_adapted(self, seed):
        sp = TangentSpace.standard(3, hermitian_metric(3, seed))
        xi = np.random.default_rng(seed).normal(size=6)
        fr = adapted_frame(sp, xi)
        assert fr.orthonormality_residual() < 1e-13
        assert fr.j_adapted_residual() < 1e-13
        assert np.allclose(fr.xi, xi / sp.norm(xi))
        assert np.allclose(fr.coframe @ fr.F, np.eye(6))

    def test_xi_along_axis_skips_dependent_candidates(self):
        fr = adapted_frame(TangentSpace.standard(2), np.array([1.0, 0, 0, 0]))
        assert fr.orthonormality_residual() < 1e-15

    def test_zero_xi(self):
        with pytest.raises(DegenerateFrameError):
            adapted_frame(TangentSpace.standard(2), np.zeros(4))

    def test_rotation_keeps_frame_adapted(self):
        fr = adapted_frame(TangentSpace.standard(3, hermitian_metric(3, 5)), np.ones(6)).rotated(0.7)
        assert fr.orthonormality_residual() < 1e-13
        assert fr.j_adapted_residual() < 1e-13

    def test_frame_complex_structure(self):
        fr = adapted_frame(TangentSpace.standard(2, hermitian_metric(2, 4)), np.ones(4))
        Jf = frame_complex_structure(2)
        assert np.allclose(fr.coframe @ fr.space.J @ fr.F, Jf)


class TestAnglePhi:
    def test_extremes(self):
        fr = adapted_frame(TangentSpace.standard(2), np.array([1.0, 0, 0, 0]))
        assert angle_phi(fr.F[:, 1], fr) == pytest.approx(0.0)
        assert angle_phi(fr.F[:, 2], fr) == pytest.approx(np.pi / 2)

    def test_rejects_non_unit(self):
        fr = adapted_frame(TangentSpace.standard(2), np.array([1.0, 0, 0, 0]))
        with pytest.raises(DomainError):
            angle_phi(np.array([2.0, 0, 0, 0]), fr)


class TestKahlerTensor4:
    def test_shape_validation(self):
        with pytest.raises(DomainError):
            KahlerTensor4(np.zeros((3, 3, 3, 3)))

    def test_random_tensor_is_not_kahler(self):
        T = KahlerTensor4(np.random.default_rng(0).normal(size=(4, 4, 4, 4)))
        res = symmetry_residuals(T)
        assert set(res) == {"antisym_first", "antisym_last", "pair_symmetry", "bianchi", "j_invariance"}
        assert kahler_symmetry_residual(T) > 0.1

    def test_coordinate_roundtrip(self):
        sp = TangentSpace.standard(2, hermitian_metric(2, 7))
        fr = adapted_frame(sp, np.ones(4))
        T = invariant_tensor(Kind.PI, fr)
        back = KahlerTensor4.from_coordinates(T.to_coordinates(), fr)
        assert np.allclose(back.components, T.components, atol=1e-12)

    def test_to_coordinates_needs_frame(self):
        with pytest.raises(DomainError):
            invariant_tensor(Kind.PI, 2).to_coordinates()

    def test_evaluate_sectional(self):
        T = invariant_tensor(Kind.PI, 2)
        e = np.eye(4)
        # pi gives holomorphic sectional curvature 1
        assert T.evaluate(e[0], e[1], e[1], e[0]) == pytest.approx(1.0)

    def test_scalars_of_pi(self):
        # constant holomorphic curvature 1 in complex dimension n: tau = n(n+1), sigma = (n+1)/2, kappa = 1
        n = 3
        tau, sigma, kappa = curvature_scalars(invariant_tensor(Kind.PI, n))
        assert tau == pytest.approx(n * (n + 1))
        assert sigma == pytest.approx((n + 1) / 2)
        assert kappa == pytest.approx(1.0)
