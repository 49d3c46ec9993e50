"""Pointwise multilinear algebra on a Hermitian tangent space.

Conventions used throughout the package:

* Real coordinates are interleaved ``(x1, y1, x2, y2, ...)`` and the standard
  complex structure acts on column vectors by 2x2 blocks ``[[0, -1], [1, 0]]``.
* The Kahler form is ``Omega(X, Y) = g(JX, Y)``.
* ``R(X, Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z`` and
  ``R(X, Y, Z, U) = g(R(X, Y)Z, U)``, so the sectional curvature of a plane
  spanned by orthonormal ``x, y`` is ``R(x, y, y, x)``.
* Adapted frames are ordered ``(xi, J xi, e1, J e1, ...)``; in frame indices the
  complex structure is therefore the standard block matrix as well.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DegenerateFrameError, DomainError


def standard_complex_structure(n: int) -> np.ndarray:
    """Block-diagonal J0 on R^{2n}; maps the x-axis of each pair to the y-axis."""
    block = np.array([[0.0, -1.0], [1.0, 0.0]])
    return np.kron(np.eye(n), block)


@dataclass(frozen=True)
class TangentSpace:
    """Metric ``g`` and complex structure ``J`` at one point (matrices in coordinates)."""

    n: int
    J: np.ndarray
    g: np.ndarray

    def __post_init__(self):
        dim = 2 * self.n
        if self.n < 1 or self.J.shape != (dim, dim) or self.g.shape != (dim, dim):
            raise DomainError(f"shapes do not match complex dimension n={self.n}")

    @classmethod
    def standard(cls, n: int, g: np.ndarray | None = None) -> "TangentSpace":
        return cls(n, standard_complex_structure(n), np.eye(2 * n) if g is None else np.asarray(g, float))

    @property
    def dim(self) -> int:
        return 2 * self.n

    @property
    def omega(self) -> np.ndarray:
        """Coordinate matrix of the Kahler form, ``Omega_ij = g(J e_i, e_j)``."""
        return self.J.T @ self.g

    def validate(self, tol: float = 1e-10) -> None:
        """Raise if J^2 != -1, g is not SPD, or g is not J-invariant."""
        dim = self.dim
        scale = max(1.0, float(np.max(np.abs(self.g))))
        if np.max(np.abs(self.J @ self.J + np.eye(dim))) > tol:
            raise DomainError("J does not square to -1")
        if np.max(np.abs(self.g - self.g.T)) > tol * scale:
            raise DegenerateFrameError("metric is not symmetric")
        if np.min(np.linalg.eigvalsh(self.g)) <= 0:
            raise DegenerateFrameError("metric is not positive definite")
        if np.max(np.abs(self.J.T @ self.g @ self.J - self.g)) > tol * scale:
            raise DomainError("metric is not Hermitian with respect to J")

    def inner(self, X: np.ndarray, Y: np.ndarray) -> float:
        return float(X @ self.g @ Y)

    def norm(self, X: np.ndarray) -> float:
        return float(np.sqrt(max(self.inner(X, X), 0.0)))


@dataclass(frozen=True)
class AdaptedFrame:
    """A g-orthonormal basis ``(xi, J xi, e1, J e1, ...)`` stored as the columns of ``F``."""

    space: TangentSpace
    F: np.ndarray

    @property
    def n(self) -> int:
        return self.space.n

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def vectors(self) -> list:
        return [self.F[:, a] for a in range(self.dim)]

    @property
    def xi(self) -> np.ndarray:
        return self.F[:, 0]

    @property
    def eta(self) -> np.ndarray:
        """Coordinate covector of eta(X) = g(xi, X)."""
        return self.space.g @ self.F[:, 0]

    @property
    def eta_tilde(self) -> np.ndarray:
        """Coordinate covector of eta~(X) = g(J xi, X)."""
        return self.space.g @ self.F[:, 1]

    @property
    def coframe(self) -> np.ndarray:
        """Rows are the dual covectors: ``W @ F = I`` and ``W = F^T g``."""
        return self.F.T @ self.space.g

    def components(self, X: np.ndarray) -> np.ndarray:
        """Frame components of a coordinate vector."""
        return self.coframe @ X

    def orthonormality_residual(self) -> float:
        G = self.F.T @ self.space.g @ self.F
        return float(np.max(np.abs(G - np.eye(self.dim))))

    def j_adapted_residual(self) -> float:
        JF = self.space.J @ self.F
        return float(max(np.max(np.abs(JF[:, 2 * k] - self.F[:, 2 * k + 1])) for k in range(self.n)))

    def rotated(self, angle: float) -> "AdaptedFrame":
        """Rotate the pair (xi, J xi) by ``angle`` inside D-perp; D is left alone."""
        F = self.F.copy()
        c, s = np.cos(angle), np.sin(angle)
        F[:, 0] = c * self.F[:, 0] + s * self.F[:, 1]
        F[:, 1] = self.space.J @ F[:, 0]
        return AdaptedFrame(self.space, F)


def frame_complex_structure(n: int) -> np.ndarray:
    """J in the components of any adapted frame (``Jf[b, a]`` is the b-component of J F_a)."""
    return standard_complex_structure(n)


def adapted_frame(space: TangentSpace, xi: np.ndarray) -> AdaptedFrame:
    """Build a J-adapted orthonormal frame whose first vector is xi normalised.

    The remaining vectors come from Gram-Schmidt over the coordinate axes, each
    accepted candidate immediately followed by its J-image.  Candidates whose
    projection onto the remaining complement is shorter than 1e-8 are skipped.
    """
    space.validate()
    xi = np.asarray(xi, dtype=float)
    nrm = space.norm(xi)
    if nrm < 1e-12:
        raise DegenerateFrameError(f"xi has norm {nrm:.3e}; cannot build a frame")
    g, J = space.g, space.J
    cols = []

    def push(v):
        cols.append(v)
        cols.append(J @ v)

    push(xi / nrm)
    for axis in range(space.dim):
        if len(cols) == space.dim:
            break
        v = np.zeros(space.dim)
        v[axis] = 1.0
        # two passes of modified Gram-Schmidt keep orthonormality at 1e-15
        for _ in range(2):
            for w in cols:
                v = v - (w @ g @ v) * w
        m = space.norm(v)
        if m < 1e-8:
            continue
        push(v / m)
    if len(cols) != space.dim:
        raise DegenerateFrameError("could not complete the adapted frame")
    return AdaptedFrame(space, np.column_stack(cols))


def angle_phi(X: np.ndarray, frame: AdaptedFrame, tol: float = 1e-8) -> float:
    """Angle between span{X, JX} and span{xi, J xi} for a unit vector X."""
    nrm = frame.space.norm(X)
    if abs(nrm - 1.0) > tol:
        raise DomainError(f"X must be a unit vector, got norm {nrm:.12g}")
    e, et = frame.eta @ X, frame.eta_tilde @ X
    return float(np.arccos(np.clip(np.sqrt(e * e + et * et), 0.0, 1.0)))


class KahlerTensor4:
    """A (0,4) tensor given by its components in an orthonormal adapted frame."""

    __slots__ = ("components", "frame")

    def __init__(self, components: np.ndarray, frame: AdaptedFrame | None = None):
        components = np.asarray(components, dtype=float)
        if components.ndim != 4 or len(set(components.shape)) != 1 or components.shape[0] % 2:
            raise DomainError(f"expected a (2n)^4 array, got shape {components.shape}")
        self.components = components
        self.frame = frame

    @property
    def dim(self) -> int:
        return self.components.shape[0]

    @property
    def n(self) -> int:
        return self.dim // 2

    def __getitem__(self, idx):
        return self.components[idx]

    def norm(self) -> float:
        """Max-norm of the components."""
        return float(np.max(np.abs(self.components)))

    def _like(self, comps: np.ndarray) -> "KahlerTensor4":
        return KahlerTensor4(comps, self.frame)

    def __add__(self, other: "KahlerTensor4") -> "KahlerTensor4":
        return self._like(self.components + other.components)

    def __sub__(self, other: "KahlerTensor4") -> "KahlerTensor4":
        return self._like(self.components - other.components)

    def __mul__(self, s: float) -> "KahlerTensor4":
        return self._like(self.components * float(s))

    __rmul__ = __mul__

    def __neg__(self) -> "KahlerTensor4":
        return self._like(-self.components)

    def evaluate(self, X, Y, Z, U) -> float:
        """R(X, Y, Z, U) for frame-component vectors."""
        return float(np.einsum("abcd,a,b,c,d->", self.components, X, Y, Z, U))

    def ricci(self) -> np.ndarray:
        """rho(Y, Z) = sum_i R(e_i, Y, Z, e_i) in frame components."""
        return np.einsum("abca->bc", self.components)

    def to_coordinates(self) -> np.ndarray:
        """Covariant coordinate components ``R_ijkl`` (needs an attached frame)."""
        if self.frame is None:
            raise DomainError("tensor has no frame attached")
        W = self.frame.coframe
        return np.einsum("abcd,ai,bj,ck,dl->ijkl", self.components, W, W, W, W, optimize=True)

    @classmethod
    def from_coordinates(cls, R: np.ndarray, frame: AdaptedFrame) -> "KahlerTensor4":
        F = frame.F
        return cls(np.einsum("ijkl,ia,jb,kc,ld->abcd", R, F, F, F, F, optimize=True), frame)


def symmetry_residuals(T: KahlerTensor4) -> dict:
    """Max-norm violation of each Kahler curvature identity, keyed by name."""
    R = T.components
    Jf = frame_complex_structure(T.n)
    return {
        "antisym_first": float(np.max(np.abs(R + R.transpose(1, 0, 2, 3)))),
        "antisym_last": float(np.max(np.abs(R + R.transpose(0, 1, 3, 2)))),
        "pair_symmetry": float(np.max(np.abs(R - R.transpose(2, 3, 0, 1)))),
        "bianchi": float(np.max(np.abs(R + R.transpose(1, 2, 0, 3) + R.transpose(2, 0, 1, 3)))),
        # R(X,Y,JZ,U) + R(X,Y,Z,JU) = 0
        "j_invariance": float(np.max(np.abs(
            np.einsum("abmd,mc->abcd", R, Jf) + np.einsum("abcm,md->abcd", R, Jf)))),
    }


def kahler_symmetry_residual(T: KahlerTensor4) -> float:
    """Worst violation over the curvature symmetries of a Kahler manifold (0 when exact)."""
    return max(symmetry_residuals(T).values())


class CurvatureScalars(NamedTuple):
    tau: float
    sigma: float
    kappa: float

    @property
    def vertical(self) -> float:
        return self.kappa

    @property
    def mixed(self) -> float:
        """Trace of the mixed sectional curvatures, sigma - kappa."""
        return self.sigma - self.kappa

    @property
    def horizontal(self) -> float:
        return self.tau - 2 * self.sigma - 2 * (self.sigma - self.kappa)


def curvature_scalars(R: KahlerTensor4, frame: AdaptedFrame | None = None) -> CurvatureScalars:
    """Scalar curvature, Ricci curvature along xi, and the holomorphic curvature of D-perp.

    ``R`` must be given in an adapted frame whose first vector is xi; ``frame`` is
    accepted for symmetry with the other operations but only its dimension is used.
    """
    if frame is not None and frame.dim != R.dim:
        raise DomainError("frame and tensor dimensions differ")
    rho = R.ricci()
    return CurvatureScalars(float(np.trace(rho)), float(rho[0, 0]), float(R[0, 1, 1, 0]))
