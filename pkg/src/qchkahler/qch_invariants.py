"""The invariant tensors pi, Phi, Psi and the (a, b, c) decomposition of Kahler curvature.

A Kahler curvature tensor is of quasi-constant holomorphic sectional curvature
(QCH) when it equals ``a*pi + b*Phi + c*Psi`` for the distribution
D-perp = span{xi, J xi}.  Everything here is evaluated in an orthonormal adapted
frame, so ``g`` is the identity, ``eta`` is the first basis covector and
``eta~`` the second.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional

import numpy as np

from .errors import DomainError
from .tensor_core import AdaptedFrame, KahlerTensor4, curvature_scalars, frame_complex_structure


class Kind(str, Enum):
    PI = "pi"
    PHI = "phi"
    PSI = "psi"


@dataclass(frozen=True)
class QchCoefficients:
    """The triple (a, b, c) with optional geometric scalars attached."""

    a: float
    b: float
    c: float
    residual: float = 0.0
    tau: Optional[float] = None
    sigma: Optional[float] = None
    kappa: Optional[float] = None
    k: Optional[float] = None
    p_star: Optional[float] = None
    extras: dict = field(default_factory=dict, compare=False)

    @property
    def horizontal(self) -> float:
        """Holomorphic sectional curvature of planes inside D."""
        return self.a

    @property
    def mixed(self) -> float:
        """Sectional curvature of a plane spanned by a unit vector of D and one of D-perp."""
        return (2 * self.a + self.b) / 8

    @property
    def vertical(self) -> float:
        return self.a + self.b + self.c

    def as_tuple(self) -> tuple:
        return (self.a, self.b, self.c)

    def with_scalars(self, **kw) -> "QchCoefficients":
        return replace(self, **kw)


def _frame_pieces(n: int):
    dim = 2 * n
    d = np.eye(dim)
    O = frame_complex_structure(n).T          # O[a, b] = Omega(F_a, F_b)
    eta, eta_t = d[0], d[1]
    return d, O, eta, eta_t


def invariant_tensor(kind: Kind | str, frame: AdaptedFrame | int) -> KahlerTensor4:
    """Components of pi, Phi or Psi in an adapted frame (or for complex dimension ``n``)."""
    kind = Kind(kind.lower() if isinstance(kind, str) else kind)
    n = frame if isinstance(frame, (int, np.integer)) else frame.n
    fr = None if isinstance(frame, (int, np.integer)) else frame
    d, O, eta, et = _frame_pieces(int(n))
    ein = np.einsum
    if kind is Kind.PI:
        T = (ein("bc,ad->abcd", d, d) - ein("ac,bd->abcd", d, d)
             + ein("bc,ad->abcd", O, O) - ein("ac,bd->abcd", O, O)
             - 2 * ein("ab,cd->abcd", O, O)) / 4
    elif kind is Kind.PHI:
        h = np.outer(eta, eta) + np.outer(et, et)
        w = np.outer(eta, et) - np.outer(et, eta)
        T = (ein("bc,ad->abcd", d, h) - ein("ac,bd->abcd", d, h)
             + ein("ad,bc->abcd", d, h) - ein("bd,ac->abcd", d, h)
             + ein("bc,ad->abcd", O, w) - ein("ac,bd->abcd", O, w)
             + ein("ad,bc->abcd", O, w) - ein("bd,ac->abcd", O, w)
             - 2 * ein("ab,cd->abcd", O, w) - 2 * ein("cd,ab->abcd", O, w)) / 8
    else:
        T = (ein("b,c,a,d->abcd", eta, eta, et, et) - ein("a,c,b,d->abcd", eta, eta, et, et)
             + ein("a,d,b,c->abcd", eta, eta, et, et) - ein("b,d,a,c->abcd", eta, eta, et, et))
    return KahlerTensor4(T, fr)


def qch_tensor(a: float, b: float, c: float, frame: AdaptedFrame | int) -> KahlerTensor4:
    """a*pi + b*Phi + c*Psi."""
    return (a * invariant_tensor(Kind.PI, frame) + b * invariant_tensor(Kind.PHI, frame)
            + c * invariant_tensor(Kind.PSI, frame))


def qch_decompose(R: KahlerTensor4, frame: AdaptedFrame | None = None) -> QchCoefficients:
    """Read (a, b, c) off the horizontal, mixed and vertical curvatures of R.

    The reported ``residual`` is ``max|R - a pi - b Phi - c Psi|``; it is zero
    exactly when R is QCH with respect to the frame's xi.
    """
    if R.n < 2:
        raise DomainError("decomposition needs complex dimension n >= 2 (no horizontal plane)")
    a = float(R[2, 3, 3, 2])
    b = float(8 * R[2, 0, 0, 2] - 2 * a)
    c = float(R[0, 1, 1, 0] - a - b)
    resid = (R - qch_tensor(a, b, c, R.n)).norm()
    tau, sigma, kappa = curvature_scalars(R)
    return QchCoefficients(a, b, c, resid, tau=tau, sigma=sigma, kappa=kappa)


def hol_profile(coeffs: QchCoefficients, phi: float) -> float:
    """Holomorphic sectional curvature of a plane at angle ``phi`` to D-perp."""
    c2 = np.cos(phi) ** 2
    return float(coeffs.a + coeffs.b * c2 + coeffs.c * c2 * c2)


def coefficients_from_scalars(tau: float, sigma: float, kappa: float, n: int) -> QchCoefficients:
    """Invert the scalar relations of a QCH tensor: (tau, sigma, kappa) -> (a, b, c)."""
    if n < 2:
        raise DomainError("n must be at least 2")
    den = n * (n - 1)
    a = (tau - 4 * sigma + 2 * kappa) / den
    b = (4 * (n + 2) * sigma - 2 * tau - 4 * (n + 1) * kappa) / den
    c = (tau - 4 * (n + 1) * sigma + (n + 1) * (n + 2) * kappa) / den
    return QchCoefficients(a, b, c, tau=tau, sigma=sigma, kappa=kappa)


def scalars_from_coefficients(a: float, b: float, c: float, n: int) -> tuple:
    """Forward map (a, b, c) -> (tau, sigma, kappa) for a QCH tensor in complex dimension n."""
    kappa = a + b + c
    sigma = kappa + (n - 1) * (2 * a + b) / 4
    tau = n * (n - 1) * a + 2 * sigma + 2 * (sigma - kappa)
    return tau, sigma, kappa


def ricci_model(R: KahlerTensor4) -> np.ndarray:
    """The Ricci tensor a QCH tensor with R's scalars would have (frame components)."""
    n = R.n
    tau, sigma, _ = curvature_scalars(R)
    d, _, eta, et = _frame_pieces(n)
    h = np.outer(eta, eta) + np.outer(et, et)
    return (tau - 2 * sigma) / (2 * (n - 1)) * d + (2 * n * sigma - tau) / (2 * (n - 1)) * h


def ricci_deviation(R: KahlerTensor4) -> np.ndarray:
    """rho minus its QCH model; a biconformal invariant for B0-distributions."""
    return R.ricci() - ricci_model(R)


def ricci_identity_residual(R: KahlerTensor4, frame: AdaptedFrame | None = None) -> float:
    """max|rho - model| where the model is the Ricci tensor forced by the QCH form."""
    return float(np.max(np.abs(ricci_deviation(R))))


def qc_frame(R: KahlerTensor4) -> KahlerTensor4:
    """R - a pi - b Phi - c Psi in frame components."""
    co = qch_decompose(R)
    return R - qch_tensor(co.a, co.b, co.c, R.n)


def qc_tensor(R: KahlerTensor4, frame: AdaptedFrame | None = None) -> np.ndarray:
    """QC(R) as a (1,3) tensor ``Q[i, j, k, l]`` in coordinates (last index raised).

    ``Q[i, j, k, :]`` are the coordinate components of the vector ``QC(d_i, d_j) d_k``.
    """
    frame = frame or R.frame
    if frame is None:
        raise DomainError("qc_tensor needs the frame the tensor is expressed in")
    T = qc_frame(R).components
    W, F = frame.coframe, frame.F
    return np.einsum("abcd,ai,bj,ck,ld->ijkl", T, W, W, W, F, optimize=True)
