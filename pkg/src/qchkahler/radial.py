"""Radial scalars: smooth functions of rho = r^2 carried together with their derivatives.

Every metric family in this package is U(n)-invariant, so the whole construction
reduces to a handful of functions of one variable.  A :class:`Jet` holds the
value and the first four rho-derivatives of such a function at a single point;
arithmetic on jets follows the Leibniz and Faa di Bruno rules, so composite
quantities (conformal factors, transformed metric coefficients, ...) get exact
derivatives without symbolic algebra.  Slots that cannot be computed from the
available data are NaN; lower slots never depend on higher ones, so a NaN in
slot 4 is harmless for curvature, which needs slots 0..2 only.
"""

from __future__ import annotations

import functools
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from numpy.polynomial import chebyshev as C
from scipy import integrate

ORDER = 4
_NAN = float("nan")


class Jet:
    """Value and derivatives ``[f, f', f'', f''', f'''']`` at a point."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Sequence[float]):
        c = np.full(ORDER + 1, _NAN)
        m = min(len(coeffs), ORDER + 1)
        c[:m] = np.asarray(coeffs, dtype=float)[:m]
        self.c = c

    @classmethod
    def const(cls, value: float) -> "Jet":
        return cls([value] + [0.0] * ORDER)

    @classmethod
    def variable(cls, x: float) -> "Jet":
        return cls([x, 1.0] + [0.0] * (ORDER - 1))

    def __repr__(self) -> str:
        return f"Jet({self.c.tolist()})"

    def __getitem__(self, k: int) -> float:
        return float(self.c[k])

    @property
    def value(self) -> float:
        return float(self.c[0])

    @staticmethod
    def _lift(other) -> "Jet":
        return other if isinstance(other, Jet) else Jet.const(float(other))

    def __add__(self, other) -> "Jet":
        other = self._lift(other)
        return Jet(self.c + other.c)

    __radd__ = __add__

    def __neg__(self) -> "Jet":
        return Jet(-self.c)

    def __sub__(self, other) -> "Jet":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "Jet":
        return self._lift(other) - self

    def __mul__(self, other) -> "Jet":
        if not isinstance(other, Jet):
            return Jet(self.c * float(other))
        f, g = self.c, other.c
        out = np.empty(ORDER + 1)
        for k in range(ORDER + 1):
            out[k] = sum(math.comb(k, j) * f[j] * g[k - j] for j in range(k + 1))
        return Jet(out)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Jet":
        if not isinstance(other, Jet):
            return Jet(self.c / float(other))
        return self * other.reciprocal()

    def __rtruediv__(self, other) -> "Jet":
        return self._lift(other) * self.reciprocal()

    def __pow__(self, p: float) -> "Jet":
        x = self.c[0]
        outer = [1.0]
        for k in range(1, ORDER + 1):
            outer.append(outer[-1] * (p - k + 1))
        return self.compose([outer[k] * x ** (p - k) for k in range(ORDER + 1)])

    def compose(self, outer: Sequence[float]) -> "Jet":
        """Jet of ``F(self)`` given ``outer = [F, F', F'', F''', F'''']`` at ``self.value``."""
        F = list(outer) + [_NAN] * (ORDER + 1 - len(outer))
        g1, g2, g3, g4 = self.c[1:5]
        h = np.empty(ORDER + 1)
        h[0] = F[0]
        h[1] = F[1] * g1
        h[2] = F[2] * g1**2 + F[1] * g2
        h[3] = F[3] * g1**3 + 3 * F[2] * g1 * g2 + F[1] * g3
        h[4] = (F[4] * g1**4 + 6 * F[3] * g1**2 * g2
                + F[2] * (3 * g2**2 + 4 * g1 * g3) + F[1] * g4)
        return Jet(h)

    def reciprocal(self) -> "Jet":
        return self ** -1.0

    def exp(self) -> "Jet":
        e = math.exp(self.c[0])
        return self.compose([e] * (ORDER + 1))

    def log(self) -> "Jet":
        x = self.c[0]
        if x <= 0:
            raise ValueError(f"log of non-positive jet value {x}")
        return self.compose([math.log(x), 1 / x, -1 / x**2, 2 / x**3, -6 / x**4])

    def sqrt(self) -> "Jet":
        return self ** 0.5

    def derivative(self) -> "Jet":
        """Jet of f' (the top slot becomes unknown)."""
        return Jet(list(self.c[1:]) + [_NAN])

    def antiderivative(self, value: float) -> "Jet":
        """Jet of F with F' = f and F = ``value`` at the point."""
        return Jet([value] + list(self.c[:-1]))


def inverse_function_derivatives(d: Sequence[float]) -> list:
    """Derivatives of L^{-1} at L(s), given ``d = [L'(s), L''(s), L'''(s), L''''(s)]``."""
    L1, L2, L3, L4 = d
    return [
        1 / L1,
        -L2 / L1**3,
        (3 * L2**2 - L1 * L3) / L1**5,
        (-15 * L2**3 + 10 * L1 * L2 * L3 - L1**2 * L4) / L1**7,
    ]


@dataclass(frozen=True)
class RadialScalar:
    """A smooth function of rho = r^2 with analytic derivatives up to third (optionally fourth) order.

    Either give the four callables directly or build one from a jet function via
    :meth:`from_jet`.  Arithmetic between radial scalars is pointwise jet arithmetic.
    """

    value: Callable[[float], float]
    d1: Callable[[float], float]
    d2: Callable[[float], float]
    d3: Callable[[float], float]
    d4: Optional[Callable[[float], float]] = None
    name: str = ""
    _jet_fn: Optional[Callable[[float], Jet]] = field(default=None, repr=False, compare=False)

    def jet(self, rho: float) -> Jet:
        if self._jet_fn is not None:
            return self._jet_fn(rho)
        d4 = self.d4(rho) if self.d4 is not None else _NAN
        return Jet([self.value(rho), self.d1(rho), self.d2(rho), self.d3(rho), d4])

    def __call__(self, rho: float) -> float:
        return self.value(rho)

    @classmethod
    def from_jet(cls, fn: Callable[[float], Jet], name: str = "") -> "RadialScalar":
        return cls(
            value=lambda r: fn(r)[0],
            d1=lambda r: fn(r)[1],
            d2=lambda r: fn(r)[2],
            d3=lambda r: fn(r)[3],
            d4=lambda r: fn(r)[4],
            name=name,
            _jet_fn=fn,
        )

    @classmethod
    def constant(cls, c: float) -> "RadialScalar":
        return cls.from_jet(lambda r: Jet.const(c), name=repr(c))

    @classmethod
    def rho(cls) -> "RadialScalar":
        return cls.from_jet(Jet.variable, name="rho")

    @classmethod
    def radius(cls) -> "RadialScalar":
        return cls.from_jet(lambda r: Jet.variable(r) ** 0.5, name="r")

    @classmethod
    def polynomial(cls, coeffs: Sequence[float]) -> "RadialScalar":
        """sum_k coeffs[k] * rho**k."""
        p = np.polynomial.Polynomial(coeffs)
        derivs = [p] + [p.deriv(m) for m in range(1, ORDER + 1)]
        return cls.from_jet(lambda r: Jet([q(r) for q in derivs]), name=f"poly{list(coeffs)}")

    @classmethod
    def log_radius_chebyshev(cls, series: C.Chebyshev, name: str = "") -> "RadialScalar":
        """Function of rho given as a Chebyshev series in x = ln r = (ln rho)/2."""
        derivs = [series] + [series.deriv(m) for m in range(1, ORDER + 1)]

        def jet(r: float) -> Jet:
            x = Jet.variable(r).log() * 0.5
            return x.compose([q(x.value) for q in derivs])

        return cls.from_jet(jet, name=name)

    @classmethod
    def integral(cls, integrand: "RadialScalar", rho0: float, name: str = "",
                 tol: float = 1e-13, ratio: float = 1.25) -> "RadialScalar":
        """F(rho) = int_{rho0}^{rho} integrand, by adaptive quadrature.

        Derivatives of F come from the integrand's jet, so only the value needs
        quadrature.  Values at the geometric anchors ``rho0 * ratio**m`` are
        cached, and each evaluation integrates only from the nearest anchor, which
        keeps nested integrals (an integrand that is itself an integral) cheap.
        A quadrature warning is promoted to ``ArithmeticError``.
        """
        if not rho0 > 0:
            raise ValueError("integral needs a positive base point rho0")
        log_ratio = math.log(ratio)

        def quad(lo: float, hi: float) -> float:
            with warnings.catch_warnings():
                warnings.simplefilter("error", integrate.IntegrationWarning)
                try:
                    v, _ = integrate.quad(integrand.value, lo, hi, epsabs=tol, epsrel=tol, limit=200)
                except integrate.IntegrationWarning as exc:
                    raise ArithmeticError(f"quadrature did not converge on [{lo}, {hi}]: {exc}") from exc
            return v

        @functools.lru_cache(maxsize=None)
        def anchor(m: int) -> float:
            if m == 0:
                return 0.0
            step = 1 if m > 0 else -1
            prev = m - step
            return anchor(prev) + quad(rho0 * ratio ** prev, rho0 * ratio ** m)

        @functools.lru_cache(maxsize=8192)
        def value(r: float) -> float:
            if not r > 0:
                raise ValueError(f"rho must be positive, got {r}")
            m = int(round(math.log(r / rho0) / log_ratio))
            # walk the anchors one at a time so the recursion depth stays small
            for j in range(0, m, 1 if m > 0 else -1):
                anchor(j)
            a = rho0 * ratio ** m
            return anchor(m) + (quad(a, r) if r != a else 0.0)

        # derivatives read the integrand directly so they never trigger quadrature
        return cls(
            value=lambda r: value(float(r)),
            d1=integrand.value,
            d2=lambda r: integrand.jet(r)[1],
            d3=lambda r: integrand.jet(r)[2],
            d4=lambda r: integrand.jet(r)[3],
            name=name or f"int({integrand.name})",
            _jet_fn=lambda r: integrand.jet(r).antiderivative(value(float(r))),
        )

    def _binary(self, other, op, sym: str) -> "RadialScalar":
        if isinstance(other, RadialScalar):
            return RadialScalar.from_jet(lambda r: op(self.jet(r), other.jet(r)),
                                         name=f"({self.name}{sym}{other.name})")
        return RadialScalar.from_jet(lambda r: op(self.jet(r), other),
                                     name=f"({self.name}{sym}{other})")

    def _linear(self, other: "RadialScalar", sign: float, sym: str) -> "RadialScalar":
        # sums keep separate derivative callables, so reading d1 of u1 + u2 never
        # evaluates a value that might need quadrature
        parts = [(self.value, other.value), (self.d1, other.d1), (self.d2, other.d2),
                 (self.d3, other.d3)]
        fns = [lambda r, f=f, g=g: f(r) + sign * g(r) for f, g in parts]
        d4 = (lambda r: self.d4(r) + sign * other.d4(r)) if self.d4 and other.d4 else None
        return RadialScalar(*fns, d4=d4, name=f"({self.name}{sym}{other.name})",
                            _jet_fn=lambda r: self.jet(r) + sign * other.jet(r))

    def __add__(self, other):
        if isinstance(other, RadialScalar):
            return self._linear(other, 1.0, "+")
        return self._binary(other, lambda a, b: a + b, "+")

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, RadialScalar):
            return self._linear(other, -1.0, "-")
        return self._binary(other, lambda a, b: a - b, "-")

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b, "*")

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binary(other, lambda a, b: a / b, "/")

    def __neg__(self):
        d4 = (lambda r: -self.d4(r)) if self.d4 else None
        return RadialScalar(lambda r: -self.value(r), lambda r: -self.d1(r), lambda r: -self.d2(r),
                            lambda r: -self.d3(r), d4=d4, name=f"-{self.name}",
                            _jet_fn=lambda r: -self.jet(r))

    def __pow__(self, p: float):
        return RadialScalar.from_jet(lambda r: self.jet(r) ** p, name=f"{self.name}**{p}")

    def exp(self) -> "RadialScalar":
        return RadialScalar.from_jet(lambda r: self.jet(r).exp(), name=f"exp({self.name})")

    def log(self) -> "RadialScalar":
        return RadialScalar.from_jet(lambda r: self.jet(r).log(), name=f"log({self.name})")

    def sqrt(self) -> "RadialScalar":
        return RadialScalar.from_jet(lambda r: self.jet(r).sqrt(), name=f"sqrt({self.name})")

    def derivative(self) -> "RadialScalar":
        return RadialScalar.from_jet(lambda r: self.jet(r).derivative(), name=f"{self.name}'")

    def max_derivative_mismatch(self, rhos: Sequence[float], h: float = 1e-5) -> float:
        """Largest relative gap between ``d1`` and a central difference of ``value``."""
        worst = 0.0
        for r in rhos:
            fd = (self.value(r + h) - self.value(r - h)) / (2 * h)
            d = self.d1(r)
            worst = max(worst, abs(fd - d) / max(abs(d), 1.0))
        return worst


def log1p_potential() -> RadialScalar:
    """f(rho) = log(1 + rho); the Fubini-Study potential."""
    def jet(r):
        x = 1.0 + r
        return Jet([math.log(x), 1 / x, -1 / x**2, 2 / x**3, -6 / x**4])
    return RadialScalar.from_jet(jet, name="log1p")
