import math

import numpy as np
import pytest

from qchkahler.radial import Jet, RadialScalar, inverse_function_derivatives, log1p_potential


def test_jet_product_matches_leibniz():
    x = Jet.variable(0.7)
    j = (x * x * x).c
    assert np.allclose(j[:4], [0.343, 3 * 0.49, 6 * 0.7, 6.0])
    assert j[4] == pytest.approx(0.0)


def test_jet_exp_log_sqrt_roundtrip():
    x = Jet.variable(1.3)
    y = x.exp().log()
    assert np.allclose(y.c, x.c)
    s = (x * x).sqrt()
    assert np.allclose(s.c, x.c)


def test_compose_is_chain_rule():
    # sin(x^2) at x = 0.4
    x = Jet.variable(0.4)
    u = x * x
    f = u.compose([math.sin(u.value), math.cos(u.value), -math.sin(u.value), -math.cos(u.value),
                   math.sin(u.value)])
    h = 1e-4
    fd2 = (math.sin((0.4 + h) ** 2) - 2 * math.sin(0.16) + math.sin((0.4 - h) ** 2)) / h ** 2
    assert f[1] == pytest.approx(2 * 0.4 * math.cos(0.16), rel=1e-14)
    assert f[2] == pytest.approx(fd2, rel=1e-6)


def test_inverse_function_derivatives_of_exp():
    # inverse of exp is log: derivatives at y = e^x are 1/y, -1/y^2, 2/y^3, -6/y^4
    x = 0.3
    y = math.exp(x)
    d = inverse_function_derivatives([y, y, y, y])
    assert np.allclose(d, [1 / y, -1 / y ** 2, 2 / y ** 3, -6 / y ** 4], rtol=1e-13)


def test_polynomial_and_arithmetic():
    p = RadialScalar.polynomial([1.0, 2.0, 3.0])
    q = p * p - p / 2
    r = 1.7
    val = 1 + 2 * r + 3 * r * r
    assert q(r) == pytest.approx(val * val - val / 2)
    assert q.d1(r) == pytest.approx((2 * val - 0.5) * (2 + 6 * r))


def test_radius_and_rho():
    r = RadialScalar.radius()
    assert r(4.0) == pytest.approx(2.0)
    assert r.d1(4.0) == pytest.approx(0.25)
    assert RadialScalar.rho().d1(3.0) == 1.0


def test_integral_matches_antiderivative():
    f = RadialScalar.polynomial([0.0, 1.0, -0.5]).exp()
    F = RadialScalar.integral(f, 0.2)
    from scipy.integrate import quad
    for r in (0.05, 0.2, 1.0, 7.5, 20.0):
        assert F(r) == pytest.approx(quad(f.value, 0.2, r, epsabs=1e-12, epsrel=1e-12)[0], abs=1e-12)
        assert F.d1(r) == pytest.approx(f(r))
        assert F.jet(r)[2] == pytest.approx(f.d1(r))


def test_integral_rejects_bad_base():
    with pytest.raises(ValueError):
        RadialScalar.integral(RadialScalar.constant(1.0), 0.0)


def test_sum_keeps_direct_derivatives():
    calls = []

    def value(r):
        calls.append(r)
        return r

    slow = RadialScalar(value, lambda r: 1.0, lambda r: 0.0, lambda r: 0.0)
    s = slow + RadialScalar.rho()
    assert s.d1(2.0) == 2.0
    assert calls == []


def test_log_radius_chebyshev_derivatives():
    from numpy.polynomial import chebyshev as C
    series = C.Chebyshev.interpolate(lambda x: np.exp(-x) * np.sin(x), 30, domain=[-2, 2])
    f = RadialScalar.log_radius_chebyshev(series)
    assert f.max_derivative_mismatch([0.5, 1.0, 3.0]) < 1e-8


def test_log1p_potential_jet():
    f = log1p_potential()
    assert f(1.0) == pytest.approx(math.log(2))
    assert f.d2(1.0) == pytest.approx(-0.25)
    assert f.jet(1.0)[4] == pytest.approx(-6 / 16)
