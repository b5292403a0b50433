import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from summax.special import (QuadratureError, QuadratureResult, _NODES, _WK_FULL, gamma_fn, integrate, scaled_upper_gamma,
                            integrate_0_inf, upper_incomplete_gamma)


@pytest.mark.parametrize("x, expected", [
    (1.0, 1.0),
    (0.5, math.sqrt(math.pi)),
    (0.3, 2.991568987687590744),  # mpmath, 40 digits
    (7.25, float(mp.gamma(7.25))),
    (-0.5, -2 * math.sqrt(math.pi)),
])
def test_gamma_values(x, expected):
    assert gamma_fn(x) == pytest.approx(expected, rel=1e-13)


@pytest.mark.parametrize("x", [0.0, -1.0, -3.0])
def test_gamma_rejects_poles(x):
    with pytest.raises(ValueError):
        gamma_fn(x)


@given(st.floats(0.01, 10.0))
def test_gamma_matches_mpmath(x):
    assert gamma_fn(x) == pytest.approx(float(mp.gamma(x)), rel=1e-12)


@pytest.mark.parametrize("a, z, expected, rel", [
    (-0.5, 1.0, 0.17814771178156069, 1e-12),
    (-0.5, 10.0, 1.260904261324157e-06, 1e-12),
])
def test_upper_gamma_frozen(a, z, expected, rel):
    assert upper_incomplete_gamma(a, z) == pytest.approx(expected, rel=rel)


def test_upper_gamma_large_z_asymptotics():
    # Gamma(a, z) ~ z^(a-1) e^-z (1 + (a-1)/z + ...)
    z = 10.0
    lead = z**-1.5 * math.exp(-z)
    assert upper_incomplete_gamma(-0.5, z) == pytest.approx(lead, rel=0.2)
    assert upper_incomplete_gamma(-0.5, z) == pytest.approx(lead * (1 - 1.5 / z + 1.5 * 2.5 / z**2), rel=2e-2)


@pytest.mark.parametrize("a", [-0.9, -0.5, -0.1])
@pytest.mark.parametrize("z", [0.01, 0.1, 1.0, 10.0])
def test_upper_gamma_recurrence(a, z):
    lhs = float(mp.gammainc(a + 1, z))
    rhs = a * upper_incomplete_gamma(a, z) + z**a * math.exp(-z)
    assert rhs == pytest.approx(lhs, rel=1e-10)


@given(st.floats(-0.99, -0.01), st.floats(1e-6, 50.0))
def test_upper_gamma_against_mpmath(a, z):
    assert upper_incomplete_gamma(a, z) == pytest.approx(float(mp.gammainc(a, z)), rel=1e-10)


@pytest.mark.parametrize("a, z", [(0.0, 1.0), (-1.0, 1.0), (0.5, 1.0), (-0.5, 0.0), (-0.5, -1.0)])
def test_upper_gamma_domain(a, z):
    with pytest.raises(ValueError):
        upper_incomplete_gamma(a, z)


def test_kronrod_rule_exact_to_degree_31():
    for k in range(32):
        exact = 0.0 if k % 2 else 2.0 / (k + 1)
        assert float(_NODES**k @ _WK_FULL) == pytest.approx(exact, abs=1e-14)


@pytest.mark.parametrize("f, expected", [
    (lambda t: np.exp(-t), 1.0),
    (lambda t: 0.5 * t**-1.5 * -np.expm1(-t), math.sqrt(math.pi)),
    (lambda t: t * np.exp(-t * t), 0.5),
])
def test_integrate_0_inf_examples(f, expected):
    res = integrate_0_inf(f, [1.0])
    assert isinstance(res, QuadratureResult)
    assert res.value == pytest.approx(expected, rel=1e-9)
    assert res.evaluations >= 1 and res.abs_error_estimate >= 0


@pytest.mark.parametrize("beta", [0.1, 0.3, 0.5, 0.7, 0.9])
@pytest.mark.parametrize("s", [0.1, 0.5, 1.0, 5.0, 10.0])
def test_integrate_0_inf_sum_exponent(beta, s):
    res = integrate_0_inf(lambda t: beta * t ** (-beta - 1) * -np.expm1(-s * t), [1.0 / s])
    exact = math.gamma(1 - beta) * s**beta
    assert res.value == pytest.approx(exact, rel=1e-8)
    # the error estimate is an honest bound here
    assert abs(res.value - exact) <= res.abs_error_estimate


def test_integrate_finite_and_reversed():
    assert integrate(np.sin, 0.0, math.pi).value == pytest.approx(2.0, rel=1e-12)
    assert integrate(np.sin, math.pi, 0.0).value == pytest.approx(-2.0, rel=1e-12)
    with pytest.raises(ValueError):
        integrate(np.sin, 0.0, math.inf)


def test_integrate_breakpoints_handle_kinks():
    res = integrate(lambda x: np.abs(x - 0.3), 0.0, 1.0, breakpoints=[0.3])
    assert res.value == pytest.approx(0.5 * (0.09 + 0.49), rel=1e-13)


def test_quadrature_budget_exhaustion():
    with pytest.raises(QuadratureError) as info:
        integrate(lambda x: np.sin(1.0 / x) / x, 1e-9, 1.0, budget=500)
    assert isinstance(info.value.result, QuadratureResult)


def test_nonfinite_integrand_is_reported():
    with pytest.raises(QuadratureError):
        integrate(lambda x: np.full_like(x, np.nan), 0.0, 1.0)


@pytest.mark.parametrize("beta", [0.1, 0.5, 0.9])
@pytest.mark.parametrize("z", [0.0, 1e-300, 1e-8, 0.3, 1.0, 4.0, 60.0])
def test_scaled_upper_gamma_is_tail_integral(beta, z):
    # t = e^x turns the power tail into an exponential one
    # t = e^x turns the power tail into an exponential one; beyond z e^x = 800 the integrand is nil
    top = mp.inf if z == 0 else mp.log(800 / z)
    pts = [0] + [p for p in (1, 5, 20, 100) if p < top] + [top]
    oracle = float(mp.quad(lambda x: mp.e ** (-z * mp.e**x) * beta * mp.e ** (-beta * x), pts))
    assert scaled_upper_gamma(beta, z) == pytest.approx(oracle, rel=1e-9)


@given(st.floats(0.01, 0.99), st.floats(1e-12, 30.0))
def test_scaled_upper_gamma_against_definition(beta, z):
    expected = beta * z**beta * float(mp.gammainc(-beta, z))
    assert scaled_upper_gamma(beta, z) == pytest.approx(expected, rel=1e-10)
