import math

import mpmath as mp
import pytest
from hypothesis import given, strategies as st

from conftest import K_HALF, OMEGAS, mixed_params
from summax.exponent import (EvalPoint, FrechetTarget, GumbelTarget, ReversedWeibullTarget, cl_transform,
                             independence_residual, psi, psi_complete_dependence, psi_frechet_mix_closed,
                             psi_general, psi_normal_mix)
from summax.measures import (Discrete, Frechet, PointMass, StdNormal, SumMaxStableParams,
                             complete_dependence_params, frechet_mix_params, normal_mix_params)

INF = math.inf


def test_eval_point_validation():
    EvalPoint(0.0, INF)
    with pytest.raises(ValueError):
        EvalPoint(-1.0, 1.0)
    with pytest.raises(ValueError):
        EvalPoint(1.0, math.nan)


def test_psi_accepts_eval_point(frechet_mix):
    assert psi(frechet_mix, EvalPoint(1.0, 1.0)) == psi(frechet_mix, 1.0, 1.0)


# --- golden values -----------------------------------------------------------

def test_example_43_golden(frechet_mix):
    assert psi(frechet_mix, 1.0, 1.0) == pytest.approx(math.sqrt(2), rel=1e-12)
    assert cl_transform(frechet_mix, 1.0, 1.0) == pytest.approx(0.24311673443421422, rel=1e-12)


@pytest.mark.parametrize("beta", [0.3, 0.5, 0.8])
@pytest.mark.parametrize("gamma", [1.0, 2.0])
@pytest.mark.parametrize("s", [0.0, 0.1, 1.0, 10.0])
@pytest.mark.parametrize("y", [0.2, 1.0, 5.0])
def test_frechet_mixing_closed_form(beta, gamma, s, y):
    p = frechet_mix_params(beta, gamma, 1.0)
    assert psi(p, s, y) == pytest.approx(psi_frechet_mix_closed(beta, gamma, 1.0, s, y), rel=1e-6)


def test_closed_form_limits():
    assert psi_frechet_mix_closed(0.5, 2.0, 1.0, 1.0, 1.0) == pytest.approx(math.sqrt(2))
    assert psi_frechet_mix_closed(0.5, 2.0, 1e-300, 4.0, 1.0) == pytest.approx(2.0)
    # s = 0 is -log of the Frechet(alpha = beta gamma) CDF
    assert psi_frechet_mix_closed(0.4, 2.5, 3.0, 0.0, 1.7) == pytest.approx(3.0**0.4 * 1.7 ** (-1.0), rel=1e-14)


def test_complete_dependence_values():
    assert psi_complete_dependence(0.5, 1.0, 1.0) == pytest.approx(1.0502545416600122, rel=1e-13)  # mpmath
    assert psi_complete_dependence(0.5, 0.0, 4.0) == pytest.approx(0.5 * K_HALF, rel=1e-14)
    assert psi_complete_dependence(0.5, 9.0, INF) == pytest.approx(3.0)


@pytest.mark.parametrize("beta", [0.2, 0.5, 0.9])
@pytest.mark.parametrize("s, y", [(0.0, 1.0), (1.0, 1.0), (0.3, 4.0), (5.0, 0.1)])
def test_complete_dependence_matches_generic(beta, s, y):
    assert psi(complete_dependence_params(beta), s, y) == pytest.approx(psi_complete_dependence(beta, s, y),
                                                                        rel=1e-10)


def test_normal_mixing_values():
    assert psi_normal_mix(0.5, 1.0, 1.0) == pytest.approx(1.0377445259222955, rel=1e-10)  # mpmath
    # s = 0: K m_1 with m_1 = 1/sqrt(2 pi)
    assert psi_normal_mix(0.5, 0.0, 1.0) == pytest.approx(K_HALF / math.sqrt(2 * math.pi), rel=1e-10)
    assert psi_normal_mix(0.3, 2.0, 0.7) == pytest.approx(1.2671248456998364, rel=1e-9)  # mpmath
    assert psi_normal_mix(0.5, 4.0, INF) == pytest.approx(2.0)


@pytest.mark.parametrize("beta", [0.3, 0.5, 0.8])
@pytest.mark.parametrize("s, y", [(0.0, 1.0), (1.0, 1.0), (0.2, 3.0), (7.0, 0.4)])
def test_normal_mixing_two_routes(beta, s, y):
    assert psi(normal_mix_params(beta), s, y) == pytest.approx(psi_normal_mix(beta, s, y), rel=1e-7)


# --- structural properties -------------------------------------------------

@pytest.mark.parametrize("name", list(OMEGAS))
@pytest.mark.parametrize("beta", [0.3, 0.5, 0.8])
def test_marginals(name, beta):
    p = mixed_params(OMEGAS[name], beta=beta)
    for s in (0.1, 1.0, 10.0):
        assert psi(p, s, INF) == pytest.approx(p.K * float(mp.gamma(1 - beta)) * s**beta, rel=1e-8)
    for y in (0.2, 1.0, 5.0):
        assert psi(p, 0.0, y) == pytest.approx((p.C + p.K * p.m_alpha()) / y, rel=1e-8)


def test_atomic_quadrature_cross_check():
    # a Discrete law with atoms and a Frechet law close to it agree only loosely, so instead
    # evaluate the atomic incomplete-gamma sum against direct quadrature of the defining integral
    p = SumMaxStableParams(0.4, 0.7, 0.2, 1.1, Discrete([(-1.0, 0.1), (0.5, 0.4), (3.0, 0.5)]))
    s, y = 0.8, 1.3
    lam = s * y ** (0.7 / 0.4)

    def integrand(t):
        tail = sum(w for u, w in [(0.5, 0.4), (3.0, 0.5)] if u > t ** (-0.4 / 0.7))
        return mp.e ** (-lam * t) * tail * 1.1 * 0.4 * t**-1.4

    kinks = [u ** (-0.7 / 0.4) for u in (0.5, 3.0)]
    integral = mp.quad(integrand, [0, *sorted(kinks), mp.inf])
    expected = 1.1 * float(mp.gamma(0.6)) * s**0.4 + y**-0.7 * (0.2 + float(integral))
    assert psi(p, s, y) == pytest.approx(expected, rel=1e-10)


def test_below_left_endpoint(frechet_mix):
    assert psi(frechet_mix, 1.0, -1.0) == INF
    assert psi(frechet_mix, 0.0, 0.0) == INF
    assert cl_transform(frechet_mix, 1.0, -1.0) == 0.0
    assert cl_transform(frechet_mix, 0.0, INF) == 1.0


eval_s = st.floats(0.0, 20.0)
eval_y = st.floats(0.05, 50.0)


@given(st.sampled_from(list(OMEGAS.values())), st.floats(0.1, 0.9), eval_s, eval_s, eval_y, eval_y)
def test_psi_monotone(omega, beta, s1, s2, y1, y2):
    p = mixed_params(omega, beta=beta)
    (s1, s2), (y1, y2) = sorted((s1, s2)), sorted((y1, y2))
    tol = 1e-9 * psi(p, s2, y1)
    assert psi(p, s1, y1) <= psi(p, s2, y1) + tol
    assert psi(p, s2, y2) <= psi(p, s2, y1) + tol
    assert 0.0 <= cl_transform(p, s1, y1) <= 1.0


@pytest.mark.parametrize("name", list(OMEGAS))
@pytest.mark.parametrize("t", [2.0, 5.0])
def test_stability_identity(name, t):
    p = mixed_params(OMEGAS[name], beta=0.6, alpha=0.9)
    for s, y in [(0.1, 0.5), (1.0, 1.0), (3.0, 2.0), (0.0, 1.5), (0.7, INF)]:
        lhs = cl_transform(p, s, y) ** t
        rhs = cl_transform(p, t ** (1 / p.beta) * s, t ** (-1 / p.alpha) * y)
        assert rhs == pytest.approx(lhs, rel=1e-9)


# --- general extreme-value targets -------------------------------------------

@pytest.fixture
def unit_params():
    return SumMaxStableParams(0.5, 1.0, 0.3, 1.2, Frechet(3.0, 1.5))


def test_psi_general_requires_unit_alpha(complete_dep):
    with pytest.raises(ValueError):
        psi_general(complete_dep, GumbelTarget(), 1.0, 1.0)


@pytest.mark.parametrize("omega", [Frechet(3.0, 1.5), PointMass(2.0), Discrete([(-1.0, 0.3), (0.5, 0.2), (2.0, 0.5)])])
@pytest.mark.parametrize("alpha_t", [0.5, 1.0, 2.5])
def test_psi_general_reduces_to_frechet_case(omega, alpha_t):
    p1 = SumMaxStableParams(0.5, 1.0, 0.3, 1.2, omega)
    pa = SumMaxStableParams(0.5, alpha_t, 0.3, 1.2, omega.power(1.0 / alpha_t))
    target = FrechetTarget(alpha_t, 1.0)
    for s in (0.0, 0.3, 2.0):
        for y in (0.4, 1.0, 3.0):
            assert psi_general(p1, target, s, y) == pytest.approx(psi(pa, s, y), rel=1e-10)


def test_psi_general_unit_frechet_is_identity(unit_params):
    for s, y in [(0.0, 1.0), (1.0, 2.0), (0.1, 0.3)]:
        assert psi_general(unit_params, FrechetTarget(1.0), s, y) == psi(unit_params, s, y)


@pytest.mark.parametrize("y", [-1.0, 0.0, 1.0, 2.0])
def test_gumbel_marginal_composition(unit_params, y):
    g = GumbelTarget(0.0, 1.0)
    lhs = math.exp(-psi_general(unit_params, g, 0.0, y))
    assert lhs == pytest.approx(g.cdf(y) ** unit_params.frechet_scale(), rel=1e-8)


def test_gumbel_limits():
    p = SumMaxStableParams(0.5, 1.0, 0.0, math.sqrt(2 * math.pi), StdNormal())  # C + K m_1 = 1
    g = GumbelTarget(0.0, 1.0)
    assert psi_general(p, g, 0.0, 0.0) == pytest.approx(1.0, rel=1e-10)
    assert psi_general(p, g, 2.0, INF) == pytest.approx(p.K * math.sqrt(math.pi) * math.sqrt(2.0))
    assert psi_general(p, g, 2.0, 800.0) == psi_general(p, g, 2.0, INF)


def test_reversed_weibull_target(unit_params):
    rw = ReversedWeibullTarget(2.0, right_endpoint=1.0, scale=0.5)
    assert rw.x1 == 1.0
    assert psi_general(unit_params, rw, 0.7, 1.0) == psi(unit_params, 0.7, INF)
    for y in (-3.0, 0.0, 0.9):
        lhs = math.exp(-psi_general(unit_params, rw, 0.0, y))
        assert lhs == pytest.approx(rw.cdf(y) ** unit_params.frechet_scale(), rel=1e-10)


def test_frechet_target_below_support(unit_params):
    assert psi_general(unit_params, FrechetTarget(2.0), 1.0, -0.5) == INF


# --- independence ------------------------------------------------------------

def test_independence_residual_vanishes_for_independent_law():
    p = SumMaxStableParams(0.5, 1.0, 1.0, 1.0, PointMass(0.0))
    for s in (0.0, 0.1, 1.0, 3.0, 10.0):
        for y in (0.2, 0.5, 1.0, 2.0, 5.0):
            assert abs(independence_residual(p, s, y)) <= 1e-10


def test_independence_residual_complete_dependence(complete_dep):
    r = independence_residual(complete_dep, 1.0, 1.0)
    assert r == pytest.approx(1.0 + K_HALF - 1.0502545416600122, rel=1e-12)
    assert r > 1e-3
    assert independence_residual(complete_dep, 0.0, 2.0) == pytest.approx(0.0, abs=1e-15)


@given(st.sampled_from(list(OMEGAS.values())), eval_s, eval_y)
def test_independence_residual_nonnegative(omega, s, y):
    p = mixed_params(omega)
    assert independence_residual(p, s, y) >= -1e-9 * psi(p, s, y)
