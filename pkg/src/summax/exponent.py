"""The C-L exponent Psi(s, y) and transform exp(-Psi) of sum-max stable laws.

For y > 0,

    Psi(s, y) = K Gamma(1-beta) s^beta
                + y^-alpha (C + int_0^inf e^(-s t y^(alpha/beta)) omega(t^(-beta/alpha), inf) K beta t^(-beta-1) dt),

Psi = inf for y <= 0, and Psi(s, inf) = K Gamma(1-beta) s^beta.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .measures import SumMaxStableParams
from .special import gamma_fn, integrate_0_inf, scaled_upper_gamma

_QUAD_TOL = dict(epsabs=1e-15, epsrel=1e-12)


@dataclass(frozen=True)
class EvalPoint:
    s: float
    y: float

    def __post_init__(self):
        if not (self.s >= 0 and math.isfinite(self.s)):
            raise ValueError(f"s must be finite and nonnegative, got {self.s}")
        if math.isnan(self.y):
            raise ValueError("y must not be NaN")


def _point(s, y):
    if isinstance(s, EvalPoint):
        return s
    return EvalPoint(float(s), float(y))


def sum_exponent(params: SumMaxStableParams, s: float) -> float:
    """K Gamma(1-beta) s^beta, the Laplace exponent of the sum marginal."""
    return 0.0 if s == 0 else params.K * gamma_fn(1.0 - params.beta) * s**params.beta


def _mixing_integral(params, s, y):
    """int_0^inf e^(-lam t) omega(t^(-beta/alpha), inf) K beta t^(-beta-1) dt, lam = s y^(alpha/beta)."""
    p = params
    lam = s * y ** (p.alpha / p.beta)
    om = p.omega
    if om.is_atomic:
        u, w = om.atoms()
        pos = u > 0
        u, w = u[pos], w[pos]
        # the tail indicator switches on at t_j = u_j^(-alpha/beta); each atom gives
        # K w_j t_j^-beta g(lam t_j) with g(z) = beta z^beta Gamma(-beta, z), g(0) = 1
        ua = u**p.alpha
        if lam == 0:
            return p.K * math.fsum(w * ua)
        terms = [wj * uaj * scaled_upper_gamma(p.beta, lam * uj ** (-p.alpha / p.beta))
                 for uj, uaj, wj in zip(u, ua, w)]
        return p.K * math.fsum(terms)
    # v = t^-beta turns the integral into K int_0^inf exp(-lam v^(-1/beta)) omega(v^(1/alpha), inf) dv
    inv_a, inv_b = 1.0 / p.alpha, 1.0 / p.beta

    def f(v):
        v = np.asarray(v, dtype=float)
        with np.errstate(divide="ignore", over="ignore"):
            damp = np.exp(-lam * v**-inv_b) if lam > 0 else 1.0
        return damp * om.tail(v**inv_a)

    hints = [q**p.alpha for q in om.breakpoints()]
    if lam > 0:
        hints.append(lam**p.beta)
    return p.K * integrate_0_inf(f, hints, **_QUAD_TOL).value


def psi(params: SumMaxStableParams, s, y=None) -> float:
    """Psi(s, y); accepts an EvalPoint or the pair (s, y).  y = inf is allowed."""
    pt = _point(s, y)
    s, y = pt.s, pt.y
    if y <= 0:
        return math.inf
    marginal = sum_exponent(params, s)
    if math.isinf(y):
        return marginal
    return marginal + y ** (-params.alpha) * (params.C + _mixing_integral(params, s, y))


def cl_transform(params: SumMaxStableParams, s, y=None) -> float:
    """exp(-Psi(s, y)) in [0, 1]."""
    return math.exp(-psi(params, s, y))


# ---------------------------------------------------------------------------
# closed forms of the worked families

def psi_complete_dependence(beta: float, s: float, y: float) -> float:
    """s^beta + y^-beta int_1^inf e^(-s t y) beta/Gamma(1-beta) t^(-beta-1) dt  (W = J)."""
    _check_closed(beta, s, y)
    if math.isinf(y):
        return s**beta
    g = gamma_fn(1.0 - beta)
    if s == 0:
        return y**-beta / g
    return s**beta + y**-beta * scaled_upper_gamma(beta, s * y) / g


def psi_normal_mix(beta: float, s: float, y: float) -> float:
    """s^beta + y^(-2 beta) int_0^inf e^(-s t y^2) P(N(0,t) > 1) beta/Gamma(1-beta) t^(-beta-1) dt."""
    _check_closed(beta, s, y)
    if math.isinf(y):
        return s**beta
    lam = s * y * y
    c = beta / gamma_fn(1.0 - beta)

    def f(t):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore"):
            return np.exp(-lam * t) * ndtr(-t**-0.5) * c * t ** (-beta - 1.0)

    hints = [1.0] + ([1.0 / lam] if lam > 0 else [])
    return s**beta + y ** (-2.0 * beta) * integrate_0_inf(f, hints, **_QUAD_TOL).value


def psi_frechet_mix_closed(beta: float, gamma: float, C1: float, s: float, y: float) -> float:
    """(s + C1 y^-gamma)^beta."""
    _check_closed(beta, s, y)
    if gamma <= 0 or C1 <= 0:
        raise ValueError("gamma and C1 must be positive")
    if math.isinf(y):
        return s**beta
    return (s + C1 * y**-gamma) ** beta


def _check_closed(beta, s, y):
    if not 0 < beta < 1:
        raise ValueError("beta must lie in (0, 1)")
    if not s >= 0:
        raise ValueError("s must be nonnegative")
    if not y > 0:
        raise ValueError("y must be positive")


# ---------------------------------------------------------------------------
# general extreme-value max marginal

class ExtremeValueTarget:
    """Max-marginal family; ``gamma_transform`` is y -> 1/(-log F_A(y))."""

    x0: float
    x1: float

    def cdf(self, y: float) -> float:
        raise NotImplementedError

    def gamma_transform(self, y: float) -> float:
        raise NotImplementedError


@dataclass(frozen=True)
class FrechetTarget(ExtremeValueTarget):
    """F_A(y) = exp(-(y/scale)^-alpha), y > 0."""

    alpha: float
    scale: float = 1.0
    x0: float = 0.0
    x1: float = math.inf

    def __post_init__(self):
        if not (self.alpha > 0 and self.scale > 0):
            raise ValueError("FrechetTarget needs alpha > 0 and scale > 0")

    def cdf(self, y):
        return math.exp(-((y / self.scale) ** -self.alpha)) if y > 0 else 0.0

    def gamma_transform(self, y):
        return (y / self.scale) ** self.alpha if y > 0 else 0.0


@dataclass(frozen=True)
class GumbelTarget(ExtremeValueTarget):
    """F_A(y) = exp(-exp(-(y - location)/scale))."""

    location: float = 0.0
    scale: float = 1.0
    x0: float = -math.inf
    x1: float = math.inf

    def __post_init__(self):
        if not (self.scale > 0 and math.isfinite(self.location)):
            raise ValueError("GumbelTarget needs a finite location and scale > 0")

    def cdf(self, y):
        return math.exp(-math.exp(-(y - self.location) / self.scale))

    def gamma_transform(self, y):
        if math.isinf(y):
            return math.inf if y > 0 else 0.0
        z = (y - self.location) / self.scale
        return math.exp(z) if z < 709.0 else math.inf


@dataclass(frozen=True)
class ReversedWeibullTarget(ExtremeValueTarget):
    """F_A(y) = exp(-((right_endpoint - y)/scale)^alpha) for y < right_endpoint."""

    alpha: float
    right_endpoint: float = 0.0
    scale: float = 1.0
    x0: float = -math.inf

    def __post_init__(self):
        if not (self.alpha > 0 and self.scale > 0 and math.isfinite(self.right_endpoint)):
            raise ValueError("ReversedWeibullTarget needs alpha > 0, scale > 0, finite endpoint")

    @property
    def x1(self):
        return self.right_endpoint

    def cdf(self, y):
        if y >= self.right_endpoint:
            return 1.0
        return math.exp(-(((self.right_endpoint - y) / self.scale) ** self.alpha))

    def gamma_transform(self, y):
        if y >= self.right_endpoint:
            return math.inf
        return ((self.right_endpoint - y) / self.scale) ** -self.alpha


def psi_general(params: SumMaxStableParams, target: ExtremeValueTarget, s: float, y: float) -> float:
    """Psi for the law whose max marginal follows ``target``.

    ``params`` describes the law on the 1-Frechet scale (alpha = 1); the
    result is that exponent evaluated at (s, Gamma(y)).
    """
    if params.alpha != 1.0:
        raise ValueError("psi_general expects params on the 1-Frechet scale (alpha = 1)")
    if not isinstance(target, ExtremeValueTarget):
        raise TypeError("target must be an ExtremeValueTarget")
    g = target.gamma_transform(y)
    if g <= 0:
        return math.inf
    return psi(params, s, g)


def independence_residual(params: SumMaxStableParams, s: float, y: float) -> float:
    """Psi(s, inf) + Psi(0, y) - Psi(s, y).

    Zero everywhere exactly when the sum and max of the limit are independent;
    otherwise positive, since this family is positively dependent.
    """
    return psi(params, s, math.inf) + psi(params, 0.0, y) - psi(params, s, y)
