"""Parametrization of sum-max stable laws and exact Lévy-measure masses.

A law is described by ``(beta, alpha, C, K, omega)``.  Its Lévy measure is

    eta(dt, dx) = eps_0(dt) C alpha x^(-alpha-1) dx
                  + 1{t > 0} (t^(beta/alpha) omega)(dx) K beta t^(-beta-1) dt,

where ``t^(beta/alpha) omega`` is the image of ``omega`` under u -> t^(beta/alpha) u.
Masses are exposed on rectangles (r, inf) x (x, inf) only.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, ClassVar

import numpy as np
from scipy.special import ndtr, ndtri

from .special import gamma_fn, integrate_0_inf

_QUAD_TOL = dict(epsabs=1e-15, epsrel=1e-12)


# ---------------------------------------------------------------------------
# mixing measures

class MixingMeasure:
    """Probability measure on the real line that mixes the max coordinate."""

    kind: ClassVar[str]

    def tail(self, z):
        """omega((z, inf)), vectorised over ``z``."""
        raise NotImplementedError

    def positive_mass(self) -> float:
        return float(self.tail(0.0))

    def moment(self, alpha: float) -> float:
        """int_0^inf u^alpha omega(du)."""
        raise NotImplementedError

    def breakpoints(self) -> tuple[float, ...]:
        """Quartiles of omega restricted to (0, inf); used as quadrature hints."""
        return ()

    def power(self, p: float) -> MixingMeasure:
        """Image measure under u -> sign(u) |u|^p."""
        raise NotImplementedError(f"{self.kind} is not closed under powers")

    @property
    def is_atomic(self) -> bool:
        return False

    def atoms(self) -> tuple[np.ndarray, np.ndarray]:
        raise TypeError(f"{self.kind} has no atoms")

    def to_dict(self) -> dict[str, Any]:
        raise NotImplementedError


@dataclass(frozen=True)
class PointMass(MixingMeasure):
    u: float
    kind: ClassVar[str] = "point_mass"

    def __post_init__(self):
        _check_real("u", self.u)
        if self.u < 0:
            raise ValueError("PointMass needs u >= 0")

    def tail(self, z):
        return np.where(np.asarray(z) < self.u, 1.0, 0.0)

    def moment(self, alpha):
        return self.u**alpha if self.u > 0 else 0.0

    def power(self, p):
        return PointMass(self.u**p)

    @property
    def is_atomic(self):
        return True

    def atoms(self):
        return np.array([float(self.u)]), np.array([1.0])

    def to_dict(self):
        return {"kind": self.kind, "u": self.u}


@dataclass(frozen=True)
class Discrete(MixingMeasure):
    atoms_: tuple[tuple[float, float], ...]
    kind: ClassVar[str] = "discrete"

    def __init__(self, atoms):
        pairs = tuple((float(u), float(w)) for u, w in atoms)
        if not pairs:
            raise ValueError("Discrete needs at least one atom")
        for u, w in pairs:
            _check_real("atom", u)
            if not (w > 0 and math.isfinite(w)):
                raise ValueError("Discrete weights must be strictly positive")
        if abs(math.fsum(w for _, w in pairs) - 1.0) > 1e-12:
            raise ValueError("Discrete weights must sum to 1")
        object.__setattr__(self, "atoms_", pairs)

    def tail(self, z):
        u, w = self.atoms()
        z = np.asarray(z, dtype=float)
        return (w * (u > z[..., None])).sum(axis=-1)

    def moment(self, alpha):
        u, w = self.atoms()
        pos = u > 0
        return math.fsum(w[pos] * u[pos] ** alpha)

    def power(self, p):
        return Discrete([(math.copysign(abs(u) ** p, u), w) for u, w in self.atoms_])

    @property
    def is_atomic(self):
        return True

    def atoms(self):
        arr = np.array(self.atoms_)
        return arr[:, 0].copy(), arr[:, 1].copy()

    def to_dict(self):
        return {"kind": self.kind, "atoms": [[u, w] for u, w in self.atoms_]}


@dataclass(frozen=True)
class Frechet(MixingMeasure):
    """CDF exp(-scale * z^(-gamma)) on z > 0."""

    gamma: float
    scale: float = 1.0
    kind: ClassVar[str] = "frechet"

    def __post_init__(self):
        _check_real("gamma", self.gamma)
        _check_real("scale", self.scale)
        if self.gamma <= 0 or self.scale <= 0:
            raise ValueError("Frechet needs gamma > 0 and scale > 0")

    def tail(self, z):
        z = np.asarray(z, dtype=float)
        with np.errstate(divide="ignore", over="ignore"):
            return np.where(z > 0, -np.expm1(-self.scale * z ** (-self.gamma)), 1.0)

    def positive_mass(self):
        return 1.0

    def moment(self, alpha):
        if alpha >= self.gamma:
            return math.inf
        return self.scale ** (alpha / self.gamma) * gamma_fn(1.0 - alpha / self.gamma)

    def quantile(self, p):
        return (self.scale / -np.log(p)) ** (1.0 / self.gamma)

    def breakpoints(self):
        return tuple(float(self.quantile(p)) for p in (0.25, 0.5, 0.75))

    def power(self, p):
        return Frechet(self.gamma / p, self.scale)

    def to_dict(self):
        return {"kind": self.kind, "gamma": self.gamma, "scale": self.scale}


@dataclass(frozen=True)
class StdNormal(MixingMeasure):
    kind: ClassVar[str] = "std_normal"

    def tail(self, z):
        return ndtr(-np.asarray(z, dtype=float))

    def positive_mass(self):
        return 0.5

    def moment(self, alpha):
        # half of E|Z|^alpha
        return 2.0 ** (alpha / 2) * gamma_fn((alpha + 1) / 2) / (2.0 * math.sqrt(math.pi))

    def breakpoints(self):
        return tuple(float(ndtri(0.5 + 0.5 * p)) for p in (0.25, 0.5, 0.75))

    def to_dict(self):
        return {"kind": self.kind}


_OMEGA_FIELDS = {
    "point_mass": (PointMass, ("u",)),
    "discrete": (Discrete, ("atoms",)),
    "frechet": (Frechet, ("gamma", "scale")),
    "std_normal": (StdNormal, ()),
}


def omega_from_dict(d: dict) -> MixingMeasure:
    if not isinstance(d, dict) or "kind" not in d:
        raise ValueError("omega must be an object with a 'kind' field")
    try:
        cls, fields = _OMEGA_FIELDS[d["kind"]]
    except (KeyError, TypeError):
        raise ValueError(f"unknown omega kind {d['kind']!r}") from None
    extra = set(d) - {"kind", *fields}
    missing = set(fields) - set(d)
    if extra or missing:
        raise ValueError(f"omega[{d['kind']}]: unknown fields {sorted(extra)}, missing {sorted(missing)}")
    if cls is Discrete:
        atoms = d["atoms"]
        if not isinstance(atoms, list) or not all(isinstance(a, list) and len(a) == 2 for a in atoms):
            raise ValueError("discrete atoms must be a list of [u, w] pairs")
        for a in atoms:
            for v in a:
                _check_number(v)
        return Discrete(atoms)
    for f in fields:
        _check_number(d[f])
    return cls(*(float(d[f]) for f in fields))


def _check_number(v):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ValueError(f"expected a number, got {v!r}")


def _pow(a, b):
    """a ** b that saturates to inf instead of raising OverflowError."""
    with np.errstate(over="ignore", divide="ignore"):
        return float(np.power(np.float64(a), b))


def _check_real(name, v):
    if not math.isfinite(v):
        raise ValueError(f"{name} must be finite")


# ---------------------------------------------------------------------------
# parameters

@dataclass(frozen=True)
class ScalingExponent:
    """Diagonal of the exponent E with t * eta = t^E eta."""

    inv_beta: float
    inv_alpha: float


@dataclass(frozen=True)
class SumMaxStableParams:
    beta: float
    alpha: float
    C: float
    K: float
    omega: MixingMeasure = field(compare=True)

    _FIELDS: ClassVar[tuple[str, ...]] = ("beta", "alpha", "C", "K", "omega")

    def __post_init__(self):
        for name in ("beta", "alpha", "C", "K"):
            _check_real(name, getattr(self, name))
        if not 0 < self.beta < 1:
            raise ValueError(f"beta must lie in (0, 1), got {self.beta}")
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if self.K <= 0:
            raise ValueError("K must be positive")
        if self.C < 0:
            raise ValueError("C must be nonnegative")
        if not isinstance(self.omega, MixingMeasure):
            raise TypeError("omega must be a MixingMeasure")
        if self.C == 0 and self.omega.positive_mass() <= 0:
            raise ValueError("degenerate max part: need C > 0 or omega((0, inf)) > 0")
        if isinstance(self.omega, Frechet) and self.alpha >= self.omega.gamma:
            raise ValueError(f"moment condition fails: alpha={self.alpha} >= gamma={self.omega.gamma}")

    @property
    def scaling(self) -> ScalingExponent:
        return ScalingExponent(1.0 / self.beta, 1.0 / self.alpha)

    def m_alpha(self) -> float:
        return self.omega.moment(self.alpha)

    def frechet_scale(self) -> float:
        """C + K m_alpha: the limit max marginal has CDF exp(-(C + K m_alpha) y^-alpha)."""
        return self.C + self.K * self.m_alpha()

    def replace(self, **changes) -> SumMaxStableParams:
        d = {f: getattr(self, f) for f in self._FIELDS}
        d.update(changes)
        return SumMaxStableParams(**d)

    def to_dict(self) -> dict[str, Any]:
        return {"beta": self.beta, "alpha": self.alpha, "C": self.C, "K": self.K,
                "omega": self.omega.to_dict()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> SumMaxStableParams:
        if not isinstance(d, dict):
            raise ValueError("parameters must be a JSON object")
        extra = set(d) - set(cls._FIELDS)
        missing = set(cls._FIELDS) - set(d)
        if extra or missing:
            raise ValueError(f"parameters: unknown fields {sorted(extra)}, missing {sorted(missing)}")
        for name in ("beta", "alpha", "C", "K"):
            _check_number(d[name])
        return cls(float(d["beta"]), float(d["alpha"]), float(d["C"]), float(d["K"]),
                   omega_from_dict(d["omega"]))

    @classmethod
    def from_json(cls, text: str) -> SumMaxStableParams:
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class LevyRepresentation:
    """The triple [x0, a, eta]; eta is carried analytically by ``params``."""

    params: SumMaxStableParams
    x0: float = 0.0
    drift_a: float = 0.0

    def __post_init__(self):
        if self.drift_a < 0:
            raise ValueError("drift must be nonnegative")

    def mass(self, r: float, x: float) -> float:
        return levy_mass(self.params, r, x)


# ---------------------------------------------------------------------------
# masses

def omega_tail(omega: MixingMeasure, z: float) -> float:
    """omega((z, inf)) for z > 0."""
    if not z > 0:
        raise ValueError("z must be positive")
    return float(omega.tail(z))


def atom_slice_mass(params: SumMaxStableParams, x: float) -> float:
    """eta({0} x (x, inf)) = C x^-alpha."""
    if not x > 0:
        raise ValueError("x must be positive")
    return params.C * _pow(x, -params.alpha)


def _check_rect(r, x):
    if r < 0 or x < 0 or math.isnan(r) or math.isnan(x):
        raise ValueError("rectangle corners must be nonnegative")
    if r == 0 and x == 0:
        raise ValueError("rectangle (0, inf) x (0, inf) is not bounded away from the origin")


def rect_mass(params: SumMaxStableParams, r: float, x: float) -> float:
    """eta((r, inf) x (x, inf)) from the t > 0 part of eta.

    Equals K int_{u > 0} min(r^-beta, (u/x)^alpha) omega(du); atoms at u <= 0
    never contribute.
    """
    _check_rect(r, x)
    p = params
    cap = math.inf if r == 0 else _pow(r, -p.beta)
    if math.isinf(x):
        return 0.0
    if x == 0:
        return p.K * cap * p.omega.positive_mass()
    om = p.omega
    if om.is_atomic:
        u, w = om.atoms()
        pos = u > 0
        with np.errstate(over="ignore"):
            return p.K * math.fsum(w[pos] * np.minimum(cap, (u[pos] / x) ** p.alpha))
    # layer-cake form: K int_0^cap omega((x w^(1/alpha), inf)) dw
    inv_a = 1.0 / p.alpha

    def f(w):
        with np.errstate(over="ignore"):
            return om.tail(x * np.asarray(w) ** inv_a)

    hints = [_pow(q / x, p.alpha) for q in om.breakpoints()]
    return p.K * integrate_0_inf(f, hints, upper=cap, **_QUAD_TOL).value


def levy_mass(params: SumMaxStableParams, r: float, x: float) -> float:
    """eta of the rectangle, closed on the t side when r = 0 (atom slice included)."""
    _check_rect(r, x)
    m = rect_mass(params, r, x)
    if r == 0:
        m += atom_slice_mass(params, x)
    return m


def scale_levy_rect(params: SumMaxStableParams, t: float, r: float, x: float) -> float:
    """eta(t^-E B) for B = (r, inf) x (x, inf); equals t * eta(B)."""
    if not t > 0:
        raise ValueError("t must be positive")
    _check_rect(r, x)
    return levy_mass(params, _pow(t, -1.0 / params.beta) * r, _pow(t, -1.0 / params.alpha) * x)


# ---------------------------------------------------------------------------
# the three worked families

def complete_dependence_params(beta: float) -> SumMaxStableParams:
    """W = J: alpha = beta, omega = eps_1, K = 1/Gamma(1-beta), C = 0."""
    return SumMaxStableParams(beta, beta, 0.0, 1.0 / gamma_fn(1.0 - beta), PointMass(1.0))


def normal_mix_params(beta: float) -> SumMaxStableParams:
    """J = W^(1/2) Z with Z standard normal: alpha = 2 beta."""
    return SumMaxStableParams(beta, 2.0 * beta, 0.0, 1.0 / gamma_fn(1.0 - beta), StdNormal())


def frechet_mix_params(beta: float, gamma: float, C1: float = 1.0) -> SumMaxStableParams:
    """J = W^(1/gamma) Z with Z Frechet(gamma, C1): alpha = beta gamma."""
    return SumMaxStableParams(beta, beta * gamma, 0.0, 1.0 / gamma_fn(1.0 - beta), Frechet(gamma, C1))
