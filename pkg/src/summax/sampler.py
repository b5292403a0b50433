"""Seeded samplers: stable sums, Frechet maxima, dependent pairs and their aggregates.

A pair (W, J) is built as W one-sided beta-stable, Z ~ omega independent of W,
J = W^(beta/alpha) Z, and when C > 0 the max with an independent
Frechet(alpha, C) draw.  Such pairs lie in the strict sum-max domain of normal
attraction of the law with the same parameters, with norming n^(-1/beta) and
n^(-1/alpha).

Every sampler takes a :class:`RandomStream`, consumes ``size`` replicate
indices from it, and is reproducible bit for bit whatever ``workers`` is.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from . import _kernels
from .measures import Discrete, Frechet, PointMass, StdNormal, SumMaxStableParams
from .rng import RandomStream
from .special import gamma_fn

_DUMMY = np.zeros(1)


class PairSample(NamedTuple):
    w: float | np.ndarray
    j: float | np.ndarray


def stable_scale(beta: float, K: float) -> float:
    """(K Gamma(1-beta))^(1/beta): D = scale * S with E exp(-s S) = exp(-s^beta)."""
    return (K * gamma_fn(1.0 - beta)) ** (1.0 / beta)


def _pair_args(params: SumMaxStableParams):
    om = params.omega
    atoms, cumw = _DUMMY, _DUMMY
    oa = ob = 0.0
    if isinstance(om, PointMass):
        kind, oa = _kernels.OMEGA_POINT, om.u
    elif isinstance(om, Discrete):
        kind = _kernels.OMEGA_DISCRETE
        atoms, w = om.atoms()
        cumw = np.cumsum(w)
        cumw /= cumw[-1]
    elif isinstance(om, Frechet):
        kind, oa, ob = _kernels.OMEGA_FRECHET, om.gamma, om.scale
    elif isinstance(om, StdNormal):
        kind = _kernels.OMEGA_NORMAL
    else:  # pragma: no cover
        raise TypeError(f"no sampler for {type(om).__name__}")
    return (params.beta, stable_scale(params.beta, params.K), params.beta / params.alpha,
            params.C, 1.0 / params.alpha, kind, oa, ob, atoms, cumw)


def _run(kind, stream, size, n_out, *args, workers=1):
    m = 1 if size is None else int(size)
    if m < 0:
        raise ValueError("size must be nonnegative")
    outs = [np.empty(m) for _ in range(n_out)]
    start = stream.take(m)
    _kernels.run_blocks(kind, np.uint64(stream.key), start, m, outs, *args, workers=workers)
    if size is None:
        return [float(o[0]) for o in outs]
    return outs


def sample_one_sided_stable(beta: float, K: float, stream: RandomStream, size: int | None = None,
                            workers: int = 1):
    """D >= 0 with E exp(-s D) = exp(-K Gamma(1-beta) s^beta), by Kanter's method."""
    if not 0 < beta < 1 or not K > 0:
        raise ValueError("need 0 < beta < 1 and K > 0")
    (out,) = _run("stable", stream, size, 1, beta, stable_scale(beta, K), workers=workers)
    return out


def sample_frechet(alpha: float, C: float, stream: RandomStream, size: int | None = None,
                   workers: int = 1):
    """(C / E)^(1/alpha), E unit exponential: P(X <= x) = exp(-C x^-alpha)."""
    if not (alpha > 0 and C > 0):
        raise ValueError("need alpha > 0 and C > 0")
    (out,) = _run("frechet", stream, size, 1, float(C), 1.0 / alpha, workers=workers)
    return out


def sample_sum_max(params: SumMaxStableParams, n: int, stream: RandomStream,
                   size: int | None = None, workers: int = 1) -> PairSample:
    """(n^(-1/beta) sum W_i, n^(-1/alpha) max J_i) over n independent pairs."""
    n = int(n)
    if n < 1:
        raise ValueError("n must be at least 1")
    a_n = float(n) ** (-1.0 / params.beta)
    b_n = float(n) ** (-1.0 / params.alpha)
    w, j = _run("summax", stream, size, 2, n, _pair_args(params), a_n, b_n, workers=workers)
    return PairSample(w, j)


def sample_pair(params: SumMaxStableParams, stream: RandomStream, size: int | None = None,
                workers: int = 1) -> PairSample:
    """Raw pairs (W, J); the n = 1 case of :func:`sample_sum_max`."""
    return sample_sum_max(params, 1, stream, size, workers)


def sample_compound_poisson(c: float, params: SumMaxStableParams, stream: RandomStream,
                            x0: float = 0.0, size: int | None = None,
                            workers: int = 1) -> PairSample:
    """Sum and max of N ~ Poisson(c) raw pairs; (0, x0) when N = 0."""
    if not c > 0:
        raise ValueError("c must be positive")
    w, j = _run("cpoisson", stream, size, 2, float(c), float(x0), _pair_args(params),
                workers=workers)
    return PairSample(w, j)
