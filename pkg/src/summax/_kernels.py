"""Sampling kernels.

Draws are produced block-wise: a block is a contiguous range of replicate
indices, and every pair draw is evaluated for the whole block at once.  The
hot integer work (counter hashing into uniforms, sum/max accumulation) has two
implementations selected by the ``SUMMAX_BACKEND`` environment variable:

* ``numba`` (default when importable): ``@njit`` loops;
* ``numpy``: ufunc expressions on uint64 arrays.

Transcendentals always go through numpy ufuncs, whose SIMD paths are faster
than scalar libm calls from compiled loops.  Both backends consume identical
random bits and produce identical samples.

Counter layout inside one replicate (pair number ``k``, base ``b``):
``b+5k`` angle, ``b+5k+1`` exponential for the stable draw, ``b+5k+2`` and
``b+5k+3`` mixing draw, ``b+5k+4`` independent Frechet component.  The
compound Poisson kernel reserves counter 0 for the Poisson count and uses
``b = 1``.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None

BLOCK = 1 << 16
CHUNK = 1 << 14
DRAWS_PER_PAIR = 5

OMEGA_POINT, OMEGA_DISCRETE, OMEGA_FRECHET, OMEGA_NORMAL = 0, 1, 2, 3

_G = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_ONE = np.uint64(1)
_S11 = np.uint64(11)
_S27 = np.uint64(27)
_S30 = np.uint64(30)
_S31 = np.uint64(31)
_INV53 = 2.0**-53
_HALF_PI = 0.5 * np.pi


# ---------------------------------------------------------------------------
# integer kernels, numpy flavour

def mix64(z):
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


def u01(keys, c):
    """Uniforms in (0, 1) from draw ``c`` of the replicates keyed by ``keys``."""
    with np.errstate(over="ignore"):
        z = mix64(keys + (np.uint64(c) + _ONE) * _G)
    return ((z >> _S11) + 0.5) * _INV53


def replicate_keys(base, start, m):
    idx = np.arange(m, dtype=np.uint64) + np.uint64(start)
    with np.errstate(over="ignore"):
        return mix64(np.uint64(base) + (idx + _ONE) * _G)


def _accumulate_np(s, mx, w, j):
    s += w
    np.maximum(mx, j, out=mx)


# ---------------------------------------------------------------------------
# integer kernels, numba flavour

if numba is not None:
    _jit = numba.njit(cache=True, nogil=True)

    @_jit
    def _u01_nb(keys, c):
        out = np.empty(keys.size)
        off = (np.uint64(c) + _ONE) * _G
        for i in range(keys.size):
            z = keys[i] + off
            z = (z ^ (z >> _S30)) * _M1
            z = (z ^ (z >> _S27)) * _M2
            z = z ^ (z >> _S31)
            out[i] = ((z >> _S11) + 0.5) * _INV53
        return out

    @_jit
    def _accumulate_nb(s, mx, w, j):
        for i in range(s.size):
            s[i] += w[i]
            if j[i] > mx[i]:
                mx[i] = j[i]


# ---------------------------------------------------------------------------
# draws (vectorised over a block; ``U(c)`` yields the c-th uniforms)

def powr(x, p):
    if p == 1.0:
        return x
    if p == 0.5:
        return np.sqrt(x)
    if p == 2.0:
        return x * x
    return x**p


def draw_stable(U, c, beta, scale):
    """Kanter's representation of E exp(-s S) = exp(-s**beta), times ``scale``.

    S = (A(th) / E)**((1-beta)/beta) with th uniform on (0, pi), E unit
    exponential and A(th) = sin((1-beta)th) sin(beta th)**(beta/(1-beta))
    / sin(th)**(1/(1-beta)).
    """
    th = U(c)
    e = np.log(U(c + 1))  # = -E
    if beta == 0.5:
        # A(th) / E collapses to 1 / (4 E cos^2(th/2))
        th *= _HALF_PI
        np.cos(th, out=th)
        th *= th
        th *= e
        np.divide(-0.25 * scale, th, out=th)
        return th
    loge = np.log(np.negative(e, out=e), out=e)
    th *= np.pi
    p = (1.0 - beta) / beta
    lw = np.log(np.sin((1.0 - beta) * th))
    lw -= loge
    lw *= p
    lw += np.log(np.sin(beta * th))
    lw -= np.log(np.sin(th)) / beta
    np.exp(lw, out=lw)
    lw *= scale
    return lw


def draw_mixing(U, c, okind, oa, ob, atoms, cumw):
    u = U(c)
    if okind == OMEGA_POINT:
        u.fill(oa)
        return u
    if okind == OMEGA_DISCRETE:
        idx = np.minimum(np.searchsorted(cumw, u, side="right"), atoms.size - 1)
        return atoms[idx]
    if okind == OMEGA_FRECHET:
        # (C1 / E)**(1/gamma)
        np.log(u, out=u)
        np.negative(u, out=u)
        np.log(u, out=u)
        u -= np.log(ob)
        u *= -1.0 / oa
        return np.exp(u, out=u)
    v = U(c + 1)
    np.log(u, out=u)
    u *= -2.0
    np.sqrt(u, out=u)
    v *= 2.0 * np.pi
    return u * np.cos(v, out=v)


def draw_frechet(U, c, C, inv_alpha):
    u = U(c)
    np.log(u, out=u)
    np.negative(u, out=u)
    np.log(u, out=u)
    u -= np.log(C)
    u *= -inv_alpha
    return np.exp(u, out=u)


def draw_pair(U, c, beta, scale, ratio, C, inv_alpha, okind, oa, ob, atoms, cumw):
    w = draw_stable(U, c, beta, scale)
    j = powr(w, ratio) * draw_mixing(U, c + 2, okind, oa, ob, atoms, cumw)
    if C > 0.0:
        np.maximum(j, draw_frechet(U, c + 4, C, inv_alpha), out=j)
    return w, j


def _uniform_source(keys):
    gen = _u01_nb if _backend == "numba" else u01
    return lambda c: gen(keys, c)


def _accumulate(s, mx, w, j):
    (_accumulate_nb if _backend == "numba" else _accumulate_np)(s, mx, w, j)


# ---------------------------------------------------------------------------
# block kernels: fill output slices for replicates start .. start+m-1

def _stable_block(base, start, m, beta, scale, out):
    for lo, hi, keys in _chunks_for(base, start, m):
        out[lo:hi] = draw_stable(_uniform_source(keys), 0, beta, scale)


def _frechet_block(base, start, m, C, inv_alpha, out):
    for lo, hi, keys in _chunks_for(base, start, m):
        out[lo:hi] = draw_frechet(_uniform_source(keys), 0, C, inv_alpha)


def _summax_block(base, start, m, n, pair_args, a_n, b_n, out_w, out_j):
    for lo, hi, keys in _chunks_for(base, start, m):
        U = _uniform_source(keys)
        s = np.zeros(hi - lo)
        mx = np.full(hi - lo, -np.inf)
        for k in range(n):
            w, j = draw_pair(U, DRAWS_PER_PAIR * k, *pair_args)
            _accumulate(s, mx, w, j)
        out_w[lo:hi] = a_n * s
        out_j[lo:hi] = b_n * mx


def poisson_counts(u, c):
    """Poisson(c) by sequential inversion of the uniforms ``u``."""
    p = np.full(u.shape, np.exp(-c))
    f = p.copy()
    n = np.zeros(u.shape, dtype=np.int64)
    active = u > f
    k = 0
    while active.any():
        k += 1
        p = np.where(active, p * c / k, p)
        f = np.where(active, f + p, f)
        n[active] = k
        # p > 0 guard: stop if the cumulative sum rounds below u forever
        active &= (u > f) & (p > 0.0)
    return n


def _cpoisson_block(base, start, m, c, x0, pair_args, out_w, out_j):
    for lo, hi, keys in _chunks_for(base, start, m):
        counts = poisson_counts(_uniform_source(keys)(0), c)
        s = np.zeros(hi - lo)
        mx = np.full(hi - lo, -np.inf)
        for k in range(int(counts.max(initial=0))):
            live = np.flatnonzero(counts > k)
            w, j = draw_pair(_uniform_source(keys[live]), 1 + DRAWS_PER_PAIR * k, *pair_args)
            s[live] += w
            mx[live] = np.maximum(mx[live], j)
        empty = counts == 0
        mx[empty] = x0
        out_w[lo:hi] = s
        out_j[lo:hi] = mx


def _chunks_for(base, start, m):
    for lo in range(0, m, CHUNK):
        hi = min(m, lo + CHUNK)
        yield lo, hi, replicate_keys(base, start + lo, hi - lo)


_KERNELS = {"stable": _stable_block, "frechet": _frechet_block,
            "summax": _summax_block, "cpoisson": _cpoisson_block}


# ---------------------------------------------------------------------------
# backend selection and block driver

_BACKENDS = ("numba", "numpy") if numba is not None else ("numpy",)
_backend = os.environ.get("SUMMAX_BACKEND", _BACKENDS[0]).lower()
if _backend not in _BACKENDS:
    raise ImportError(f"SUMMAX_BACKEND={_backend!r} is not available; choose from {_BACKENDS}")


def available_backends():
    return list(_BACKENDS)


def get_backend():
    return _backend


def set_backend(name):
    """Switch backend at runtime (benchmarks and cross-backend tests)."""
    global _backend
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r}")
    _backend = name


def run_blocks(kind, base, start, m, outs, *args, workers=1):
    """Fill ``outs`` for replicates ``start .. start+m-1``.

    Work is cut into blocks of ``BLOCK`` replicates and handed to ``workers``
    threads; block boundaries and worker count never influence the values.
    """
    fn = _KERNELS[kind]
    jobs = [(lo, min(m, lo + BLOCK)) for lo in range(0, m, BLOCK)]

    def one(job):
        lo, hi = job
        fn(base, start + lo, hi - lo, *args, *[o[lo:hi] for o in outs])

    if workers <= 1 or len(jobs) <= 1:
        for job in jobs:
            one(job)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(one, jobs))
