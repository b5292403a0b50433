"""Command-line interface: ``summax {exponent,sample,converge,levy-mass}``.

Exit codes: 0 success, 1 a convergence gate failed, 2 invalid configuration,
3 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .empirical import convergence_report, dumps, format_float
from .exponent import psi
from .measures import SumMaxStableParams, atom_slice_mass, rect_mass, scale_levy_rect
from .rng import MASK64, RandomStream
from .sampler import sample_pair
from .special import QuadratureError

EXIT_OK, EXIT_GATE, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# argument parsing helpers

def _float_token(tok: str) -> float:
    tok = tok.strip()
    if tok.lower() in ("inf", "+inf"):
        return math.inf
    if tok.lower() == "-inf":
        return -math.inf
    try:
        v = float(tok)
    except ValueError:
        raise ConfigError(f"not a number: {tok!r}") from None
    if math.isnan(v):
        raise ConfigError("NaN is not allowed")
    return v


def parse_grid(text: str) -> list[float]:
    """``v``, ``v1,v2,...`` or ``a:b:k`` (k evenly spaced points).

    With ``b = inf`` the range ``a:inf:k`` means a, 2a, ..., 2^(k-2) a, inf.
    """
    text = text.strip()
    if ":" not in text:
        return [_float_token(t) for t in text.split(",") if t.strip()]
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"grid range must be a:b:k, got {text!r}")
    a, b = _float_token(parts[0]), _float_token(parts[1])
    try:
        k = int(parts[2])
    except ValueError:
        raise ConfigError(f"grid count must be an integer, got {parts[2]!r}") from None
    if k < 1 or not math.isfinite(a):
        raise ConfigError(f"bad grid range {text!r}")
    if math.isinf(b):
        if b < 0 or a <= 0:
            raise ConfigError("a:inf:k needs a > 0")
        return [a * 2.0**i for i in range(k - 1)] + [math.inf]
    if k == 1:
        return [a]
    return np.linspace(a, b, k).tolist()


def parse_counts(text: str) -> list[int]:
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        try:
            v = float(tok)
        except ValueError:
            raise ConfigError(f"not a count: {tok!r}") from None
        if v != int(v) or v < 0:
            raise ConfigError(f"not a count: {tok!r}")
        out.append(int(v))
    if not out:
        raise ConfigError("empty count list")
    return out


def parse_rects(text: str) -> list[tuple[float, float]]:
    rects = []
    for item in text.split(";"):
        if not item.strip():
            continue
        parts = item.split(",")
        if len(parts) != 2:
            raise ConfigError(f"rectangle must be r,x got {item!r}")
        r, x = (_float_token(p) for p in parts)
        if r < 0 or x < 0:
            raise ConfigError(f"rectangle corners must be nonnegative: {item!r}")
        if r == 0 and x == 0:
            raise ConfigError("rectangle 0,0 is not bounded away from the origin")
        rects.append((r, x))
    return rects


def load_params(path: str) -> SumMaxStableParams:
    try:
        with open(path) as fh:
            return SumMaxStableParams.from_dict(json.load(fh))
    except (OSError, json.JSONDecodeError, ValueError, TypeError) as exc:
        raise ConfigError(f"{path}: {exc}") from None


def _seed(v: str) -> int:
    try:
        s = int(v, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {v!r}") from None
    if not 0 <= s <= MASK64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return s


def _write(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# commands

def cmd_exponent(args) -> int:
    params = load_params(args.params)
    ss, ys = parse_grid(args.grid_s), parse_grid(args.grid_y)
    if any(s < 0 or math.isinf(s) for s in ss):
        raise ConfigError("grid-s values must be finite and nonnegative")
    lines = ["s,y,psi,cl"]
    for y in ys:
        for s in ss:
            try:
                v = psi(params, s, y)
            except QuadratureError as exc:
                print(f"quadrature failure at s={s!r}, y={y!r}: {exc}", file=sys.stderr)
                return EXIT_NUMERIC
            lines.append(",".join(format_float(t) for t in (s, y, v, math.exp(-v))))
    _write(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_sample(args) -> int:
    params = load_params(args.params)
    m = args.m
    if m < 0:
        raise ConfigError("m must be nonnegative")
    stream = RandomStream(args.seed, args.stream)
    lines = [f"# seed={args.seed},stream={args.stream}", "w,j"]
    if m:
        w, j = sample_pair(params, stream, size=m, workers=args.workers)
        lines.extend(f"{format_float(a)},{format_float(b)}" for a, b in zip(w.tolist(), j.tolist()))
    _write(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_converge(args) -> int:
    params = load_params(args.params)
    target = load_params(args.target_params) if args.target_params else None
    ss, ys = parse_grid(args.grid_s), parse_grid(args.grid_y)
    if any(s < 0 or math.isinf(s) for s in ss):
        raise ConfigError("grid-s values must be finite and nonnegative")
    n_values = parse_counts(args.n)
    if min(n_values) < 1 or args.m < 1:
        raise ConfigError("n and m must be positive")
    eps = [_float_token(t) for t in args.eps.split(",") if t.strip()]
    if any(not (e > 0 and math.isfinite(e)) for e in eps):
        raise ConfigError("epsilons must be positive and finite")
    rects = parse_rects(args.rect)
    report = convergence_report(params, n_values, args.m, [(s, y) for y in ys for s in ss], rects, eps,
                                RandomStream(args.seed), workers=args.workers, target=target)
    _write(args.out, dumps(report.to_dict()))
    return EXIT_OK if report.passed else EXIT_GATE


def cmd_levy_mass(args) -> int:
    params = load_params(args.params)
    rects = parse_rects(args.rect)
    lines = ["r,x,eta_rect,eta_atom_slice,scaling_check"]
    for r, x in rects:
        rect = rect_mass(params, r, x)
        # the atom slice sits on t = 0, so only rectangles with r = 0 contain it
        slice_ = atom_slice_mass(params, x) if r == 0 else 0.0
        total = rect + slice_
        scaled = scale_levy_rect(params, 2.0, r, x)
        ok = math.isclose(scaled, 2.0 * total, rel_tol=1e-9, abs_tol=1e-300)
        lines.append(",".join([format_float(r), format_float(x), format_float(rect), format_float(slice_),
                               "ok" if ok else "FAIL"]))
    _write(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="summax", description="Sum-max stable laws: exponents, sampling, diagnostics.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, grid=False):
        sp.add_argument("--params", required=True, help="parameter JSON file")
        sp.add_argument("--out", default=None, help="output file (default stdout)")
        if grid:
            sp.add_argument("--grid-s", default="0.1,0.5,1,2", help="s values: v | v1,v2 | a:b:k")
            sp.add_argument("--grid-y", default="0.5,1,2,4", help="y values; 'inf' allowed")

    e = sub.add_parser("exponent", help="evaluate Psi and exp(-Psi) on a grid")
    common(e, grid=True)
    e.set_defaults(func=cmd_exponent)

    s = sub.add_parser("sample", help="dump raw (w, j) pairs")
    common(s)
    s.add_argument("--m", type=int, default=1000)
    s.add_argument("--seed", type=_seed, default=0)
    s.add_argument("--stream", type=_seed, default=0)
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_sample)

    c = sub.add_parser("converge", help="Monte Carlo convergence report (JSON)")
    common(c, grid=True)
    c.add_argument("--n", default="16,256,4096", help="comma-separated block sizes")
    c.add_argument("--m", type=int, default=100_000, help="replicates per n")
    c.add_argument("--rect", default="1,1;1,0;0,1", help="rectangles r,x[;r,x...]")
    c.add_argument("--eps", default="1,0.5,0.1", help="truncation levels")
    c.add_argument("--seed", type=_seed, default=0)
    c.add_argument("--workers", type=int, default=1)
    c.add_argument("--target-params", default=None, help="theoretical law to compare against")
    c.set_defaults(func=cmd_converge)

    lm = sub.add_parser("levy-mass", help="Lévy masses of rectangles")
    common(lm)
    lm.add_argument("--rect", required=True, help="rectangles r,x[;r,x...]")
    lm.set_defaults(func=cmd_levy_mass)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except QuadratureError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
