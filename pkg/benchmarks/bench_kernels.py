"""Compare the numba and numpy sampling backends.

    python benchmarks/bench_kernels.py [--m 16384] [--n 1024]

Reports nanoseconds per simulated pair for each backend and checks that both
backends return bit-identical samples.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from summax import _kernels
from summax.measures import SumMaxStableParams, StdNormal, complete_dependence_params, frechet_mix_params
from summax.rng import RandomStream
from summax.sampler import sample_sum_max

CASES = {
    "complete dependence, beta=0.5": complete_dependence_params(0.5),
    "normal mixing, beta=0.5": SumMaxStableParams(0.5, 1.0, 0.0, 1.0, StdNormal()),
    "normal mixing, beta=0.3": SumMaxStableParams(0.3, 0.6, 0.0, 1.0, StdNormal()),
    "frechet mixing, gamma=1.5, C=1": frechet_mix_params(0.5, 1.5).replace(C=1.0),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m", type=int, default=1 << 14, help="replicates")
    ap.add_argument("--n", type=int, default=1024, help="pairs per replicate")
    args = ap.parse_args()
    backends = _kernels.available_backends()
    print(f"backends: {', '.join(backends)}; m={args.m}, n={args.n}")
    for name, params in CASES.items():
        results = {}
        line = [f"{name:34s}"]
        for be in backends:
            _kernels.set_backend(be)
            sample_sum_max(params, 2, RandomStream(0), size=8)  # warm up / compile
            t0 = time.perf_counter()
            results[be] = sample_sum_max(params, args.n, RandomStream(1), size=args.m)
            dt = time.perf_counter() - t0
            line.append(f"{be}: {dt / (args.m * args.n) * 1e9:6.1f} ns/pair")
        ref = results[backends[0]]
        same = all(np.array_equal(ref.w, r.w) and np.array_equal(ref.j, r.j) for r in results.values())
        line.append("identical" if same else "MISMATCH")
        print("  ".join(line))


if __name__ == "__main__":
    main()
