#!/usr/bin/env python3
"""Benchmark the compiled assignment kernel against the pure-numpy fallback.

Also times one end-to-end Frank-Wolfe match per backend, since the
assignment solve dominates its runtime.

Usage: python benchmarks/bench_lap.py [--sizes 50,100,200,400,800] [--repeats 3]
"""

import argparse
import time

import numpy as np

from sgmatch import lap
from sgmatch.graphs import CorrelatedPairSpec, Seeding, generate_correlated_pair
from sgmatch.matchers import sgm_match


def time_solves(kernel, sizes, repeats, rng):
    rows = []
    for n in sizes:
        best = np.inf
        for _ in range(repeats):
            m = rng.uniform(-1.0, 1.0, (n, n))
            start = time.perf_counter()
            lap.solve_max_trace(m, kernel=kernel)
            best = min(best, time.perf_counter() - start)
        rows.append((n, best))
    return rows


def time_match(backend_env, n=200, s=20):
    g1, g2 = generate_correlated_pair(CorrelatedPairSpec(n, 0.5, 0.6, 99))
    start = time.perf_counter()
    res = sgm_match(g1, g2, Seeding(s, n - s))
    return time.perf_counter() - start, res.iterations


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="50,100,200,400,800")
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()
    sizes = [int(x) for x in args.sizes.split(",")]

    kernels = lap.available_backends()
    print(f"active backend: {lap.backend()}; available: {sorted(kernels)}")
    results = {}
    for name, kernel in sorted(kernels.items()):
        rng = np.random.default_rng(0)
        results[name] = dict(time_solves(kernel, sizes, args.repeats, rng))

    header = "n".rjust(6) + "".join(name.rjust(14) for name in sorted(results))
    if len(results) > 1:
        header += "speedup".rjust(12)
    print(header)
    for n in sizes:
        row = f"{n:6d}"
        for name in sorted(results):
            row += f"{results[name][n] * 1000:12.2f}ms"
        if len(results) > 1:
            row += f"{results['python'][n] / results['cython'][n]:11.1f}x"
        print(row)

    # correctness spot check: identical output across backends
    rng = np.random.default_rng(1)
    m = rng.uniform(-1, 1, (300, 300))
    outs = [lap.solve_max_trace(m, kernel=k) for k in kernels.values()]
    assert all(np.array_equal(outs[0][0], o[0]) and outs[0][1] == o[1] for o in outs)
    print("backends agree on a 300x300 spot check")

    wall, iters = time_match(None)
    print(f"end-to-end match n=200 s=20 ({lap.backend()} backend): "
          f"{wall:.2f}s over {iters} iterations")


if __name__ == "__main__":
    main()
