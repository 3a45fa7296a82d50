"""Benchmark the compiled kernels against the pure NumPy fallback.

Runs the generic lasso solver and the pair-space solver on representative
problem sizes under both backends and prints a timing table.  Results are
checked to agree along the way, so this doubles as a smoke test of
backend equivalence at scale.

Usage: python benchmarks/backends.py [--quick]
"""

import argparse
import time

import numpy as np

from spcor import backend
from spcor.data import DataMatrix, standardize
from spcor.joint import max_penalty, solve_partial_corr
from spcor.networks import concentration_to_covariance, generate_network, sample_gaussian
from spcor.solver import SolverConfig, benchmark_instance, solve


def time_call(fn, repeats=3):
    best = np.inf
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def lasso_case(p, seed=1):
    problem = benchmark_instance(100, p, seed)
    # plain shooting is the heavier mode and exercises the kernel longest
    config = SolverConfig(tol=1e-6, max_sweeps=500000, mode="shooting")

    def runner():
        return solve(problem, config)

    return f"lasso n=100 p={p}", runner


def pair_case(modules, n, seed=2):
    spec = generate_network("hub", seed, modules=modules)
    cov = concentration_to_covariance(spec)
    Y = standardize(DataMatrix(sample_gaussian(cov.Sigma, n, seed + 1).values)).values
    p = Y.shape[1]
    lam = 0.35 * max_penalty(Y)
    sigma = np.ones(p)
    weights = np.ones(p)
    config = SolverConfig(tol=1e-6, max_sweeps=50000)

    def runner():
        theta, _, report = solve_partial_corr(Y, sigma, weights, lam, config)
        return report

    return f"pair space p={p} n={n}", runner


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--quick", action="store_true", help="smaller sizes, one repeat")
    args = parser.parse_args()

    if "c" not in backend.available_backends():
        raise SystemExit("compiled backend is not built; run pip install -e . first")

    repeats = 1 if args.quick else 3
    cases = [lasso_case(200), lasso_case(1000)]
    cases += [pair_case(1, 250)] + ([] if args.quick else [pair_case(2, 250)])

    print(f"{'case':24s} {'compiled':>12s} {'python':>12s} {'speedup':>8s}")
    for name, runner in cases:
        times = {}
        for b in ("c", "python"):
            with backend.use(b):
                times[b], report = time_call(runner, repeats)
        print(f"{name:24s} {times['c'] * 1e3:>10.2f}ms {times['python'] * 1e3:>10.2f}ms "
              f"{times['python'] / times['c']:>7.1f}x")


if __name__ == "__main__":
    main()
