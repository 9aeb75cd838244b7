"""Benchmark the compiled replicator kernel against the pure-Python fallback.

Runs a fixed number of replicator iterations on random payoff matrices of
increasing size and reports the per-step time for each backend.

    python benchmarks/bench_replicator.py --sizes 50 100 200 400 --iters 500
"""

import argparse
import time

import numpy as np

from cdsfuse._kernels import BACKEND, replicator as selected_replicator
from cdsfuse._kernels.fallback import replicator as python_replicator


def make_payoff(m: int, rng: np.random.Generator) -> np.ndarray:
    A = rng.uniform(0.0, 1.0, (m, m))
    A = (A + A.T) / 2.0
    np.fill_diagonal(A, 0.0)
    return np.ascontiguousarray(A)


def time_backend(fn, P: np.ndarray, iters: int, repeats: int) -> float:
    x0 = np.full(P.shape[0], 1.0 / P.shape[0])
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(P, x0, 0.0, iters)
        best = min(best, (time.perf_counter() - t0) / iters)
    return best


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+",
                        default=[50, 100, 200, 400])
    parser.add_argument("--iters", type=int, default=500)
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    print(f"selected backend: {BACKEND}")
    print(f"{'m':>6} {'python us/step':>16} {BACKEND + ' us/step':>16} "
          f"{'speedup':>8}")
    for m in args.sizes:
        P = make_payoff(m, rng)
        t_py = time_backend(python_replicator, P, args.iters, args.repeats)
        t_sel = time_backend(selected_replicator, P, args.iters, args.repeats)
        print(f"{m:>6} {t_py * 1e6:>16.2f} {t_sel * 1e6:>16.2f} "
              f"{t_py / t_sel:>8.2f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
