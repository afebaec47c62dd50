"""Benchmark the augmented-Lagrangian kernel: numba @njit vs pure numpy.

Runs the same value/gradient evaluation on identical inputs through both
paths, checks they agree, and reports per-call timings. Usage:

    python benchmarks/bench_kernels.py [--n 6 8 10] [--repeats 2000]
"""

import argparse
import time

import numpy as np

from pivotgrowth.elimination import PivotStrategy
from pivotgrowth.search import random_cp_start
from pivotgrowth.search.kernels import (
    _al_numpy,
    _make_numba_kernel,
    build_system,
)


def _time_kernel(kernel, x, system, lam_eq, lam_ineq, mu, repeats):
    grad = np.empty_like(x)
    args = (x, system.eq_out, system.eq_cur, system.eq_left, system.eq_right,
            system.eq_piv, lam_eq, system.ineq_ent, system.ineq_piv,
            system.ineq_sign, lam_ineq, mu, grad)
    kernel(*args)  # warm up (numba: trigger compilation)
    t0 = time.perf_counter()
    for _ in range(repeats):
        value = kernel(*args)
    elapsed = time.perf_counter() - t0
    return value, grad.copy(), elapsed / repeats


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--n", type=int, nargs="+", default=[4, 6, 8, 10])
    parser.add_argument("--repeats", type=int, default=2000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    try:
        numba_kernel = _make_numba_kernel()
    except ImportError:
        numba_kernel = None
        print("numba unavailable; timing the numpy path only")

    rng = np.random.default_rng(args.seed)
    print(f"{'n':>4} {'vars':>6} {'numpy us':>10} {'numba us':>10} "
          f"{'speedup':>8}")
    for n in args.n:
        system = build_system(n, PivotStrategy.COMPLETE)
        x = random_cp_start(n, rng).x
        lam_eq = rng.standard_normal(system.n_eq)
        lam_ineq = np.abs(rng.standard_normal(system.n_ineq))
        mu = 10.0

        v_np, g_np, t_np = _time_kernel(
            _al_numpy, x, system, lam_eq, lam_ineq, mu, args.repeats)
        if numba_kernel is None:
            print(f"{n:>4} {system.nvars:>6} {t_np * 1e6:>10.2f} "
                  f"{'-':>10} {'-':>8}")
            continue
        v_nb, g_nb, t_nb = _time_kernel(
            numba_kernel, x, system, lam_eq, lam_ineq, mu, args.repeats)

        assert abs(v_np - v_nb) <= 1e-10 * max(1.0, abs(v_np)), \
            f"value mismatch at n={n}: {v_np} vs {v_nb}"
        assert np.allclose(g_np, g_nb, rtol=1e-10, atol=1e-12), \
            f"gradient mismatch at n={n}"
        print(f"{n:>4} {system.nvars:>6} {t_np * 1e6:>10.2f} "
              f"{t_nb * 1e6:>10.2f} {t_np / t_nb:>8.2f}x")


if __name__ == "__main__":
    main()
