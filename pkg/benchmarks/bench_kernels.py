"""Time the numba kernels against their numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat N]

Prints one line per kernel: best-of-N wall time for each path and the speedup.
The numba timings exclude compilation (one warm-up call first).
"""
import argparse
import time

import numpy as np

from inertia_value import _kernels as K


def best_of(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def swing_case():
    # one nadir scan of the k* search: 9 points, 60 s at 10 ms
    h = np.geomspace(1800.0, 9000.0, 9)
    r = 9.5e6 / h
    args = (10.0, 0.005 * 35000.0, 1800.0, 0.01, 6000)
    return (lambda: K._py_swing_nadirs(h, r, *args)), (lambda: K._nb_swing_nadirs(h, r, *args))


def trajectory_case():
    args = (4000.0, 2400.0, 10.0, 0.005 * 35000.0, 1800.0, 0.01, 6000)
    return (lambda: K._py_swing_trajectory(*args)), (lambda: K._nb_swing_trajectory(*args))


def simplex_case(m=60, n=80, seed=0):
    # feasible bounded LP in canonical form: max c.x, A x <= b, x >= 0, slack basis
    rng = np.random.default_rng(seed)
    a = rng.uniform(0.0, 1.0, (m, n))
    b = rng.uniform(n / 4, n / 2, m)
    c = rng.uniform(0.0, 1.0, n)
    tab0 = np.zeros((m + 1, n + m + 1))
    tab0[:m, :n] = a
    tab0[:m, n:n + m] = np.eye(m)
    tab0[:m, -1] = b
    tab0[m, :n] = -c
    basis0 = np.arange(n, n + m, dtype=np.int64)

    def run(fn):
        tab, basis = tab0.copy(), basis0.copy()
        status, _ = fn(tab, basis, n + m, 10000, 1e-9, 50)
        assert status == K.SIMPLEX_OPTIMAL
        return tab[m, -1]

    return (lambda: run(K._py_simplex_iterate)), (lambda: run(K._nb_simplex_iterate))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not K.HAVE_NUMBA:
        raise SystemExit("numba is not installed")
    print(f"{'kernel':<22}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>10}")
    for name, case in (("swing_nadirs x9", swing_case), ("swing_trajectory", trajectory_case),
                       ("simplex 60x80", simplex_case)):
        py, nb = case()
        nb()  # compile
        t_py = best_of(py, args.repeat)
        t_nb = best_of(nb, args.repeat)
        print(f"{name:<22}{1e3 * t_py:>12.2f}{1e3 * t_nb:>12.3f}{t_py / t_nb:>10.1f}")


if __name__ == "__main__":
    main()
