#!/usr/bin/env python3
"""Benchmark the numba-compiled hot kernels against the pure-numpy fallback.

Runs the batch kernel evaluations through both implementations in one
process (via halfpot._backend.get_impl) and one end-to-end quadrature with
the currently active backend.  Select the active backend for the
end-to-end row with HALFPOT_BACKEND=numba|numpy.

Usage: python benchmarks/bench_backends.py [--n-points 200000] [--k 6]
"""

import argparse
import time

import numpy as np

from halfpot import _backend
from halfpot.analysis import check_poisson_normalization
from halfpot.special_fn import sphere_volume


def timeit(fn, repeats=5):
    fn()  # warm-up (numba compilation)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n-points", type=int, default=200_000)
    ap.add_argument("--k", type=int, default=6)
    args = ap.parse_args()

    rng = np.random.default_rng(42)
    yp = rng.uniform(-50.0, 50.0, size=(args.n_points, 2))
    y = np.array([0.3, -0.2])
    t = rng.uniform(-1.0, 1.0, size=args.n_points)
    n, x = 3, 0.7
    pref = 1.0 / ((2.0 - n) * sphere_volume(n))

    impls = {name: _backend.get_impl(name) for name in ("numpy", "numba")}
    cases = {
        "single_layer_vals": lambda im: im.single_layer_vals(x, y, yp, n, pref),
        "double_layer_vals": lambda im: im.double_layer_vals(
            x, y, yp, n, 1.0 / sphere_volume(n)),
        f"mod_correction_single(k={args.k})": lambda im: im.mod_correction_single(
            x, y, yp, n, args.k, 1.0, 2.0, pref),
        f"mod_correction_double(k={args.k})": lambda im: im.mod_correction_double(
            x, y, yp, n, args.k, 1.0, 2.0, 1.0 / sphere_volume(n)),
        "gegenbauer_vals(m=12)": lambda im: im.gegenbauer_vals(1.5, 12, t),
    }

    print(f"batch size {args.n_points}; times are best of 5 (seconds)")
    print(f"{'kernel':<34} {'numpy':>10} {'numba':>10} {'speedup':>8}")
    for label, call in cases.items():
        ts = {}
        for name, im in impls.items():
            ts[name] = timeit(lambda im=im: call(im))
        a, b = np.asarray(call(impls["numpy"])), np.asarray(call(impls["numba"]))
        # libm vs vectorised exp differ by ulps inside the cutoff transition
        assert np.allclose(a, b, rtol=1e-9, atol=1e-15), f"{label}: mismatch"
        print(f"{label:<34} {ts['numpy']:>10.4f} {ts['numba']:>10.4f} "
              f"{ts['numpy'] / ts['numba']:>7.1f}x")

    t0 = time.perf_counter()
    rep = check_poisson_normalization(xs=(0.01, 0.1, 1.0))
    dt = time.perf_counter() - t0
    print(f"\nend-to-end poisson normalization ({_backend.active_backend()} "
          f"backend): {dt:.2f}s, pass={rep.passed}")


if __name__ == "__main__":
    main()
