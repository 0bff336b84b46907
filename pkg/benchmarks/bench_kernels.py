"""Timing comparison of the compiled and pure-numpy scaled-arithmetic kernels.

Runs each primitive on identical inputs under both backends and prints a
table with the speedup.  The backend is selected per subprocess via the
MSUMMA_PURE environment variable, so this script re-executes itself once
with the flag set.

Usage: python3 benchmarks/bench_kernels.py [--n 200000] [--reps 20]
"""
import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np


def make_inputs(n, rng):
    m1 = rng.normal(size=n) + 1j * rng.normal(size=n)
    e1 = rng.integers(-50, 50, size=n)
    m2 = rng.normal(size=n) + 1j * rng.normal(size=n)
    e2 = rng.integers(-50, 50, size=n)
    return (np.ascontiguousarray(m1), np.ascontiguousarray(e1),
            np.ascontiguousarray(m2), np.ascontiguousarray(e2))


def bench(fn, reps):
    fn()  # warm up
    t0 = time.perf_counter()
    for _ in range(reps):
        fn()
    return (time.perf_counter() - t0) / reps


def run_backend(n, reps):
    from msumma import _kernels as K

    rng = np.random.default_rng(0)
    m1, e1, m2, e2 = make_inputs(n, rng)
    nm1, ne1 = K.normalize(m1, e1)
    nm2, ne2 = K.normalize(m2, e2)
    small_m, small_e = nm1[:400].copy(), ne1[:400].copy()

    results = {"backend": K.BACKEND}
    results["normalize"] = bench(lambda: K.normalize(m1, e1), reps)
    results["add"] = bench(lambda: K.add(nm1, ne1, nm2, ne2), reps)
    results["mul"] = bench(lambda: K.mul(nm1, ne1, nm2, ne2), reps)
    results["scale"] = bench(lambda: K.scale(nm1, ne1, 1.5 + 0.5j, 3), reps)
    results["axpy_shift"] = bench(
        lambda: K.axpy_shift(nm1, ne1, nm2, ne2, 2.0 + 1.0j, -2, 1), reps)
    results["eval_scaled"] = bench(
        lambda: K.eval_scaled(small_m, small_e, 0.3 + 0.1j, 0), reps)
    return results


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=200_000)
    ap.add_argument("--reps", type=int, default=20)
    ap.add_argument("--emit-json", action="store_true")
    args = ap.parse_args()

    if args.emit_json:
        print(json.dumps(run_backend(args.n, args.reps)))
        return

    here = run_backend(args.n, args.reps)
    env = dict(os.environ, MSUMMA_PURE="1")
    out = subprocess.run(
        [sys.executable, __file__, "--n", str(args.n), "--reps",
         str(args.reps), "--emit-json"],
        env=env, capture_output=True, text=True, check=True)
    pure = json.loads(out.stdout)

    if here["backend"] == pure["backend"]:
        print("compiled backend unavailable; both runs used the fallback")

    print(f"array length {args.n}, {args.reps} reps, times in ms\n")
    print(f"{'kernel':<12} {here['backend']:>10} {pure['backend']:>10} "
          f"{'speedup':>8}")
    for key in ("normalize", "add", "mul", "scale", "axpy_shift",
                "eval_scaled"):
        a, b = here[key] * 1e3, pure[key] * 1e3
        print(f"{key:<12} {a:>10.3f} {b:>10.3f} {b / a:>7.1f}x")


if __name__ == "__main__":
    main()
