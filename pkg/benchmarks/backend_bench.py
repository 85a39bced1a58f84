#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Times the two hot kernels (direct convolution, anti-diagonal summation) on
batches of desk-scale inputs, then an end-to-end adversarial-pair campaign
under each backend.  The numba path is warmed before timing so compilation
is not measured.

Usage:
    python benchmarks/backend_bench.py [--batch 20000] [--trials 200]
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from ambiconv import _kernels  # noqa: E402


def time_kernel(fn, batch, *arrays_per_call):
    start = time.perf_counter()
    for args in arrays_per_call:
        for _ in range(batch):
            fn(*args)
    return time.perf_counter() - start


def bench_kernels(batch):
    rng = np.random.default_rng(0)
    conv_inputs = [
        (rng.uniform(-1, 1, m), rng.uniform(-1, 1, n)) for m, n in ((4, 4), (8, 12), (16, 16))
    ]
    lift_inputs = [(rng.uniform(-1, 1, (m, n)),) for m, n in ((4, 4), (8, 12), (16, 16))]

    rows = []
    if _kernels._HAVE_NUMBA:
        # warm the JIT outside the timed region
        _kernels._convolve_numba(*conv_inputs[0])
        _kernels._lift_numba(*lift_inputs[0])
        rows.append(
            ("convolve", "numba", time_kernel(_kernels._convolve_numba, batch, *conv_inputs))
        )
        rows.append(("lift", "numba", time_kernel(_kernels._lift_numba, batch, *lift_inputs)))
    rows.append(
        ("convolve", "numpy", time_kernel(_kernels._convolve_numpy, batch, *conv_inputs))
    )
    rows.append(("lift", "numpy", time_kernel(_kernels._lift_numpy, batch, *lift_inputs)))
    return rows


def bench_campaign(trials):
    code = (
        "import time; "
        "from ambiconv.trials import attack_suite; "
        f"t0 = time.perf_counter(); attack_suite({trials}, seed=1); "
        "print(time.perf_counter() - t0)"
    )
    rows = []
    backends = ["numpy"] + (["numba"] if _kernels._HAVE_NUMBA else [])
    for backend in backends:
        env = dict(os.environ, AMBICONV_BACKEND=backend)
        # warm run first so numba compilation (cached) is not measured
        subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
        out = subprocess.run(
            [sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True
        )
        rows.append((f"attack campaign ({trials} trials)", backend, float(out.stdout)))
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--batch", type=int, default=20000, help="calls per kernel size")
    parser.add_argument("--trials", type=int, default=200, help="campaign trial count")
    parser.add_argument("--skip-campaign", action="store_true")
    args = parser.parse_args()

    rows = bench_kernels(args.batch)
    if not args.skip_campaign:
        rows += bench_campaign(args.trials)

    print(f"{'workload':36s} {'backend':8s} {'seconds':>10s}")
    by_workload = {}
    for workload, backend, seconds in rows:
        print(f"{workload:36s} {backend:8s} {seconds:10.3f}")
        by_workload.setdefault(workload, {})[backend] = seconds
    for workload, timings in by_workload.items():
        if "numba" in timings and "numpy" in timings:
            ratio = timings["numpy"] / timings["numba"]
            print(f"{workload}: numba is {ratio:.2f}x the numpy fallback")


if __name__ == "__main__":
    main()
