"""Benchmark the stochastic scan kernel: compiled extension vs numpy fallback.

The scan is the hot inner loop of the collapse ensemble (one uniform
variate per trajectory and step).  Run:

    python benchmarks/bench_kernels.py [--trajectories N] [--steps S]

Times the raw kernel on a synthetic workload and the full ensemble
pipeline with each backend patched in.
"""

import argparse
import time

import numpy as np

import nadsim as ns
from nadsim import kernels
from nadsim import measurement as mc


def time_call(fn, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_raw(trajectories, steps):
    rng = np.random.default_rng(0)
    p_flip = rng.random(steps) * 0.01
    uniforms = rng.random((trajectories, steps))
    rows = []
    reference = None
    for name, fn in sorted(kernels.available_backends().items()):
        result = fn(p_flip, uniforms)
        if reference is None:
            reference = result
        else:
            assert all(np.array_equal(a, b) for a, b in zip(reference, result))
        rows.append((name, time_call(lambda: fn(p_flip, uniforms))))
    return rows


def bench_ensemble(trajectories, steps):
    system = ns.SystemSpec(omega_g=0.0, omega_e=10.0)
    pulse = ns.PulseSpec(shape=ns.CONSTANT_WAVE, peak_rabi=1.0, duration=10.0,
                         carrier=9.0, t_on=0.0, t_off=10.0)
    grid = np.linspace(0.0, 10.0, steps + 1)
    config = mc.MCConfig(rate_scale=0.1, rate_model="constant",
                         trajectories=trajectories, seed=1, grid=grid)
    rows = []
    saved = kernels.scan_chunk
    try:
        for name, fn in sorted(kernels.available_backends().items()):
            kernels.scan_chunk = fn
            rows.append((name, time_call(lambda: mc.ensemble(config, system, pulse),
                                         repeats=3)))
    finally:
        kernels.scan_chunk = saved
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trajectories", type=int, default=4096)
    parser.add_argument("--steps", type=int, default=4000)
    args = parser.parse_args()

    print(f"active backend: {kernels.backend()}")
    print(f"workload: {args.trajectories} trajectories x {args.steps} steps\n")

    raw = bench_raw(args.trajectories, args.steps)
    print("raw scan_chunk (outputs verified identical):")
    base = max(t for _, t in raw)
    for name, t in raw:
        print(f"  {name:>10}: {t * 1e3:9.2f} ms   ({base / t:5.1f}x vs slowest)")

    ens = bench_ensemble(args.trajectories, args.steps)
    print("\nfull ensemble (rate 0.1, constant model):")
    base = max(t for _, t in ens)
    for name, t in ens:
        print(f"  {name:>10}: {t * 1e3:9.2f} ms   ({base / t:5.1f}x vs slowest)")


if __name__ == "__main__":
    main()
