#!/usr/bin/env python3
"""Benchmark the numba factor kernels against the pure-numpy fallback.

Three workloads:
  * raw kernels on a large factor product + marginalization
  * variable elimination on a 16-variable chain with 4-state variables
  * the two-disease severity demonstration at a 2000-point grid

Usage: python benchmarks/bench_backends.py [--reps N]
The active default backend follows DXPROBE_BACKEND; both are timed here.
"""
from __future__ import annotations

import argparse
import statistics
import time

import numpy as np

from dxprobe import backend
from dxprobe.factors import Factor, bucket_sum_out
from dxprobe.inference import posterior
from dxprobe.network import ConditionalTable, Evidence, Variable, build_network
from dxprobe.reports import OpenProbeResponse
from dxprobe.severity import build_severity_demo, severity_posterior_demo


def bench(fn, reps: int, warmup: int = 2) -> dict:
    for _ in range(warmup):
        fn()
    times = []
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return {"mean": statistics.mean(times), "min": min(times)}


def workload_kernels():
    rng = np.random.default_rng(0)
    a = Factor((0, 1, 2), rng.random((64, 32, 16)))
    b = Factor((1, 2, 3), rng.random((32, 16, 64)))
    c = Factor((0, 3), rng.random((64, 64)))

    def run():
        return bucket_sum_out([a, b, c], 1)

    return run


def workload_chain():
    n, card = 16, 4
    rng = np.random.default_rng(1)
    variables = [Variable(f"x{i:02d}", tuple(f"s{j}" for j in range(card))) for i in range(n)]
    tables = [ConditionalTable("x00", (), np.full(card, 1.0 / card))]
    for i in range(1, n):
        rows = rng.random((card, card)) + 0.1
        rows /= rows.sum(axis=1, keepdims=True)
        tables.append(ConditionalTable(f"x{i:02d}", (f"x{i - 1:02d}",), rows.reshape(-1)))
    net = build_network(variables, tables)
    ev = Evidence({f"x{n - 1:02d}": "s0"})

    def run():
        return posterior(net, "x00", ev)

    return run


def workload_severity():
    net, _ = build_severity_demo(grid_points=2000)
    response = OpenProbeResponse("initial", {"rash": "present"})

    def run():
        return severity_posterior_demo(net, response)

    return run


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--reps", type=int, default=20)
    args = parser.parse_args()

    workloads = {
        "raw kernels (64x32x16 * 32x16x64)": workload_kernels(),
        "chain VE (16 vars, card 4)": workload_chain(),
        "severity demo (2000-point grid)": workload_severity(),
    }
    names = [backend.NUMPY] + ([backend.NUMBA] if backend.HAS_NUMBA else [])
    if not backend.HAS_NUMBA:
        print("numba not installed; timing the numpy fallback only")

    results: dict[str, dict[str, dict]] = {}
    for name in names:
        backend.set_backend(name)
        backend.warmup()
        for label, fn in workloads.items():
            results.setdefault(label, {})[name] = bench(fn, args.reps)

    width = max(len(label) for label in workloads)
    header = f"{'workload'.ljust(width)}  " + "".join(f"{n:>12}" for n in names)
    if len(names) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for label, per_backend in results.items():
        row = label.ljust(width) + "  "
        for name in names:
            row += f"{per_backend[name]['mean'] * 1e3:>10.3f}ms"
        if len(names) == 2:
            ratio = per_backend[backend.NUMPY]["mean"] / per_backend[backend.NUMBA]["mean"]
            row += f"{ratio:>9.2f}x"
        print(row)


if __name__ == "__main__":
    main()
