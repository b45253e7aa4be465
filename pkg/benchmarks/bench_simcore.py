"""Benchmark the compiled trajectory core against the pure-Python fallback.

Usage:
    python benchmarks/bench_simcore.py [--n 100] [--temperature 1.0]
                                       [--periods 1000000] [--seed 42]

Both backends consume the same uniform stream and must produce byte-identical
paths; the benchmark verifies that before timing.
"""

import argparse
import time

import numpy as np

from gravitation import _simcore_py
from gravitation.dynamics import _sampling_tables, make_rng
from gravitation.model import ModelParams

try:
    from gravitation import _simcore
except ImportError:
    _simcore = None


def time_backend(fn, uniforms, cdfs, block_index, start, repeats=3):
    out = np.empty(uniforms.shape[0] + 1, dtype=np.int64)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(uniforms, cdfs, block_index, start, out)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=100)
    parser.add_argument("--temperature", type=float, default=1.0)
    parser.add_argument("--periods", type=int, default=1_000_000)
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args()

    params = ModelParams(args.n, args.temperature)
    cdfs, block_index, _ = _sampling_tables(params)
    uniforms = make_rng(args.seed).random(args.periods - 1)
    start = args.n // 2

    py_time, py_out = time_backend(_simcore_py.simulate_counts, uniforms, cdfs,
                                   block_index, start)
    rate = (args.periods - 1) / py_time
    print(f"python : {py_time:8.4f}s  {rate / 1e6:8.2f} M steps/s")

    if _simcore is None:
        print("cython : not built (run `python setup.py build_ext --inplace`)")
        return

    cy_time, cy_out = time_backend(_simcore.simulate_counts, uniforms, cdfs,
                                   block_index, start)
    rate = (args.periods - 1) / cy_time
    print(f"cython : {cy_time:8.4f}s  {rate / 1e6:8.2f} M steps/s")
    print(f"speedup: {py_time / cy_time:8.1f}x")
    identical = np.array_equal(py_out, cy_out)
    print(f"paths byte-identical: {identical}")
    if not identical:
        raise SystemExit("backend mismatch: the two cores diverged")


if __name__ == "__main__":
    main()
