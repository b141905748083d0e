#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Runs the two hot kernels (LCS backtrace, word-level edit distance) plus a
TER-style workload (many edit-distance calls per sentence pair, the way the
greedy shift search uses them) on random token-id sequences.

Usage: python3 benchmarks/bench_kernels.py [--sizes 20,40,80] [--repeat 200]
"""

from __future__ import annotations

import argparse
import random
import time

from segimt.kernels import available_backends


def bench(fn, pairs, repeat: int) -> float:
    started = time.perf_counter()
    for _ in range(repeat):
        for a, b in pairs:
            fn(a, b)
    return time.perf_counter() - started


def ter_workload(backend, pairs) -> float:
    """Edit distance over every single-block move, as the shift search does."""
    started = time.perf_counter()
    for hyp, ref in pairs:
        for (start) in range(len(hyp)):
            for length in (1, 2, 3):
                if start + length > len(hyp):
                    continue
                rest = hyp[:start] + hyp[start + length :]
                candidate = hyp[start : start + length] + rest
                backend.edit_distance(candidate, ref)
    return time.perf_counter() - started


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="20,40,80", help="sequence lengths to test")
    parser.add_argument("--repeat", type=int, default=200)
    parser.add_argument("--pairs", type=int, default=20, help="sequence pairs per size")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    backends = available_backends()
    if "c" not in backends:
        print("note: compiled backend unavailable, timing the fallback only")

    rng = random.Random(args.seed)
    print(f"{'kernel':<16} {'n':>5} " + " ".join(f"{name + ' [s]':>12}" for name in backends)
          + ("   speedup" if len(backends) > 1 else ""))
    for size in [int(s) for s in args.sizes.split(",")]:
        pairs = [
            (
                [rng.randrange(size) for _ in range(size)],
                [rng.randrange(size) for _ in range(size)],
            )
            for _ in range(args.pairs)
        ]
        for kernel in ("lcs_pairs", "edit_distance"):
            times = {
                name: bench(getattr(mod, kernel), pairs, args.repeat)
                for name, mod in backends.items()
            }
            row = f"{kernel:<16} {size:>5} " + " ".join(f"{times[n]:>12.3f}" for n in backends)
            if len(times) > 1:
                row += f"   {times['python'] / times['c']:>7.1f}x"
            print(row)
        times = {name: ter_workload(mod, pairs) for name, mod in backends.items()}
        row = f"{'shift-search':<16} {size:>5} " + " ".join(f"{times[n]:>12.3f}" for n in backends)
        if len(times) > 1:
            row += f"   {times['python'] / times['c']:>7.1f}x"
        print(row)


if __name__ == "__main__":
    main()
