"""Compare the compiled kernels against the pure-numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [--events N] [--repeat R]
"""

import argparse
import time

import numpy as np

from blindspot._kernels import _pure

try:
    from blindspot._kernels import _fast
except ImportError:
    _fast = None


def timeit(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_count(kern, ranks, cb, repeat):
    def run():
        kern.count_excluded(ranks, cb, 0, 10.0)
        kern.count_excluded(ranks, cb, 1, 0.95)

    return timeit(run, repeat)


def bench_split(kern, xs, ys, repeat):
    def run():
        for x, y in zip(xs, ys):
            kern.best_threshold(x, y)

    return timeit(run, repeat)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--events", type=int, default=5_000_000)
    ap.add_argument("--nodes", type=int, default=2000,
                    help="number of tree-node splits to evaluate")
    ap.add_argument("--node-size", type=int, default=400)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    ranks = rng.zipf(1.2, size=args.events).astype(np.int64)
    cb = rng.random(args.events)
    xs = [rng.normal(size=args.node_size) for _ in range(args.nodes)]
    ys = [(rng.random(args.node_size) < 0.5).astype(np.uint8) for _ in range(args.nodes)]

    rows = []
    for name, kern in [("pure", _pure)] + ([("cython", _fast)] if _fast else []):
        rows.append((name,
                     bench_count(kern, ranks, cb, args.repeat),
                     bench_split(kern, xs, ys, args.repeat)))

    print(f"{'backend':<8} {'count_excluded':>16} {'best_threshold':>16}")
    for name, tc, ts in rows:
        print(f"{name:<8} {tc * 1e3:>13.2f} ms {ts * 1e3:>13.2f} ms")
    if len(rows) == 2:
        print(f"{'speedup':<8} {rows[0][1] / rows[1][1]:>14.2f}x {rows[0][2] / rows[1][2]:>14.2f}x")
    else:
        print("compiled backend not built; only the fallback was measured")


if __name__ == "__main__":
    main()
