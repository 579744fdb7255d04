"""Time the numba kernels against the pure-numpy fallback.

Usage::

    python benchmarks/bench_backends.py [--repeat 3]

Both backends are imported directly so one process can time them side by
side; outputs are compared for equality before any timing is reported.
"""

import argparse
import time

import numpy as np

from frechet_er import kernels  # noqa: F401  (sets the numba threading layer)
from frechet_er import _kernels_numba, _kernels_numpy
from frechet_er.er_model import ErParams
from frechet_er.frechet import construct_mean

CASES = [
    ("fn2 sparse", "fn2", 10_000, 1.5e-4, 2000),
    ("fn2 dense", "fn2", 1000, 0.3, 100),
    ("stein", "stein", 100, 0.3, 1000),
]


def _job(module, kind, n, p, count):
    if kind == "fn2":
        mean = construct_mean(ErParams(n, p))
        deg = mean.degrees().astype(np.int64)
        pos = mean.positions.astype(np.int64)
        return lambda: module.fn2_batch(n, p, np.uint64(1), deg, pos, 0, count)
    return lambda: module.stein_batch(n, p, np.uint64(1), 0, count)


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)

    print(f"{'case':<12} {'n':>6} {'p':>8} {'reps':>5} {'numba s':>9} {'numpy s':>9} {'speedup':>8}")
    for label, kind, n, p, count in CASES:
        fast = _job(_kernels_numba, kind, n, p, count)
        slow = _job(_kernels_numpy, kind, n, p, count)
        if not np.array_equal(fast(), slow()):  # also warms the JIT
            raise SystemExit(f"{label}: backends disagree")
        t_fast = best_of(fast, args.repeat)
        t_slow = best_of(slow, args.repeat)
        print(f"{label:<12} {n:>6} {p:>8.2g} {count:>5} {t_fast:>9.3f} {t_slow:>9.3f} "
              f"{t_slow / t_fast:>7.1f}x")


if __name__ == "__main__":
    main()
