"""Time the numpy and numba kernels on the workloads the test suite runs.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Workloads: the qubit robustness grid oracle (one bisection over a 10^5
point mesh), the batched Choi application of the 10^4 pair monotonicity
sweep, and the partial transpose of a 36x36 Choi matrix.
"""
import argparse
import timeit

import numpy as np

from imaginarity._kernels import numba_kernels, numpy_kernels
from imaginarity.measures import bloch_ball_mesh


def grid_bisection(k, pi_y, y=0.6):
    lo, hi = 0.0, 2.0
    while hi - lo > 1e-7:
        mid = 0.5 * (lo + hi)
        if k.min_y_mismatch(pi_y, mid, y) <= 5e-4:
            hi = mid
        else:
            lo = mid
    return hi


def workloads(rng):
    pi_y = np.ascontiguousarray(bloch_ball_mesh()[:, 1])
    chois = rng.standard_normal((10_000, 9, 9)) + 1j * rng.standard_normal((10_000, 9, 9))
    rhos = rng.standard_normal((10_000, 3, 3)) + 1j * rng.standard_normal((10_000, 3, 3))
    big = rng.standard_normal((36, 36)) + 1j * rng.standard_normal((36, 36))
    return {
        "grid oracle (1e5 mesh)": lambda k: grid_bisection(k, pi_y),
        "batched apply (1e4 pairs, d=3)": lambda k: k.apply_choi_batch(chois, rhos, 3, 3),
        "partial transpose (6x6 blocks)": lambda k: k.partial_transpose_a(big, 6, 6),
    }


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    backends = [numpy_kernels] + ([numba_kernels] if numba_kernels is not None else [])
    rng = np.random.default_rng(0)
    print(f"{'workload':34s}" + "".join(f"{k.name:>12s}" for k in backends) + "   speedup")
    for name, fn in workloads(rng).items():
        times = []
        for k in backends:
            fn(k)  # warm up, and trigger compilation
            times.append(min(timeit.repeat(lambda: fn(k), number=1, repeat=args.repeat)))
        row = f"{name:34s}" + "".join(f"{t * 1e3:10.2f}ms" for t in times)
        if len(times) == 2:
            row += f"   {times[0] / times[1]:6.1f}x"
        print(row)


if __name__ == "__main__":
    main()
