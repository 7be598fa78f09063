"""Time the numba kernels against the numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat N]

Each workload is run once untimed (to trigger JIT compilation), then
``--repeat`` times per backend; outputs are checked for equality.
"""

import argparse
import time

import numpy as np

from hk import _kernels
from hk.lattice import parse_lattice

WORKLOADS = [
    # (name, callable taking use_numba)
    ("search -2 in U(2)+E8(-2), bound 2 (empty, full box)",
     lambda nb: _kernels.search_vectors(parse_lattice("U(2)+E8(-2)").as_array(), -2, 2, 0, 1, nb)),
    ("search all isotropic in U+E8(-2), bound 1",
     lambda nb: _kernels.search_vectors(parse_lattice("U+E8(-2)").as_array(), 0, 1, 0, 100000, nb)),
    ("search -4 in U(2)+D4(-1), bound 3",
     lambda nb: _kernels.search_vectors(parse_lattice("U(2)+D4(-1)").as_array(), -4, 3, 0, 100000, nb)),
    ("(-1)-classes k=8, default box", lambda nb: _kernels.minus_one_classes(8, (0, 7), (-2, 4), nb)),
    ("(-1)-classes k=8, widened box", lambda nb: _kernels.minus_one_classes(8, (-2, 9), (-4, 6), nb)),
]


def timeit(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not _kernels._HAVE_NUMBA:
        print("numba not installed; only the numpy path is timed")
    print(f"{'workload':55s} {'numpy s':>10s} {'numba s':>10s} {'speedup':>8s}")
    for name, fn in WORKLOADS:
        t_np, out_np = timeit(lambda: fn(False), args.repeat)
        if _kernels._HAVE_NUMBA:
            fn(True)  # compile
            t_nb, out_nb = timeit(lambda: fn(True), args.repeat)
            assert np.array_equal(out_np, out_nb), name
            print(f"{name:55s} {t_np:10.4f} {t_nb:10.4f} {t_np / t_nb:8.1f}x")
        else:
            print(f"{name:55s} {t_np:10.4f} {'-':>10s}")


if __name__ == "__main__":
    main()
