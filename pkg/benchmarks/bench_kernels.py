"""Time the numba and numpy kernel backends side by side.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each kernel runs once untimed (numba compilation), then ``--repeat`` times;
the best wall time is reported.  Outputs are compared for equality first.
"""

import argparse
import time

import numpy as np

from kpset import _kernels
from kpset import gf2poly as gf
from kpset._kernels import _numpy as numpy_impl
from kpset.lattice import build_union, draw_recipe

CASES = [
    ("grid_counts", 6, 2),
    ("grid_counts", 5, 3),
    ("shift_count_moments", 3, 3),
    ("shift_count_moments", 4, 2),
    ("walsh_sums", 5, 3),
    ("box_counts", 6, 2),
]


def _args(kernel, m, s):
    union = build_union(draw_recipe("theorem1", m, s, gf.smallest_irreducible(m), seed=1))
    pts = np.ascontiguousarray(union.points[: 1 << m] if kernel == "shift_count_moments" else union.points)
    if kernel == "box_counts":
        boxes = np.random.default_rng(0).integers(0, (1 << m) + 1, size=(4096, s))
        return pts, np.ascontiguousarray(boxes, dtype=np.int64)
    return pts, m


def _best(fn, args, repeat):
    fn(*args)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    opts = ap.parse_args()
    nb = _kernels.numba_impl
    print(f"{'kernel':<22}{'m':>3}{'s':>3}{'numpy ms':>12}{'numba ms':>12}{'speedup':>9}")
    for kernel, m, s in CASES:
        args = _args(kernel, m, s)
        t_np = _best(getattr(numpy_impl, kernel), args, opts.repeat)
        if nb is None:
            print(f"{kernel:<22}{m:>3}{s:>3}{t_np * 1e3:>12.3f}{'n/a':>12}{'':>9}")
            continue
        a, b = getattr(nb, kernel)(*args), getattr(numpy_impl, kernel)(*args)
        same = all(np.array_equal(x, y) for x, y in zip(a, b)) if isinstance(a, tuple) else np.array_equal(a, b)
        if not same:
            raise SystemExit(f"{kernel}: backends disagree")
        t_nb = _best(getattr(nb, kernel), args, opts.repeat)
        print(f"{kernel:<22}{m:>3}{s:>3}{t_np * 1e3:>12.3f}{t_nb * 1e3:>12.3f}{t_np / t_nb:>8.1f}x")


if __name__ == "__main__":
    main()
