"""Time the numba kernels against their numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat 20] [--grid 512]

Both backends are imported directly, so the CUSPFORMS_BACKEND flag does not
matter here.  Each row reports the best wall time over ``--repeat`` calls
(after one warm-up call that also triggers JIT compilation) and checks that
the two results are bitwise equal.
"""
import argparse
import time

import numpy as np

from cuspforms.kernels import _numba as numba_impl
from cuspforms.kernels import _numpy as numpy_impl


def best_time(fn, args, repeat):
    fn(*args)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def cases(grid, rng):
    x = rng.standard_normal(grid * grid) * 10.0 ** rng.integers(-8, 8, grid * grid)
    rows = x.reshape(grid, grid)
    n_min, n_max = -10, 10
    re = rng.uniform(-1, 1, n_max - n_min + 1)
    im = rng.uniform(-1, 1, n_max - n_min + 1)
    rad = rng.uniform(0.2, 1.0, grid * grid)
    ang = rng.uniform(0, 2 * np.pi, grid * grid)
    z_re, z_im = rad * np.cos(ang), rad * np.sin(ang)
    comp_r = rng.standard_normal((grid + 1, grid))
    comp_t = rng.standard_normal((grid + 1, grid))
    return [
        ("neumaier_sum", "neumaier_sum", (x,)),
        ("neumaier_sum_rows", "neumaier_sum_rows", (rows,)),
        ("laurent_eval", "laurent_eval", (re, im, n_min, z_re, z_im)),
        ("curl_periodic", "curl_periodic", (comp_r, comp_t, 1.0 / grid, 1.0 / grid)),
    ]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--grid", type=int, default=512, help="side of the 2-D test arrays")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':<20}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>10}  bitwise")
    for label, name, fargs in cases(args.grid, rng):
        f_np, f_nb = getattr(numpy_impl, name), getattr(numba_impl, name)
        t_np = best_time(f_np, fargs, args.repeat)
        t_nb = best_time(f_nb, fargs, args.repeat)
        ok = same(f_np(*fargs), f_nb(*fargs))
        print(f"{label:<20}{1e3 * t_np:>12.3f}{1e3 * t_nb:>12.3f}{t_np / t_nb:>10.2f}  {'yes' if ok else 'NO'}")


if __name__ == "__main__":
    main()
