"""Time each array kernel under the numba and numpy backends.

    python benchmarks/bench_kernels.py [--repeat 5]

Prints one line per kernel with the best wall time of each backend and the
speed-up; results are also checked for equality.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from fracorbit import kernels
from fracorbit._accel import HAVE_NUMBA
from fracorbit.realspec import KEMPNER


def _cases(rng: np.random.Generator):
    n = 1 << 20
    exps = KEMPNER.exponent_array(n + 64)
    dist = rng.integers(0, 1 << 59, size=n, dtype=np.int64)
    width = rng.integers(0, 1 << 20, size=n, dtype=np.int64)
    cls = rng.choice(np.array([-1, 0, 1], dtype=np.int8), size=n, p=[0.6, 0.05, 0.35])
    nu, J, m = 2048, 40, 2
    ang = rng.random((nu, J, m)) * 2 * np.pi
    base = rng.random((nu, 1)) * 2 * np.pi
    ladder = (np.cos(ang), np.sin(ang), np.full(nu, J, dtype=np.int64), np.array([0.5, 0.5]),
              np.array([1, 1], dtype=np.int64), np.cos(base), np.sin(base))
    d = 1 << 58
    return {
        "lacunary_windows": (kernels.lacunary_windows, (exps, 1, n, True)),
        "classify_dist": (kernels.classify_dist, (dist, dist + width, d, d + 1)),
        "maximal_runs": (kernels.maximal_runs, (cls,)),
        "ladder_dp": (kernels.ladder_dp, ladder),
    }


def _best(fn, args, repeat: int) -> tuple[float, object]:
    out = fn(*args)  # warm-up; includes numba compilation on first call
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t)
    return best, out


def _same(a, b) -> bool:
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    return np.array_equal(a, b) if a.dtype.kind in "iu" else np.allclose(a, b, rtol=0, atol=1e-12)


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = np.random.default_rng(7)
    print(f"{'kernel':<18}{'numpy [s]':>12}{'numba [s]':>12}{'speed-up':>10}  equal")
    for name, (fn, fargs) in _cases(rng).items():
        kernels.set_backend("numpy")
        t_np, r_np = _best(fn, fargs, args.repeat)
        if HAVE_NUMBA:
            kernels.set_backend("numba")
            t_nb, r_nb = _best(fn, fargs, args.repeat)
            print(f"{name:<18}{t_np:>12.4f}{t_nb:>12.4f}{t_np / t_nb:>10.1f}  {_same(r_np, r_nb)}")
        else:
            print(f"{name:<18}{t_np:>12.4f}{'n/a':>12}{'':>10}  -")
    kernels.set_backend("auto")


if __name__ == "__main__":
    main()
