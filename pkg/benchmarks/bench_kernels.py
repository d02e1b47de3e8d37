"""Time the compiled kernels against the numpy fallback.

Run ``python3 benchmarks/bench_kernels.py``; prints one line per kernel with
the median wall time of each backend, the speedup and whether results agree.
"""
from __future__ import annotations

import argparse
import math
import timeit

import numpy as np

from xlink import _kernels_py
from xlink.orbital import EARTH

try:
    from xlink import _kernels
except ImportError:  # extension not built
    _kernels = None


def _inputs(steps: int, sats: int, seed: int = 0):
    rng = np.random.default_rng(seed)
    r = EARTH.earth_radius + 500e3

    def on_sphere(shape):
        v = rng.normal(size=shape + (3,))
        return v / np.linalg.norm(v, axis=-1, keepdims=True)

    rx_pos = r * on_sphere((steps,))
    rx_dir = on_sphere((steps,))
    pos = r * on_sphere((steps, sats))
    tx_dir = on_sphere((steps, sats))
    theta = rng.uniform(0, 2 * math.pi, steps * sats)
    return (rx_pos, rx_dir, pos, tx_dir), theta


def _cases(steps: int, sats: int):
    (rx_pos, rx_dir, pos, tx_dir), theta = _inputs(steps, sats)
    edge = math.radians(30.0)
    re = EARTH.earth_radius
    r1, r2 = re + 500e3, re + 510e3
    return {
        "interferer_mask": lambda k: k.interferer_mask(rx_pos, rx_dir, pos, tx_dir, edge, re),
        "coplanar_mask": lambda k: k.coplanar_mask(theta, r1, r2, 100, 100, edge, re),
        "coplanar_any": lambda k: k.coplanar_any(theta, r1, r2, 100, 100, edge, re),
    }


def _same(a, b) -> bool:
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    if isinstance(a, bool):
        return a == b
    a, b = np.asarray(a), np.asarray(b)
    if a.dtype == bool or b.dtype == bool:
        return bool(np.array_equal(a.astype(bool), b.astype(bool)))
    return bool(np.allclose(a, b, rtol=1e-12, atol=0))


def _median_time(fn, repeat: int) -> float:
    return float(np.median(timeit.repeat(fn, number=1, repeat=repeat)))


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--sats", type=int, default=200)
    p.add_argument("--repeat", type=int, default=7)
    args = p.parse_args(argv)
    if _kernels is None:
        print("compiled extension not built; only the numpy backend is available")
    print(f"{args.steps} steps x {args.sats} candidates, median of {args.repeat}")
    print(f"{'kernel':<18}{'numpy ms':>10}{'cython ms':>11}{'speedup':>9}  agree")
    for name, call in _cases(args.steps, args.sats).items():
        t_py = _median_time(lambda: call(_kernels_py), args.repeat)
        if _kernels is None:
            print(f"{name:<18}{t_py * 1e3:>10.2f}{'-':>11}{'-':>9}  -")
            continue
        t_cy = _median_time(lambda: call(_kernels), args.repeat)
        agree = _same(call(_kernels_py), call(_kernels))
        print(f"{name:<18}{t_py * 1e3:>10.2f}{t_cy * 1e3:>11.2f}{t_py / t_cy:>8.1f}x  {agree}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
