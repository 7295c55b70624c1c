#!/usr/bin/env python3
"""Benchmark the compiled grid-scan kernels against the pure fallback.

Runs marching_cells and label_nodes from both backends on the same
node grids and prints per-size timings with the speedup factor.

    python3 benchmarks/bench_scan.py [--sizes 256,512,1024] [--repeat 5]
"""

import argparse
import time

import numpy as np

from dirac_kit import _scan_py
from dirac_kit.surface import SurfaceSpec
from dirac_kit.expr import evaluate_grid, parse

try:
    from dirac_kit import _scan_core
except ImportError:
    _scan_core = None


def node_grid(n: int) -> np.ndarray:
    """The cubic classifier input: three nested zero circles."""
    zs, ths = SurfaceSpec("sphere", n).curve_grid()
    return evaluate_grid(parse("z*(z^2-1/4)"), zs[:, None], ths[None, :])


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="256,512,1024")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    if _scan_core is None:
        print("compiled backend unavailable; timing the fallback only")

    header = f"{'grid':>6}  {'kernel':<14} {'python':>10} {'compiled':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for n in sizes:
        grid = node_grid(n)
        for name in ("marching_cells", "label_nodes"):
            py = best_of(lambda: getattr(_scan_py, name)(grid, False), args.repeat)
            if _scan_core is None:
                print(f"{n:>6}  {name:<14} {py * 1e3:>8.2f}ms {'-':>10} {'-':>8}")
                continue
            co = best_of(lambda: getattr(_scan_core, name)(grid, False), args.repeat)
            a = getattr(_scan_py, name)(grid, False)
            b = getattr(_scan_core, name)(grid, False)
            assert np.array_equal(a, b), f"backend mismatch in {name} at {n}"
            print(
                f"{n:>6}  {name:<14} {py * 1e3:>8.2f}ms {co * 1e3:>8.2f}ms {py / co:>7.1f}x"
            )


if __name__ == "__main__":
    main()
