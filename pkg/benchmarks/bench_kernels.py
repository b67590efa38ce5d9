"""Compare the compiled kernels against the numpy fallback.

Usage:
    python3 benchmarks/bench_kernels.py [--queries N] [--repeats K]

Reports best-of-K wall times for the three hot kernels on the u_road
reference polyline.  The compiled extension is optional; without it only
the fallback column is printed.
"""
import argparse
import math
import timeit

import numpy as np

from frenetplan import _kernels_py as pyimpl
from frenetplan.scenarios import bundled_scenario

try:
    from frenetplan import _speedups as cimpl
except ImportError:
    cimpl = None


def poly_args(poly):
    return (poly.xs, poly.ys, poly.cumulative_s, poly.ex, poly.ey,
            poly.bisector_x, poly.bisector_y)


def best(fn, repeats):
    return min(timeit.repeat(fn, number=1, repeat=repeats))


def run(queries: int, repeats: int) -> None:
    poly = bundled_scenario("u_road").polyline()
    args = poly_args(poly)
    rng = np.random.default_rng(0)
    qx = rng.uniform(-25.0, 85.0, size=queries)
    qy = rng.uniform(-35.0, 65.0, size=queries)

    res = 0.05
    ext = 10.0
    n_steps = int(math.floor((poly.total_length + 2 * ext) / res)) + 1
    # a spiral never self-intersects, forcing the full O(n^2) sweep
    turns = np.linspace(0.0, 6.0 * math.pi, 400)
    loop_xs = (1.0 + turns) * np.cos(turns)
    loop_ys = (1.0 + turns) * np.sin(turns)

    cases = [
        ("project_batch (%d queries)" % queries,
         lambda impl: impl.project_batch(*args, qx, qy)),
        ("scan_project (%d stations)" % n_steps,
         lambda impl: impl.scan_project(poly.xs, poly.ys, poly.cumulative_s,
                                        poly.ex, poly.ey, 12.0, 7.0,
                                        res, ext, n_steps)),
        ("has_self_intersection (400 pts)",
         lambda impl: impl.has_self_intersection(loop_xs, loop_ys)),
    ]

    backends = [("fallback", pyimpl)]
    if cimpl is not None:
        backends.append(("compiled", cimpl))

    width = max(len(name) for name, _ in cases)
    header = "%-*s" % (width, "kernel")
    for bname, _ in backends:
        header += "  %12s" % bname
    if cimpl is not None:
        header += "  %8s" % "speedup"
    print(header)
    print("-" * len(header))
    for name, call in cases:
        times = [best(lambda impl=impl: call(impl), repeats)
                 for _, impl in backends]
        row = "%-*s" % (width, name)
        for t in times:
            row += "  %10.3f ms" % (t * 1e3)
        if cimpl is not None:
            row += "  %7.1fx" % (times[0] / times[1])
        print(row)


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--queries", type=int, default=2000)
    parser.add_argument("--repeats", type=int, default=5)
    ns = parser.parse_args()
    run(ns.queries, ns.repeats)
