"""Time the compiled and pure-Python kernels on the same inputs.

    python benchmarks/bench_kernels.py [--repeat 3]

Each case is run on every available backend; outputs are compared before
timings are reported.
"""

import argparse
import itertools
import time

import numpy as np

from crdcache import kernels
from crdcache.construct import ConstructionParams, construct
from crdcache.scheme import build_topology, generate_plan, place, sample_demands
from crdcache.verify import _cached_matrix, _term_arrays


def intersection_case(q, m):
    _, res = construct(ConstructionParams(q, m, 1))
    classes = res.classes
    combos = np.array([list(p) for cs in itertools.combinations(classes, m) for p in itertools.product(*cs)])
    return (res.design.incidence, combos)


def decode_case(q, m, z):
    _, res = construct(ConstructionParams(q, m, 1))
    top = build_topology(res, z)
    demands = sample_demands(top.K)
    plan = generate_plan(top, demands)
    placement = place(top, demands.n_files)
    files, points, _ = _term_arrays(plan, demands.n_files, top.v)
    cached = _cached_matrix(placement, top)
    return (cached, np.array(demands.demand), demands.n_files, files, points)


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - start)
    return min(times), out


def same(a, b):
    if isinstance(a, tuple):
        return all(np.array_equal(x, y) for x, y in zip(a, b))
    return np.array_equal(a, b)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    cases = [
        ("intersection_counts q=7 m=4", "intersection_counts", intersection_case(7, 4)),
        ("intersection_counts q=4 m=6", "intersection_counts", intersection_case(4, 6)),
        ("decode_symbolic q=3 m=4 z=2", "decode_symbolic", decode_case(3, 4, 2)),
        ("decode_symbolic q=4 m=4 z=3", "decode_symbolic", decode_case(4, 4, 3)),
        ("decode_symbolic q=5 m=4 z=2", "decode_symbolic", decode_case(5, 4, 2)),
    ]
    names = sorted(kernels.BACKENDS)
    print(f"backends: {', '.join(names)} (active: {kernels.BACKEND})")
    print(f"{'case':32s}" + "".join(f"{n:>12s}" for n in names) + ("     speedup" if len(names) > 1 else ""))
    for label, op, inputs in cases:
        results = {}
        for name in names:
            results[name] = best_of(lambda: getattr(kernels, op)(*inputs, backend=name), args.repeat)
        outs = [r[1] for r in results.values()]
        if not all(same(outs[0], o) for o in outs[1:]):
            raise SystemExit(f"{label}: backends disagree")
        row = f"{label:32s}" + "".join(f"{results[n][0] * 1e3:10.2f}ms" for n in names)
        if "cython" in results:
            row += f"{results['python'][0] / results['cython'][0]:11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
