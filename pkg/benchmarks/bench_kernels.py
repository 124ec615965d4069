#!/usr/bin/env python3
"""Time each hot kernel under both backends and check they agree.

    python3 benchmarks/bench_kernels.py [--p 100003] [--repeat 5]

Numba compile time is excluded by a warm-up call on a tiny input.
"""

import argparse
import time

import numpy as np

from apgroups import kernels
from apgroups.field_core import build_context, subgroup


def best_of(fn, repeat):
    times = []
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def cases(p):
    ctx = build_context(p)
    d = max(x for x in ctx.divisors if x < ctx.n)
    G = subgroup(ctx, d)
    small = subgroup(build_context(1009), 504)
    L = np.array([[1, 0], [0, 1], [1, 1], [1, -1]], dtype=np.int64)
    b = np.zeros(4, dtype=np.int64)
    return [
        ("dlog_table", lambda k: k["dlog_table"](p, ctx.g)),
        ("progression_mask r=3", lambda k: k["progression_mask"](G.membership, p, 3)),
        ("tuple_log_gcd r=3", lambda k: k["tuple_log_gcd"](ctx.dlog, p, 3)),
        ("count_aps p=1009 r=2", lambda k: k["count_aps"](small.membership, small.elements, 1009, 2)),
        ("linear_forms_count p=1009 m=4", lambda k: k["linear_forms_count"](small.membership, L, b, 1009)),
    ]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=int, default=100_003)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    backends = {"numpy": kernels.NUMPY_KERNELS}
    if kernels.HAS_NUMBA:
        backends["numba"] = kernels.NUMBA_KERNELS
        warm = build_context(13)
        wm = subgroup(warm, 6)
        K = kernels.NUMBA_KERNELS
        K["dlog_table"](13, warm.g)
        K["progression_mask"](wm.membership, 13, 2)
        K["tuple_log_gcd"](warm.dlog, 13, 2)
        K["count_aps"](wm.membership, wm.elements, 13, 2)
        K["linear_forms_count"](wm.membership, np.eye(2, dtype=np.int64), np.zeros(2, dtype=np.int64), 13)

    print(f"{'kernel':<32}" + "".join(f"{name:>12}" for name in backends) + f"{'speedup':>10}  agree")
    for label, call in cases(args.p):
        timings, outputs = {}, {}
        for name, table in backends.items():
            timings[name], outputs[name] = best_of(lambda: call(table), args.repeat)
        vals = list(outputs.values())
        agree = all(np.array_equal(np.asarray(v), np.asarray(vals[0])) for v in vals[1:])
        speed = timings["numpy"] / timings["numba"] if "numba" in timings else float("nan")
        cells = "".join(f"{timings[n] * 1e3:>10.2f}ms" for n in backends)
        print(f"{label:<32}{cells}{speed:>9.1f}x  {agree}")


if __name__ == "__main__":
    main()
