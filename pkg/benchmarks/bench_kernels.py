"""Compare the numba and numpy kernels on identical inputs.

    python benchmarks/bench_kernels.py [--repeat R] [--seed S]

Each kernel runs once untimed (numba compilation), then R timed rounds per
backend.  Outputs must agree exactly; a mismatch exits with status 1.
"""
from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction

import numpy as np

from ualslab import kernels
from ualslab._accel import HAVE_NUMBA
from ualslab.core import DYADIC, FinVec
from ualslab.spaces.james import int_array
from ualslab.spaces.jtree import _Tree


def james_case(rng, k):
    return int_array([int(v) for v in rng.integers(-50, 51, size=k)])


def jt_case(rng, depth, count):
    nodes = set()
    while len(nodes) < count:
        d = int(rng.integers(0, depth + 1))
        nodes.add("".join(str(int(b)) for b in rng.integers(0, 2, size=d)))
    x = FinVec(DYADIC, {s: Fraction(int(rng.integers(1, 20)) * (1 if rng.integers(0, 2) else -1)) for s in nodes})
    ints = [int(c) for _, c in x.items()]
    t = _Tree(x, ints)
    return (t.order, t.depth, t.c0, t.c1, t.P, t.pathP, t.maxd)


def mixed_case(rng, n, groups):
    return rng.standard_normal(n), rng.integers(0, groups, size=n), groups


def timed(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    rng = np.random.Generator(np.random.PCG64(args.seed))
    cases = [
        ("james_suffix k=400", lambda nb, a=james_case(rng, 400): kernels.james_suffix(a, nb)),
        ("james_suffix k=2000", lambda nb, a=james_case(rng, 2000): kernels.james_suffix(a, nb)),
        ("jt_dp depth=10 n=300", lambda nb, a=jt_case(rng, 10, 300): kernels.jt_dp(*a, use_numba=nb)[1]),
        ("jt_dp depth=14 n=1500", lambda nb, a=jt_case(rng, 14, 1500): kernels.jt_dp(*a, use_numba=nb)[1]),
        ("group_norms p=1.5 n=1e5", lambda nb, a=mixed_case(rng, 100_000, 500): kernels.group_norms(*a, 1.5, nb)),
        ("group_norms p=inf n=1e5", lambda nb, a=mixed_case(rng, 100_000, 500): kernels.group_norms(*a, np.inf, nb)),
    ]
    print(f"numba available: {HAVE_NUMBA}")
    print(f"{'kernel':28s} {'numpy ms':>10s} {'numba ms':>10s} {'speedup':>8s}  agree")
    ok = True
    for name, fn in cases:
        fn(True)  # compile
        t_np, r_np = timed(lambda: fn(False), args.repeat)
        if HAVE_NUMBA:
            t_nb, r_nb = timed(lambda: fn(True), args.repeat)
            exact = r_np.dtype.kind in "iuO"
            same = np.array_equal(r_np, r_nb) if exact else np.allclose(r_np, r_nb, rtol=1e-12, atol=0)
            ok &= bool(same)
            print(f"{name:28s} {t_np * 1e3:10.2f} {t_nb * 1e3:10.2f} {t_np / t_nb:8.1f}  {same}")
        else:
            print(f"{name:28s} {t_np * 1e3:10.2f} {'-':>10s} {'-':>8s}  -")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
