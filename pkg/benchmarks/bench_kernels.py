"""Compare the compiled and pure-Python frame kernels.

Each workload runs on both backends over the same inputs; results are
checked for equality before timings are reported.

    python benchmarks/bench_kernels.py [--repeat N] [--models N]
"""

from __future__ import annotations

import argparse
import random
import sys
import time

from polarframes import kernels
from polarframes.folout import FolBatch, sort_reduce, st_sub
from polarframes.search import d_gals
from polarframes.syntax import Var, generate_formulas
from polarframes.translate import FaithfulnessBatch


def _models(n, nx, seed):
    rng = random.Random(f"bench:{seed}:{nx}")
    gals = d_gals(nx, nx)
    out = []
    for _ in range(n):
        rows = gals[rng.randrange(len(gals))]
        rp = [rng.randrange(1 << nx) for _ in range(nx * nx)]
        iota = [rng.randrange(1 << nx) for _ in range(2)]
        out.append((rows, rp, iota))
    return out


def _workloads(formulas):
    batch = FaithfulnessBatch(formulas)
    x = Var("x", "x")
    fol = FolBatch([st_sub(f, x) for f in formulas], x)
    red = FolBatch([sort_reduce(st_sub(f, x)) for f in formulas], Var("x", "u"))

    def stable(k, iota):
        return k.stable_sets()

    def odot_table(k, iota):
        full = (1 << k.nx) - 1
        return [k.odot(u, w) for u in range(full + 1) for w in range(full + 1)]

    def program(k, iota):
        return batch.evaluate(k, iota)

    def fol_two_sorted(k, iota):
        return fol.masks(k, iota)

    def fol_reduced(k, iota):
        return red.masks(k, iota, (), True)

    return [("stable sets", stable), ("fusion table", odot_table),
            ("set program, faithfulness terms", program),
            ("first-order, two-sorted", fol_two_sorted),
            ("first-order, sort-reduced", fol_reduced)]


def _time(fn, kern, models, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t = time.perf_counter()
        result = [fn(k, iota) for k, iota in zip(kern, models)]
        best = min(best, time.perf_counter() - t)
    return best, result


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3, help="best of N runs")
    ap.add_argument("--models", type=int, default=40, help="random models per size")
    ap.add_argument("--formulas", type=int, default=60, help="formulas from the generator")
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args(argv)
    if not kernels.compiled_available():
        print("compiled kernel not built; nothing to compare", file=sys.stderr)
        return 1
    formulas = generate_formulas()[: a.formulas]
    work = _workloads(formulas)
    print(f"{'workload':34} {'size':>5} {'python ms':>10} {'cython ms':>10} {'speedup':>8}")
    for nx in (2, 3, 4):
        models = _models(a.models, nx, a.seed)
        kp = [kernels.make_kernel(nx, nx, r, rp, "python") for r, rp, _ in models]
        kc = [kernels.make_kernel(nx, nx, r, rp, "cython") for r, rp, _ in models]
        iotas = [m[2] for m in models]
        for name, fn in work:
            tp, rp_ = _time(fn, kp, iotas, a.repeat)
            tc, rc_ = _time(fn, kc, iotas, a.repeat)
            if rp_ != rc_:
                print(f"{name}: backends disagree at size {nx}", file=sys.stderr)
                return 1
            print(f"{name:34} {nx}x{nx:<3} {1000 * tp:10.2f} {1000 * tc:10.2f} {tp / tc:8.1f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
