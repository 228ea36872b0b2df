"""Compare the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--size 400] [--repeat 5]

Workloads run on a size x size 4-neighbour pixel grid: one closure step of a
random mask, a flood (reachability) through a random corridor mask, and the
surrounded fixpoint. Results are checked equal across backends before timing.
"""
import argparse
import time

import numpy as np

from casmc import kernels
from casmc.closure import ClosureSpace
from casmc.io.pnm import grid_relation


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=400)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    space = ClosureSpace(grid_relation(args.size, args.size, 4), "symmetric")
    n = space.size
    rng = np.random.default_rng(args.seed)
    mask = (rng.random(n) < 0.3).astype(np.uint8)
    allowed = (rng.random(n) < 0.6).astype(np.uint8)
    seeds = np.zeros(n, dtype=np.uint8)
    seeds[rng.choice(n, 5, replace=False)] = 1
    phi = (rng.random(n) < 0.7).astype(np.uint8)
    psi = (rng.random(n) < 0.2).astype(np.uint8)
    succ, pred = space.succ, space.pred

    work = {
        "closure_step": lambda k: k.closure_step(*succ, mask),
        "flood": lambda k: k.flood(*pred, seeds, allowed),
        "surrounded": lambda k: k.surrounded(*pred, phi, psi),
    }
    names = sorted(kernels.BACKENDS)
    print(f"grid {args.size}x{args.size} ({n} points, {len(succ[1])} arcs), best of {args.repeat}")
    if "cython" not in kernels.BACKENDS:
        print("compiled extension not built; only the numpy fallback is timed")
    print(f"{'kernel':<14}" + "".join(f"{b:>12}" for b in names) + ("     speedup" if len(names) > 1 else ""))
    for label, fn in work.items():
        outs = [np.asarray(fn(kernels.BACKENDS[b])) for b in names]
        assert all(np.array_equal(outs[0], o) for o in outs[1:]), f"{label}: backends disagree"
        times = [best_of(lambda: fn(kernels.BACKENDS[b]), args.repeat) for b in names]
        row = f"{label:<14}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times)
        if len(names) > 1:
            row += f"{times[names.index('python')] / times[names.index('cython')]:>11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
