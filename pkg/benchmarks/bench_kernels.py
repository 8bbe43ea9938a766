"""Time the compiled and numpy interval kernels on the same batch.

    python benchmarks/bench_kernels.py [--n 200] [--reps 500] [--grid-size 4096]
"""

import argparse
import time

import numpy as np

from gfibvm import kernels
from gfibvm.triangular import dga


def best_of(fn, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=200)
    ap.add_argument("--reps", type=int, default=500)
    ap.add_argument("--grid-size", type=int, default=4096)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    y = np.sort(dga(rng.random((args.reps, args.n)), 0.3), axis=1)
    backends = [("python", kernels.python_backend)]
    if kernels.compiled_backend is not None:
        backends.insert(0, ("cython", kernels.compiled_backend))
    else:
        print("compiled backend not built; timing numpy only")

    names = {kernels.GF: "GF", kernels.MODGF: "ModGF", kernels.FLAT: "FlatBayes", kernels.JEFFREYS: "JeffreysBayes"}
    print(f"n={args.n} replicates={args.reps} grid={args.grid_size}")
    print(f"{'method':<14}" + "".join(f"{b:>12}" for b, _ in backends) + "     speedup")
    for code, name in names.items():
        times = []
        outs = []
        for _, mod in backends:
            outs.append(mod.tri_intervals(y, args.grid_size, code, 0.95))
            times.append(best_of(lambda: mod.tri_intervals(y, args.grid_size, code, 0.95)))
        row = f"{name:<14}" + "".join(f"{t * 1e3:>10.1f}ms" for t in times)
        if len(times) == 2:
            row += f"  {times[1] / times[0]:>9.1f}x  max|diff|={np.abs(outs[0] - outs[1]).max():.1e}"
        print(row)


if __name__ == "__main__":
    main()
