"""Compare the numba-compiled kernels against the interpreted fallback.

Each mode runs in a fresh interpreter because the acceleration flag is read
at import time::

    python benchmarks/bench_kernels.py            # both modes, side by side
    python benchmarks/bench_kernels.py --grid 40  # smaller problem

The compiled timings exclude the first (compiling) call.
"""

import argparse
import json
import os
import subprocess
import sys
import time

WORKER = r"""
import json, sys, time
import numpy as np
from reorder_advisor import kernels, _jit
from reorder_advisor.matrix import Permutation, symmetrize
from reorder_advisor.synth import grid2d, banded

k, repeat = int(sys.argv[1]), int(sys.argv[2])
rng = np.random.default_rng(0)
m = grid2d(k, k, rng, nine_point=True)
g = symmetrize(m)
perm = rng.permutation(g.n)
g = g.relabel(Permutation(perm))
big = banded(50 * k * k, 8, 0.5, rng)
parent = kernels.elimination_tree(g.n, g.indptr, g.indices)

cases = {
    "bandwidth_profile": lambda: kernels.bandwidth_profile(big.n_rows, big.row_ptr, big.col_idx),
    "connected_components": lambda: kernels.connected_components(g.n, g.indptr, g.indices),
    "reverse_cuthill_mckee": lambda: kernels.reverse_cuthill_mckee(g.n, g.indptr, g.indices, 10),
    "minimum_degree": lambda: kernels.minimum_degree(g.n, g.indptr, g.indices),
    "elimination_tree": lambda: kernels.elimination_tree(g.n, g.indptr, g.indices),
    "column_counts": lambda: kernels.column_counts(g.n, g.indptr, g.indices, parent),
}
out = {"numba": _jit.USE_NUMBA, "n": g.n, "times": {}}
for name, fn in cases.items():
    fn()  # compile or warm caches
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    out["times"][name] = best
print(json.dumps(out))
"""


def run_mode(disable, grid, repeat):
    env = dict(os.environ)
    env["REORDER_ADVISOR_DISABLE_NUMBA"] = "1" if disable else "0"
    res = subprocess.run(
        [sys.executable, "-c", WORKER, str(grid), str(repeat)],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    return json.loads(res.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--grid", type=int, default=60, help="side of the 9-point grid (default 60)")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    t0 = time.perf_counter()
    fast = run_mode(False, args.grid, args.repeat)
    slow = run_mode(True, args.grid, args.repeat)
    print(f"graph: {args.grid}x{args.grid} 9-point grid, n={fast['n']}  (best of {args.repeat})")
    print(f"{'kernel':<24}{'numba (ms)':>12}{'fallback (ms)':>15}{'speedup':>10}")
    for name, t_fast in fast["times"].items():
        t_slow = slow["times"][name]
        print(f"{name:<24}{1e3 * t_fast:>12.3f}{1e3 * t_slow:>15.3f}{t_slow / t_fast:>9.1f}x")
    print(f"total wall time {time.perf_counter() - t0:.1f} s")


if __name__ == "__main__":
    main()
