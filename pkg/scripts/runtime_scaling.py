"""Time the solver on random instances of growing size and fit a log-log slope.

    python scripts/runtime_scaling.py --sizes 50 100 200 400 --edge-prob 0.1
"""

import argparse
import time

import numpy as np

from netgame.engine import solve_detailed
from netgame.generate import generate_game


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[50, 100, 200, 400])
    ap.add_argument("--edge-prob", type=float, default=0.1)
    ap.add_argument("--seeds", type=int, default=3)
    args = ap.parse_args()

    rows = []
    print(f"{'n':>6} {'seconds':>10} {'k*':>6} {'|D|':>6} {'linkers':>8}")
    for n in args.sizes:
        best, info = np.inf, None
        for seed in range(args.seeds):
            game = generate_game(n, args.edge_prob, seed)
            t0 = time.perf_counter()
            s = solve_detailed(game)
            dt = time.perf_counter() - t0
            if dt < best:
                best, info = dt, s
        kstar = info.tree.kstar if info.tree else "-"
        size = len(info.equilibrium.support)
        removed = len(info.trace.removed) if info.trace else 0
        print(f"{n:>6} {best:>10.4f} {kstar!s:>6} {size:>6} {removed:>8}")
        rows.append((n, best))
    ns, ts = np.array(rows).T
    print(f"log-log slope: {np.polyfit(np.log(ns), np.log(ts), 1)[0]:.2f}")


if __name__ == "__main__":
    main()
