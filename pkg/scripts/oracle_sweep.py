"""Solve many random instances and check each one with the independent oracle.

    python scripts/oracle_sweep.py --seeds 2000 --max-n 12 --exhaustive
"""

import argparse
from collections import Counter

import numpy as np

from netgame.engine import solve
from netgame.generate import generate_game
from netgame.verify import exhaustive_best_attack_path, verify_equilibrium


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seeds", type=int, default=500)
    ap.add_argument("--max-n", type=int, default=12)
    ap.add_argument("--epsilon", type=float, default=1e-7)
    ap.add_argument("--exhaustive", action="store_true", help="also enumerate all simple paths on small instances")
    ap.add_argument("--exhaustive-max-n", type=int, default=7, help="largest n enumerated (cost grows factorially)")
    args = ap.parse_args()

    kinds, failures, worst = Counter(), [], 0.0
    for seed in range(args.seeds):
        n = 1 + int(np.random.default_rng(seed).integers(args.max_n))
        p = (0.2, 0.5, 0.8)[seed % 3]
        game = generate_game(n, p, seed)
        eq = solve(game)
        kinds[eq.kind] += 1
        rep = verify_equilibrium(game, eq, args.epsilon)
        gap = max(rep.attacker_gap, rep.support_gap, rep.max_defender_gap, rep.normalization_gap)
        if args.exhaustive and n <= args.exhaustive_max_n:
            _, val = exhaustive_best_attack_path(game.edges, eq.defense, game.valuation)
            gap = max(gap, val - eq.utility)
        worst = max(worst, gap)
        if gap > args.epsilon:
            failures.append(seed)
    print(f"instances: {args.seeds}  kinds: {dict(kinds)}")
    print(f"worst gap: {worst:.3e}  failures: {failures or 'none'}")


if __name__ == "__main__":
    main()
