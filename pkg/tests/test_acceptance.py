"""Exit criteria.  Each test records one PASS/FAIL line, printed at the end
of the pytest run (and when this file is executed directly)."""

import math
import time

import networkx as nx
import numpy as np
import pytest

from netgame.engine import eval_F, reduce_game, solve, solve_detailed
from netgame.generate import generate_game
from netgame.graph import Graph, find_linkers, has_ascending_paths, properize
from netgame.model import GameInstance
from netgame.verify import best_attack_path, simulate_payoffs, verify_equilibrium

from conftest import EX1_U, ex1_game, line_game, star_game

RESULTS: list[str] = []
PROBS = (0.2, 0.5, 0.8)


def record(name: str, ok: bool, detail: str) -> None:
    RESULTS.append(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, detail


def sweep_game(seed: int) -> GameInstance:
    n = 1 + int(np.random.default_rng(seed).integers(12))
    return generate_game(n, PROBS[seed % 3], seed)


def mixed_instances(count: int, start: int = 0):
    seed = start
    while count:
        game = sweep_game(seed)
        seed += 1
        s = solve_detailed(game)
        if s.equilibrium.kind == "mixed":
            count -= 1
            yield game, s


def test_ac1_ex1_end_to_end():
    game = ex1_game()
    g = game.graph
    linkers = find_linkers(g, game.valuation)
    proper, _ = properize(g, game.valuation)
    times = []
    for _ in range(20):
        t0 = time.perf_counter()
        s = solve_detailed(game)
        times.append(time.perf_counter() - t0)
    eq = s.equilibrium
    q = [pr for _, pr in eq.attacker]
    path4 = {p[-1]: p for p, _ in eq.attacker}[4]
    report = verify_equilibrium(game, eq, 1e-9)
    checks = {
        "linkers": linkers == {1},
        "proper": proper.edge_set() == {(0, 2), (2, 3), (2, 4), (3, 4)},
        "kstar": s.tree.kstar == 2,
        "U": abs(eq.utility - EX1_U) <= 1e-9,
        "sum_q": abs(math.fsum(q) - 1) <= 1e-12,
        "path4": path4 == (0, 2, 1, 4),
        "verify": report.is_epsilon_ne,
        "runtime": min(times) < 0.010,
    }
    record("AC1 EX1 end-to-end", all(checks.values()),
           f"U*={eq.utility!r} k*={s.tree.kstar} path4={path4} best={min(times) * 1e3:.3f}ms failed={[k for k, v in checks.items() if not v]}")


def test_ac2_line_family():
    rng = np.random.default_rng(2024)
    t0 = time.perf_counter()
    bad = []
    for n in range(2, 51):
        b = np.sort(rng.uniform(1.0, 10.0, n)).tolist()
        game = GameInstance.create([(j, j + 1) for j in range(n)], b, [1.0] * n)
        s = solve_detailed(game)
        tree = s.equilibrium.tree
        k = tree.kstar
        line_tree = tree.parent[k] == 0 and all(tree.parent[j] == j - 1 for j in tree.support if j > k)
        line_tree &= tree.support == tuple(range(k, n + 1))
        ok = verify_equilibrium(game, s.equilibrium, 1e-8).is_epsilon_ne
        if not (line_tree and ok):
            bad.append(n)
    elapsed = time.perf_counter() - t0
    record("AC2 line family n=2..50", not bad and elapsed < 1.0, f"failures={bad} total={elapsed:.3f}s")


def test_ac3_random_oracle_sweep():
    eps = 1e-7
    t0 = time.perf_counter()
    bad, worst = [], 0.0
    for seed in range(500):
        game = sweep_game(seed)
        eq = solve(game)
        report = verify_equilibrium(game, eq, eps)
        _, best = best_attack_path(game.edges, eq.defense, game.valuation)
        worst = max(worst, report.attacker_gap, report.support_gap, report.max_defender_gap, report.normalization_gap)
        if not (report.is_epsilon_ne and best <= eq.utility + eps):
            bad.append(seed)
    elapsed = time.perf_counter() - t0
    record("AC3 random oracle sweep (500 seeds)", not bad and elapsed < 30.0,
           f"failures={bad[:10]} worst_gap={worst:.2e} total={elapsed:.2f}s")


def _pure_inequality_holds(game: GameInstance) -> bool:
    # Independent evaluation of the pure-equilibrium inequality.
    top = max(range(1, game.n + 1), key=game.bval)
    h = nx.Graph(list(game.edges))
    h.add_nodes_from(range(game.n + 1))
    h.remove_node(top)
    around = nx.node_connected_component(h, 0) - {0}
    value = game.bval(top) * (1 - game.cost(top).inverse_derivative(game.dval(top)))
    return all(value >= game.bval(j) for j in around)


def test_ac4_pure_consistency():
    star = star_game()
    pe = solve(star)
    checks = [
        pe.kind == "pure" and abs(pe.x_target - 0.4) <= 1e-15 and abs(pe.utility - 1.2) <= 1e-15,
        verify_equilibrium(star, pe, 1e-12).is_epsilon_ne,
        solve(line_game()).kind == "mixed",
    ]
    mismatched, pure_seen = [], 0
    for seed in range(300):
        game = sweep_game(seed)
        eq = solve(game)
        expect = _pure_inequality_holds(game)
        pure_seen += expect
        if (eq.kind == "pure") != expect:
            mismatched.append(seed)
        if eq.kind == "pure" and not verify_equilibrium(game, eq, 1e-12).is_epsilon_ne:
            mismatched.append(seed)
    record("AC4 pure-NE consistency", all(checks) and not mismatched and pure_seen > 0,
           f"star={checks} mismatches={mismatched[:10]} pure_instances={pure_seen}/300")


def test_ac5_reduction_correspondence():
    done, seed, worst_u, worst_x, bad = 0, 0, 0.0, 0.0, []
    rng = np.random.default_rng(5)
    while done < 100:
        game = sweep_game(seed)
        seed += 1
        eq = solve(game)
        neutral = [j for j in range(1, game.n + 1) if j not in eq.support]
        if not neutral:
            continue
        m = int(rng.choice(neutral))
        reduced, relabel = reduce_game(game, m)
        req = solve(reduced)
        du = abs(req.utility - eq.utility)
        dx = max(abs(eq.defense[j] - req.defense[relabel[j]]) for j in range(1, game.n + 1) if j != m)
        worst_u, worst_x = max(worst_u, du), max(worst_x, dx)
        if du > 1e-9 or dx > 1e-9:
            bad.append(seed - 1)
        done += 1
    record("AC5 reduction correspondence (100 instances)", not bad,
           f"max|dU|={worst_u:.2e} max|dx|={worst_x:.2e} failures={bad[:10]}")


def test_ac6_F_monotone_and_root():
    bad, worst = [], 0.0
    for game, s in mixed_instances(100):
        cg, tree, U = s.canonical, s.tree, s.tree_eq.U
        top = cg.inner.bval(tree.kstar)
        grid = np.linspace(tree.floor, top, 1001)[1:]
        vals = np.array([eval_F(cg, tree, float(u)) for u in grid])
        resid = abs(eval_F(cg, tree, U) - 1.0)
        worst = max(worst, resid)
        if not (np.all(np.diff(vals) < 0) and resid <= 1e-10):
            bad.append(game)
    record("AC6 F monotone on grid, F(U*)=1", not bad, f"failures={len(bad)} max|F(U*)-1|={worst:.2e}")


def test_ac7_properization_fixpoint():
    chain = Graph.from_edges([(0, 3), (3, 1), (1, 2)])
    b = {1: 1.0, 2: 2.0, 3: 3.0}
    g, trace = properize(chain, b)
    chain_ok = trace.passes == ((1,), (2,)) and set(trace.removed) == {1, 2} and has_ascending_paths(g, b)
    leftover = []
    for seed in range(500):
        game = sweep_game(seed)
        proper, _ = properize(game.graph, game.valuation)
        if find_linkers(proper, game.valuation) or not has_ascending_paths(proper, game.valuation):
            leftover.append(seed)
    record("AC7 properization fixpoint", chain_ok and not leftover,
           f"chain passes={trace.passes} random failures={leftover[:10]}")


def test_ac8_monte_carlo():
    t0 = time.perf_counter()
    cases = [(ex1_game(), solve(ex1_game()))]
    cases += [(g, s.equilibrium) for g, s in mixed_instances(10, start=1000)]
    inside = 0
    zs = []
    for i, (game, eq) in enumerate(cases):
        est = simulate_payoffs(game, eq, 1_000_000, seed=100 + i)
        z = (est.attacker_mean - eq.utility) / est.attacker_se
        zs.append(round(z, 2))
        inside += abs(z) <= 3
    elapsed = time.perf_counter() - t0
    record("AC8 Monte Carlo agreement", inside >= 9 and elapsed < 20.0,
           f"{inside}/11 within 3 SE, z={zs} total={elapsed:.2f}s")


def test_ac9_complexity_envelope():
    sizes = (50, 100, 200)
    times = []
    for n in sizes:
        game = generate_game(n, 0.1, seed=n)
        best = math.inf
        for _ in range(3):
            t0 = time.perf_counter()
            eq = solve(game)
            best = min(best, time.perf_counter() - t0)
        assert verify_equilibrium(game, eq, 1e-9).is_epsilon_ne
        times.append(best)
    slope = float(np.polyfit(np.log(sizes), np.log(times), 1)[0])
    record("AC9 complexity envelope", max(times) < 5.0 and slope <= 4.5,
           f"times={[f'{t:.4f}s' for t in times]} log-log slope={slope:.2f}")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
