import dataclasses
import math

import pytest
from hypothesis import given, settings, strategies as st

from netgame.engine import MixedEquilibrium, solve
from netgame.errors import StructuralMismatch
from netgame.model import GameInstance
from netgame.verify import (
    best_attack_path,
    exhaustive_best_attack_path,
    simulate_payoffs,
    verify_equilibrium,
)

from conftest import EX1_EDGES, EX1_U, connected_games, ex1_game, star_game

B4 = {1: 1.0, 2: 2.0, 3: 3.0, 4: 4.0}


def test_best_path_no_defense():
    path, value = best_attack_path(EX1_EDGES, {j: 0.0 for j in B4}, B4)
    assert value == 4.0 and path[-1] == 4


def test_best_path_at_equilibrium():
    eq = solve(ex1_game())
    _, value = best_attack_path(EX1_EDGES, eq.defense, B4)
    assert value == pytest.approx(EX1_U, abs=1e-10)


def test_best_path_blocked_wall():
    path, value = best_attack_path([(0, 1), (1, 2)], {1: 1.0, 2: 0.0}, {1: 1.0, 2: 2.0})
    assert value == 0.0


@given(connected_games(max_n=7), st.data())
@settings(max_examples=80, deadline=None)
def test_dijkstra_matches_enumeration(game, data):
    x = {j: data.draw(st.sampled_from([0.0, 1.0]) | st.floats(0.0, 1.0)) for j in range(1, game.n + 1)}
    _, fast = best_attack_path(game.edges, x, game.valuation)
    _, slow = exhaustive_best_attack_path(game.edges, x, game.valuation)
    assert fast == pytest.approx(slow, rel=1e-12, abs=1e-15)


@given(connected_games(max_n=7), st.data())
@settings(max_examples=60, deadline=None)
def test_best_value_monotone_in_investment(game, data):
    x = {j: data.draw(st.floats(0.0, 0.9)) for j in range(1, game.n + 1)}
    j = data.draw(st.integers(1, game.n))
    _, before = best_attack_path(game.edges, x, game.valuation)
    x[j] = min(1.0, x[j] + data.draw(st.floats(0.0, 0.5)))
    _, after = best_attack_path(game.edges, x, game.valuation)
    assert after <= before + 1e-15


@given(connected_games(max_n=7))
def test_zero_defense_value_is_max_b(game):
    _, value = best_attack_path(game.edges, {j: 0.0 for j in range(1, game.n + 1)}, game.valuation)
    assert value == max(game.b)


def test_verify_ex1():
    game = ex1_game()
    report = verify_equilibrium(game, solve(game), 1e-9)
    assert report.is_epsilon_ne
    assert report.normalization_gap <= 1e-12


def test_verify_detects_perturbed_defense():
    game = ex1_game()
    eq = solve(game)
    x = dict(eq.defense)
    x[2] += 0.05
    report = verify_equilibrium(game, dataclasses.replace(eq, defense=x), 1e-6)
    assert not report.is_epsilon_ne
    assert report.defender_gaps[2] == pytest.approx(0.05, abs=1e-12)


def test_verify_detects_swapped_probabilities():
    game = ex1_game()
    eq = solve(game)
    (p2, q2), (p3, q3), (p4, q4) = eq.attacker
    bad = dataclasses.replace(eq, attacker=[(p2, q2), (p3, q4), (p4, q3)])
    report = verify_equilibrium(game, bad, 1e-6)
    assert not report.is_epsilon_ne
    assert report.defender_gaps[3] > 1e-6 and report.defender_gaps[4] > 1e-6


def test_verify_pure_exact():
    game = star_game()
    assert verify_equilibrium(game, solve(game), 1e-12).is_epsilon_ne


def test_verify_structural_errors():
    game = ex1_game()
    eq = solve(game)
    with pytest.raises(StructuralMismatch):
        verify_equilibrium(game, dataclasses.replace(eq, attacker=[((0, 4), 1.0)]))
    with pytest.raises(StructuralMismatch):
        verify_equilibrium(game, dataclasses.replace(eq, attacker=[((0, 2, 0, 2), 1.0)]))
    with pytest.raises(StructuralMismatch):
        verify_equilibrium(game, dataclasses.replace(eq, defense={1: 0.0}))


def test_monte_carlo_pure_star():
    game = star_game()
    est = simulate_payoffs(game, solve(game), 200_000, seed=3)
    assert abs(est.attacker_mean - 1.2) <= 3 * est.attacker_se


def test_monte_carlo_certain_interception():
    game = GameInstance.create([(0, 1), (1, 2)], [1.0, 2.0], [1.0, 1.0])
    eq = MixedEquilibrium([((0, 1, 2), 1.0)], {1: 1.0, 2: 1.0}, 0.0, (2,))
    est = simulate_payoffs(game, eq, 10_000, seed=0)
    assert est.attacker_mean == 0.0 and est.attacker_se == 0.0


def test_monte_carlo_reproducible():
    game = ex1_game()
    eq = solve(game)
    a = simulate_payoffs(game, eq, 50_000, seed=11, streams=4)
    b = simulate_payoffs(game, eq, 50_000, seed=11, streams=4)
    assert a == b
    assert simulate_payoffs(game, eq, 50_000, seed=12, streams=4) != a


def test_monte_carlo_coverage_over_seeds():
    game = ex1_game()
    eq = solve(game)
    inside = sum(
        abs(est.attacker_mean - EX1_U) <= 3 * est.attacker_se
        for est in (simulate_payoffs(game, eq, 20_000, seed=s) for s in range(40))
    )
    assert inside >= 37


def test_neutral_node_investing_loses():
    game = ex1_game()
    eq = solve(game)
    base = simulate_payoffs(game, eq, 20_000, seed=5)
    x = dict(eq.defense)
    x[1] = 0.3
    moved = simulate_payoffs(game, dataclasses.replace(eq, defense=x), 20_000, seed=5)
    assert moved.defender_mean[1] < base.defender_mean[1] == 0.0
    assert moved.defender_mean[1] == pytest.approx(-game.cost(1).value(0.3))


def test_defender_loss_estimate():
    game = ex1_game()
    eq = solve(game)
    est = simulate_payoffs(game, eq, 200_000, seed=9)
    q4 = dict((p[-1], pr) for p, pr in eq.attacker)[4]
    exact = -q4 * (EX1_U / 2) * 0.5 - 0.5**2 / 2
    assert abs(est.defender_mean[4] - exact) <= 4 * est.defender_se[4] + 1e-12
