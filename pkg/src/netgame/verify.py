"""Independent equilibrium checks.

Nothing here touches the constructive solver.  Graph search goes through
networkx, payoffs are recomputed from the raw definitions, and the Monte
Carlo estimator samples interceptions node by node.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import networkx as nx
import numpy as np

from .errors import StructuralMismatch
from .model import GameInstance

EPS_CLOSED_FORM = 1e-9
EPS_BISECTION = 1e-7
EXHAUSTIVE_MAX_N = 10


def _nx_graph(edges: Iterable[Sequence[int]], nodes: Iterable[int] = ()) -> nx.Graph:
    if hasattr(edges, "edges") and callable(edges.edges):
        edges = edges.edges()
    h = nx.Graph()
    h.add_nodes_from(nodes)
    h.add_node(0)
    h.add_edges_from(edges)
    return h


def reach_probability(path: Sequence[int], x: Mapping[int, float]) -> float:
    """Probability that an attack along ``path`` arrives at its last node."""
    alpha = 1.0
    for v in path[1:-1]:
        alpha *= 1.0 - x[v]
    return alpha


def path_payoff(path: Sequence[int], x: Mapping[int, float], b: Mapping[int, float]) -> float:
    t = path[-1]
    return reach_probability(path, x) * (1.0 - x[t]) * b[t]


def best_attack_path(g, x: Mapping[int, float], b: Mapping[int, float]) -> tuple[tuple[int, ...], float]:
    """Attacker best response against fixed investments ``x``.

    Most-reliable-path search: each transit node costs ``-log(1 - x)``, so a
    shortest path maximises the probability of getting through.  A node with
    ``x = 1`` cannot be crossed at all.
    """
    h = _nx_graph(g, b.keys())

    def weight(u, v, _):
        if u == 0:
            return 0.0
        if x[u] >= 1.0:
            return None
        return -math.log1p(-x[u])

    _, paths = nx.single_source_dijkstra(h, 0, weight=weight)
    best, best_val = (0,), -math.inf
    for j in sorted(paths):
        if j == 0:
            continue
        val = path_payoff(paths[j], x, b)
        if val > best_val:
            best, best_val = tuple(paths[j]), val
    return best, max(best_val, 0.0)


def exhaustive_best_attack_path(g, x: Mapping[int, float], b: Mapping[int, float]) -> tuple[tuple[int, ...], float]:
    """Same as :func:`best_attack_path` by enumerating every simple path."""
    h = _nx_graph(g, b.keys())
    if h.number_of_nodes() - 1 > EXHAUSTIVE_MAX_N:
        raise ValueError(f"exhaustive search is limited to n <= {EXHAUSTIVE_MAX_N}")
    best, best_val = (0,), -math.inf
    for j in sorted(b):
        for p in nx.all_simple_paths(h, 0, j):
            val = path_payoff(p, x, b)
            if val > best_val:
                best, best_val = tuple(p), val
    return best, max(best_val, 0.0)


@dataclass
class VerificationReport:
    is_epsilon_ne: bool
    epsilon_used: float
    attacker_gap: float
    support_gap: float
    defender_gaps: dict[int, float]
    normalization_gap: float
    best_path: tuple[int, ...] = ()
    best_value: float = 0.0

    @property
    def max_defender_gap(self) -> float:
        return max(self.defender_gaps.values(), default=0.0)

    def lines(self) -> list[str]:
        return [
            f"is_epsilon_ne: {self.is_epsilon_ne}",
            f"epsilon_used: {self.epsilon_used:.3e}",
            f"attacker_gap: {self.attacker_gap:.6e}",
            f"support_gap: {self.support_gap:.6e}",
            f"max_defender_gap: {self.max_defender_gap:.6e}",
            f"normalization_gap: {self.normalization_gap:.6e}",
            f"best_path: {list(self.best_path)} value {self.best_value!r}",
        ] + [f"defender_gap[{j}]: {gap:.6e}" for j, gap in sorted(self.defender_gaps.items())]


def _check_structure(game: GameInstance, h: nx.Graph, eq) -> dict[int, float]:
    x = {int(j): float(v) for j, v in eq.defense.items()}
    if set(x) != set(range(1, game.n + 1)):
        raise StructuralMismatch("defense must cover defenders 1..n exactly")
    for j, v in x.items():
        if not (0.0 <= v <= 1.0):
            raise StructuralMismatch(f"investment x_{j} = {v!r} outside [0, 1]")
    for path, prob in eq.attacker:
        if not (prob >= 0.0 and math.isfinite(prob)):
            raise StructuralMismatch(f"invalid probability {prob!r}")
        if len(path) < 2 or path[0] != 0:
            raise StructuralMismatch(f"path {list(path)} must start at 0 and reach a defender")
        if len(set(path)) != len(path):
            raise StructuralMismatch(f"path {list(path)} is not simple")
        if 0 in path[1:] or any(not h.has_edge(u, v) for u, v in zip(path, path[1:])):
            raise StructuralMismatch(f"path {list(path)} is not a path of the game graph")
    return x


def verify_equilibrium(game: GameInstance, eq, epsilon: float | None = None) -> VerificationReport:
    """Check that no player gains more than ``epsilon`` by deviating.

    Attacker deviations are checked over single paths; the attacker payoff is
    linear in her mixture, so that covers every mixed deviation.  Defender
    payoffs are concave, so the first-order residual certifies optimality.
    """
    if epsilon is None:
        epsilon = EPS_CLOSED_FORM if game.all_quadratic else EPS_BISECTION
    h = _nx_graph(game.edges, range(game.n + 1))
    x = _check_structure(game, h, eq)
    b = {j: game.bval(j) for j in range(1, game.n + 1)}
    U = float(eq.utility)

    total = math.fsum(p for _, p in eq.attacker)
    support_gap = max((abs(path_payoff(p, x, b) - U) for p, pr in eq.attacker if pr > 0), default=0.0)
    best, best_val = best_attack_path(h, x, b)

    pressure = {j: 0.0 for j in b}
    for p, pr in eq.attacker:
        pressure[p[-1]] += pr * reach_probability(p, x)
    gaps = {
        j: abs(game.cost(j).derivative(x[j]) - game.dval(j) * pressure[j])
        for j in b
    }
    report = VerificationReport(
        is_epsilon_ne=False,
        epsilon_used=epsilon,
        attacker_gap=best_val - U,
        support_gap=support_gap,
        defender_gaps=gaps,
        normalization_gap=abs(total - 1.0),
        best_path=best,
        best_value=best_val,
    )
    report.is_epsilon_ne = (
        report.attacker_gap <= epsilon
        and report.support_gap <= epsilon
        and report.max_defender_gap <= epsilon
        and report.normalization_gap <= epsilon
    )
    return report


@dataclass
class MonteCarloEstimate:
    samples: int
    attacker_mean: float
    attacker_se: float
    defender_mean: dict[int, float] = field(default_factory=dict)
    defender_se: dict[int, float] = field(default_factory=dict)


def simulate_payoffs(game: GameInstance, eq, samples: int, seed: int, streams: int = 1) -> MonteCarloEstimate:
    """Play the profile ``samples`` times and average realised payoffs.

    Each play draws a path from the attacker's mixture and walks it, every
    node intercepting independently with its own probability.  The budget is
    split across ``streams`` independently seeded generators; the result is
    reproducible for a fixed ``(seed, streams)`` pair.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    paths = [tuple(p) for p, _ in eq.attacker]
    probs = np.array([pr for _, pr in eq.attacker], dtype=float)
    x = {int(j): float(v) for j, v in eq.defense.items()}
    successes = np.zeros(len(paths), dtype=np.int64)

    budget = [samples // streams + (1 if s < samples % streams else 0) for s in range(streams)]
    for rng, m in zip((np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(streams)), budget):
        if m == 0:
            continue
        counts = rng.multinomial(m, probs / probs.sum())
        for i, (p, c) in enumerate(zip(paths, counts)):
            if c == 0:
                continue
            alive = np.ones(c, dtype=bool)
            for v in p[1:]:
                alive &= rng.random(c) >= x[v]
            successes[i] += int(alive.sum())

    N = float(samples)
    payoff = np.array([game.bval(p[-1]) for p in paths])
    s1 = float(np.dot(successes, payoff))
    s2 = float(np.dot(successes, payoff**2))
    mean = s1 / N
    var = max(s2 / N - mean * mean, 0.0)

    hits = {j: 0 for j in range(1, game.n + 1)}
    for p, s in zip(paths, successes):
        hits[p[-1]] += int(s)
    dmean, dse = {}, {}
    for j, k in hits.items():
        rate = k / N
        dmean[j] = -game.dval(j) * rate - game.cost(j).value(x[j])
        dse[j] = game.dval(j) * math.sqrt(rate * (1.0 - rate) / N)
    return MonteCarloEstimate(samples, mean, math.sqrt(var / N), dmean, dse)
