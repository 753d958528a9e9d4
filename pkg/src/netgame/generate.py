"""Random connected game instances for tests and experiments."""

from __future__ import annotations

import numpy as np

from .errors import InvalidFlag
from .graph import Graph, reachable
from .model import GameInstance

B_LOW, B_HIGH = 1.0, 10.0


def random_connected_edges(n: int, edge_prob: float, rng: np.random.Generator) -> list[tuple[int, int]]:
    """Erdos-Renyi edges on {0..n}, then every node left out of 0's component
    is tied to a uniformly chosen node that is already reached."""
    edges = [(u, v) for u in range(n + 1) for v in range(u + 1, n + 1) if rng.random() < edge_prob]
    g = Graph.from_edges(edges, nodes=range(n + 1))
    reached = reachable(g, 0)
    for u in range(1, n + 1):
        if u in reached:
            continue
        pool = sorted(reached)
        r = pool[int(rng.integers(len(pool)))]
        edges.append((min(r, u), max(r, u)))
        g = Graph.from_edges(edges, nodes=range(n + 1))
        reached |= reachable(g, u)
    return sorted(edges)


def generate_game(nodes: int, edge_prob: float, seed: int, sort_b: bool = True) -> GameInstance:
    """Random instance with quadratic costs (gamma = 1) and d in (0, 1]."""
    if not isinstance(nodes, int) or nodes < 1:
        raise InvalidFlag(f"--nodes must be >= 1, got {nodes!r}")
    if not (0.0 < edge_prob <= 1.0):
        raise InvalidFlag(f"--edge-prob must lie in (0, 1], got {edge_prob!r}")
    rng = np.random.default_rng(seed)
    edges = random_connected_edges(nodes, edge_prob, rng)
    while True:
        b = rng.uniform(B_LOW, B_HIGH, nodes)
        if len(np.unique(b)) == nodes:
            break
    if sort_b:
        b = np.sort(b)
    d = 1.0 - rng.random(nodes)
    return GameInstance.create(edges, b.tolist(), d.tolist(), gamma=1.0)
