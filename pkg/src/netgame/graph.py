"""Undirected graphs over {0, ..., n} and the neutral-node reduction machinery.

Node 0 is always the attacker.  Removing a defender ``m`` from a graph never
destroys an attack route: every pair of former neighbours of ``m`` becomes
adjacent, so a path that passed through ``m`` survives with ``m`` spliced out.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import CannotRemoveAttacker, NodeAbsent, NoSuchPath

ATTACKER = 0

Path = tuple[int, ...]
Edge = tuple[int, int]


def _edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class Graph:
    """Immutable simple undirected graph that always contains node 0."""

    __slots__ = ("_adj",)

    def __init__(self, adjacency: Mapping[int, Iterable[int]]):
        adj = {int(v): frozenset(int(u) for u in nb) for v, nb in adjacency.items()}
        adj.setdefault(ATTACKER, frozenset())
        for v, nb in adj.items():
            if v in nb:
                raise ValueError(f"self-loop at node {v}")
            for u in nb:
                if u not in adj or v not in adj[u]:
                    raise ValueError(f"asymmetric adjacency between {v} and {u}")
        self._adj = adj

    @classmethod
    def from_edges(cls, edges: Iterable[Sequence[int]], nodes: Iterable[int] = ()) -> "Graph":
        adj: dict[int, set[int]] = {ATTACKER: set()}
        for v in nodes:
            adj.setdefault(int(v), set())
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
        return cls(adj)

    @property
    def nodes(self) -> tuple[int, ...]:
        return tuple(sorted(self._adj))

    @property
    def defenders(self) -> tuple[int, ...]:
        return tuple(v for v in sorted(self._adj) if v != ATTACKER)

    def __contains__(self, v: object) -> bool:
        return v in self._adj

    def __len__(self) -> int:
        return len(self._adj)

    def neighbors(self, v: int) -> tuple[int, ...]:
        if v not in self._adj:
            raise NodeAbsent(f"node {v} is not in the graph")
        return tuple(sorted(self._adj[v]))

    def has_edge(self, u: int, v: int) -> bool:
        return u in self._adj and v in self._adj[u]

    def edges(self) -> list[Edge]:
        """Edges as sorted ``(u, v)`` pairs with ``u < v``."""
        return sorted({_edge(u, v) for u, nb in self._adj.items() for v in nb})

    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges())

    def adjacency(self) -> dict[int, set[int]]:
        """A mutable deep copy of the adjacency, for in-place work."""
        return {v: set(nb) for v, nb in self._adj.items()}

    def is_connected(self) -> bool:
        return len(reachable(self, ATTACKER)) == len(self._adj)

    def without(self, removed: Iterable[int]) -> "Graph":
        """Induced subgraph with ``removed`` deleted (no neighbour completion)."""
        gone = set(removed) - {ATTACKER}
        return Graph({v: nb - gone for v, nb in self._adj.items() if v not in gone})

    def is_path(self, path: Sequence[int]) -> bool:
        if not path or len(set(path)) != len(path):
            return False
        if any(v not in self._adj for v in path):
            return False
        return all(self.has_edge(u, v) for u, v in zip(path, path[1:]))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._adj == other._adj

    def __hash__(self) -> int:
        return hash(self.edge_set()) ^ hash(frozenset(self._adj))

    def __repr__(self) -> str:
        return f"Graph(nodes={list(self.nodes)}, edges={self.edges()})"


def reachable(g: Graph, source: int, blocked: Iterable[int] = ()) -> set[int]:
    """Nodes reachable from ``source`` without entering ``blocked``."""
    blocked = set(blocked)
    seen = {source}
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for u in g.neighbors(v):
            if u not in seen and u not in blocked:
                seen.add(u)
                queue.append(u)
    return seen


def bfs_path(g: Graph, source: int, target: int, blocked: Iterable[int] = ()) -> Path | None:
    """Shortest ``source -> target`` path avoiding ``blocked``.

    Neighbours are scanned in ascending label order, so the result is
    deterministic.  Returns ``None`` when ``target`` cannot be reached.
    """
    blocked = set(blocked) - {source, target}
    parent = {source: source}
    queue = deque([source])
    while queue:
        v = queue.popleft()
        if v == target:
            out = [v]
            while out[-1] != source:
                out.append(parent[out[-1]])
            return tuple(reversed(out))
        for u in g.neighbors(v):
            if u not in parent and u not in blocked:
                parent[u] = v
                queue.append(u)
    return None


# -- reduction ---------------------------------------------------------------

def contract_in_place(adj: dict[int, set[int]], m: int) -> frozenset[int]:
    """Remove ``m`` from a mutable adjacency, completing its neighbourhood.

    Returns the neighbour set of ``m`` at removal time.
    """
    if m == ATTACKER:
        raise CannotRemoveAttacker("node 0 is the attacker and cannot be removed")
    if m not in adj:
        raise NodeAbsent(f"node {m} is not in the graph")
    nbrs = adj.pop(m)
    for u in nbrs:
        nb = adj[u]
        nb.discard(m)
        nb |= nbrs
        nb.discard(u)
    return frozenset(nbrs)


@dataclass(frozen=True)
class ReductionTrace:
    """Which nodes were removed, in order, and their neighbourhoods at removal."""

    removed: tuple[int, ...] = ()
    neighborhoods: tuple[frozenset[int], ...] = ()
    passes: tuple[tuple[int, ...], ...] = field(default=())

    def replay(self, g: Graph) -> Graph:
        adj = g.adjacency()
        for m in self.removed:
            contract_in_place(adj, m)
        return Graph(adj)

    def __add__(self, other: "ReductionTrace") -> "ReductionTrace":
        return ReductionTrace(
            self.removed + other.removed,
            self.neighborhoods + other.neighborhoods,
            self.passes + other.passes,
        )


def reduce_by_node(g: Graph, m: int) -> Graph:
    """``g`` reduced by ``m``: delete ``m`` and join every pair of its neighbours."""
    adj = g.adjacency()
    contract_in_place(adj, m)
    return Graph(adj)


def reduce_by_set(g: Graph, s: Iterable[int]) -> tuple[Graph, ReductionTrace]:
    """Reduce ``g`` by every node of ``s``, ascending.  The result does not
    depend on the order; ascending order only makes the trace canonical."""
    order = tuple(sorted(set(s)))
    adj = g.adjacency()
    hoods = tuple(contract_in_place(adj, m) for m in order)
    return Graph(adj), ReductionTrace(order, hoods, (order,) if order else ())


def find_linkers(g: Graph, b: Mapping[int, float]) -> set[int]:
    """Nodes not adjacent to 0 whose neighbours all have strictly larger ``b``."""
    out = set()
    for i in g.defenders:
        nb = g.neighbors(i)
        if ATTACKER in nb:
            continue
        if all(b[j] > b[i] for j in nb):
            out.add(i)
    return out


def properize(g: Graph, b: Mapping[int, float]) -> tuple[Graph, ReductionTrace]:
    """Remove linkers until none are left.

    One pass is not always enough: removing a linker can expose a new one
    (chain 0-3-1-2 with ascending ``b``), so passes repeat to a fixpoint.
    """
    trace = ReductionTrace()
    while True:
        linkers = find_linkers(g, b)
        if not linkers:
            return g, trace
        g, step = reduce_by_set(g, linkers)
        trace = trace + step


def has_ascending_paths(g: Graph, b: Mapping[int, float]) -> bool:
    """True iff every node is reachable from 0 by a path of strictly increasing ``b``."""
    seen = {ATTACKER}
    queue = deque([ATTACKER])
    while queue:
        v = queue.popleft()
        for u in g.neighbors(v):
            if u not in seen and (v == ATTACKER or b[u] > b[v]):
                seen.add(u)
                queue.append(u)
    return len(seen) == len(g)


# -- paths -------------------------------------------------------------------

def connecting_path(
    g: Graph, d_set: Iterable[int], i: int, j: int, avoid: Iterable[int] = ()
) -> Path:
    """A shortest ``i -> j`` path whose interior avoids ``d_set``, node 0 and ``avoid``."""
    blocked = set(d_set) | {ATTACKER} | set(avoid)
    path = bfs_path(g, i, j, blocked)
    if path is None:
        raise NoSuchPath(f"no path from {i} to {j} avoiding {sorted(blocked - {i, j})}")
    return path


def project_path(p: Sequence[int], m: int) -> Path:
    """Splice ``m`` out of ``p`` (identity when ``m`` is absent)."""
    return tuple(v for v in p if v != m)
