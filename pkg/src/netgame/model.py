"""Game instances, cost functions and the pure-strategy equilibrium test."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Mapping, Sequence

from .errors import (
    DisconnectedGraph,
    DuplicateValuation,
    InvalidCost,
    NonPositiveParameter,
    ValidationError,
)
from .graph import ATTACKER, Graph, Path, bfs_path, reachable

COST_TOL = 1e-12


@dataclass(frozen=True)
class CostFunction:
    """Convex protection cost ``c`` with its derivative and derivative inverse.

    Quadratic costs ``c(x) = gamma * x**2 / 2`` are evaluated in closed form;
    custom costs carry three user callables.  The derivative inverse is never
    computed numerically here: a custom cost must supply it.
    """

    kind: str = "quadratic"
    gamma: float | None = 1.0
    value_fn: Callable[[float], float] | None = field(default=None, repr=False, compare=False)
    derivative_fn: Callable[[float], float] | None = field(default=None, repr=False, compare=False)
    inverse_fn: Callable[[float], float] | None = field(default=None, repr=False, compare=False)

    @classmethod
    def quadratic(cls, gamma: float = 1.0) -> "CostFunction":
        return cls("quadratic", float(gamma))

    @classmethod
    def custom(
        cls,
        value: Callable[[float], float],
        derivative: Callable[[float], float],
        inverse_derivative: Callable[[float], float],
    ) -> "CostFunction":
        return cls("custom", None, value, derivative, inverse_derivative)

    @property
    def is_quadratic(self) -> bool:
        return self.kind == "quadratic"

    def value(self, x: float) -> float:
        if self.is_quadratic:
            return self.gamma * x * x / 2.0
        return self.value_fn(x)

    def derivative(self, x: float) -> float:
        if self.is_quadratic:
            return self.gamma * x
        return self.derivative_fn(x)

    def inverse_derivative(self, y: float) -> float:
        if self.is_quadratic:
            return y / self.gamma
        return self.inverse_fn(y)


@dataclass(frozen=True)
class GameInstance:
    """Attacker at node 0, defenders ``1..n``.

    ``b[j-1]``, ``d[j-1]`` and ``costs[j-1]`` belong to defender ``j``.
    """

    n: int
    edges: frozenset[tuple[int, int]]
    b: tuple[float, ...]
    d: tuple[float, ...]
    costs: tuple[CostFunction, ...]

    @classmethod
    def create(
        cls,
        edges: Iterable[Sequence[int]],
        b: Sequence[float],
        d: Sequence[float],
        gamma: float | Sequence[float] = 1.0,
        costs: Sequence[CostFunction] | None = None,
    ) -> "GameInstance":
        n = len(b)
        if costs is None:
            gammas = [gamma] * n if isinstance(gamma, (int, float)) else list(gamma)
            costs = [CostFunction.quadratic(g) for g in gammas]
        es = frozenset((min(u, v), max(u, v)) for u, v in ((int(u), int(v)) for u, v in edges))
        return cls(n, es, tuple(float(x) for x in b), tuple(float(x) for x in d), tuple(costs))

    @cached_property
    def graph(self) -> Graph:
        return Graph.from_edges(self.edges, nodes=range(self.n + 1))

    @cached_property
    def valuation(self) -> dict[int, float]:
        return {j: self.b[j - 1] for j in range(1, self.n + 1)}

    def bval(self, j: int) -> float:
        return self.b[j - 1]

    def dval(self, j: int) -> float:
        return self.d[j - 1]

    def cost(self, j: int) -> CostFunction:
        return self.costs[j - 1]

    @property
    def all_quadratic(self) -> bool:
        return all(c.is_quadratic for c in self.costs)

    def relabeled(self, mapping: Mapping[int, int]) -> "GameInstance":
        """Copy with defender ``j`` renamed ``mapping[j]`` (0 stays 0)."""
        full = {ATTACKER: ATTACKER, **mapping}
        inv = {new: old for old, new in full.items()}
        order = [inv[j] for j in range(1, self.n + 1)]
        return GameInstance(
            self.n,
            frozenset((min(full[u], full[v]), max(full[u], full[v])) for u, v in self.edges),
            tuple(self.b[o - 1] for o in order),
            tuple(self.d[o - 1] for o in order),
            tuple(self.costs[o - 1] for o in order),
        )


def validate(game: GameInstance) -> GameInstance:
    """Return ``game`` unchanged if it is a well-posed instance, else raise."""
    n = game.n
    if n < 1:
        raise ValidationError("a game needs at least one defender")
    for name, seq in (("b", game.b), ("d", game.d), ("costs", game.costs)):
        if len(seq) != n:
            raise ValidationError(f"{name} has length {len(seq)}, expected n={n}")
    for u, v in game.edges:
        if u == v:
            raise ValidationError(f"self-loop at node {u}")
        if not (0 <= u <= n and 0 <= v <= n):
            raise ValidationError(f"edge ({u}, {v}) has a label outside 0..{n}")
    for j in range(1, n + 1):
        bj, dj = game.bval(j), game.dval(j)
        if not (math.isfinite(bj) and bj > 0):
            raise NonPositiveParameter(f"b_{j} = {bj!r} must be positive")
        if not (math.isfinite(dj) and dj > 0):
            raise NonPositiveParameter(f"d_{j} = {dj!r} must be positive")
    seen: dict[float, int] = {}
    for j in range(1, n + 1):
        bj = game.bval(j)
        if bj in seen:
            raise DuplicateValuation(
                f"defenders {seen[bj]} and {j} share b = {bj!r}; "
                "valuations must be pairwise distinct"
            )
        seen[bj] = j
    for j in range(1, n + 1):
        _check_cost(game.cost(j), game.dval(j), j)
    unreached = set(range(n + 1)) - reachable(game.graph, ATTACKER)
    if unreached:
        raise DisconnectedGraph(f"defenders {sorted(unreached)} are unreachable from node 0")
    return game


def _check_cost(c: CostFunction, dj: float, j: int) -> None:
    if c.is_quadratic and not (c.gamma is not None and math.isfinite(c.gamma) and c.gamma > 0):
        raise InvalidCost(f"defender {j}: quadratic coefficient must be positive, got {c.gamma!r}")
    try:
        slope0, slope1 = c.derivative(0.0), c.derivative(1.0)
    except (ZeroDivisionError, OverflowError) as exc:
        raise InvalidCost(f"defender {j}: c' is not finite on [0, 1]") from exc
    if abs(slope0) > COST_TOL:
        raise InvalidCost(f"defender {j}: c'(0) = {slope0!r}, cost slope at zero must be 0")
    if not math.isfinite(slope1):
        raise InvalidCost(f"defender {j}: c'(1) must be finite")
    if slope1 < dj:
        raise InvalidCost(f"defender {j}: c'(1) = {slope1!r} < d = {dj!r}; c'(1) must be at least d so investments stay in [0, 1]")
    if abs(c.value(0.0)) > COST_TOL:
        raise InvalidCost(f"defender {j}: c(0) must be 0")


@dataclass(frozen=True)
class CanonicalGame:
    """A game relabelled so that ``b`` increases with the defender label.

    ``to_original[c]`` is the original label of canonical defender ``c``;
    index 0 maps the attacker to itself.
    """

    inner: GameInstance
    to_original: tuple[int, ...]

    @cached_property
    def to_canonical(self) -> tuple[int, ...]:
        inv = [0] * len(self.to_original)
        for c, o in enumerate(self.to_original):
            inv[o] = c
        return tuple(inv)

    @property
    def n(self) -> int:
        return self.inner.n

    def original(self, c: int) -> int:
        return self.to_original[c]

    def original_path(self, path: Iterable[int]) -> Path:
        return tuple(self.to_original[v] for v in path)

    def is_identity(self) -> bool:
        return all(c == o for c, o in enumerate(self.to_original))


def canonicalize(game: GameInstance) -> CanonicalGame:
    order = sorted(range(1, game.n + 1), key=game.bval)
    to_original = (ATTACKER, *order)
    mapping = {o: c for c, o in enumerate(to_original) if c}
    return CanonicalGame(game.relabeled(mapping), to_original)


@dataclass(frozen=True)
class PureEquilibrium:
    """Every attack goes to the top-valued defender, who alone invests."""

    target: int
    path: Path
    x_target: float
    attacker_utility: float
    n: int

    kind = "pure"

    @property
    def utility(self) -> float:
        return self.attacker_utility

    @property
    def support(self) -> tuple[int, ...]:
        return (self.target,)

    @property
    def attacker(self) -> list[tuple[Path, float]]:
        return [(self.path, 1.0)]

    @property
    def defense(self) -> dict[int, float]:
        x = {j: 0.0 for j in range(1, self.n + 1)}
        x[self.target] = self.x_target
        return x


def check_pure_ne(cg: CanonicalGame) -> PureEquilibrium | None:
    """Pure equilibrium of a canonical game, or ``None`` when there is none.

    The top defender ``n`` absorbs every attack iff the attacker's payoff from
    hitting ``n`` beats every defender she can reach while avoiding ``n``.
    """
    game = cg.inner
    n = game.n
    x_top = game.cost(n).inverse_derivative(game.dval(n))
    utility = game.bval(n) * (1.0 - x_top)
    around = reachable(game.graph, ATTACKER, blocked={n}) - {ATTACKER}
    if any(utility < game.bval(j) for j in around):
        return None
    path = bfs_path(game.graph, ATTACKER, n)
    return PureEquilibrium(n, path, x_top, utility, n)
