"""Constructive equilibrium solver.

Pipeline: canonical relabelling, pure-equilibrium test, linker removal,
scan for the lowest attacked defender, attacker-utility root, first-order
strategies on the attack tree, and expansion of tree edges back into paths
of the original network.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

from .errors import (
    BracketFailure,
    DomainError,
    NoMixedSupport,
    NormalizationFailure,
    NotProper,
)
from .graph import (
    ATTACKER,
    Graph,
    Path,
    ReductionTrace,
    connecting_path,
    contract_in_place,
    properize,
    reduce_by_node,
)
from .model import (
    CanonicalGame,
    GameInstance,
    PureEquilibrium,
    canonicalize,
    check_pure_ne,
    validate,
)

SUM_TOL = 1e-9
ROOT_TOL = 1e-12
BRACKET_EPS = 1e-12
BOUND_SLACK = 1e-12


@dataclass(frozen=True)
class AttackTree:
    """Equilibrium attack tree: each supported defender points to its predecessor.

    ``floor`` is the largest valuation among surviving (proper-graph)
    defenders outside the support, 0.0 when the support starts at the bottom.
    """

    support: tuple[int, ...]
    parent: Mapping[int, int]
    floor: float = 0.0
    root: int = ATTACKER

    @property
    def kstar(self) -> int:
        return self.support[0]

    @property
    def direct(self) -> tuple[int, ...]:
        return tuple(j for j in self.support if self.parent[j] == ATTACKER)

    def path_to(self, j: int) -> Path:
        out = [j]
        while out[-1] != ATTACKER:
            out.append(self.parent[out[-1]])
        return tuple(reversed(out))

    def edges(self) -> list[tuple[int, int]]:
        return [(self.parent[j], j) for j in self.support]


@dataclass(frozen=True)
class TreeEquilibrium:
    U: float
    x: Mapping[int, float]
    q: Mapping[int, float]
    kstar: int


@dataclass(frozen=True)
class MixedEquilibrium:
    attacker: list[tuple[Path, float]]
    defense: Mapping[int, float]
    utility: float
    support: tuple[int, ...]
    tree: AttackTree | None = None

    kind = "mixed"


@dataclass(frozen=True)
class Solution:
    """Everything the pipeline computed, for diagnostics and tests."""

    game: GameInstance
    canonical: CanonicalGame
    equilibrium: PureEquilibrium | MixedEquilibrium
    proper_graph: Graph | None = None
    trace: ReductionTrace | None = None
    tree: AttackTree | None = None
    tree_eq: TreeEquilibrium | None = None
    method: str = field(default="")


# -- attack tree -------------------------------------------------------------

def _attach(adj: Mapping[int, set[int]], support: tuple[int, ...], b: Mapping[int, float]) -> dict[int, int]:
    parent = {}
    for j in support:
        nb = adj[j]
        if ATTACKER in nb:
            parent[j] = ATTACKER
            continue
        if not nb:
            raise NotProper(f"defender {j} is isolated after reduction")
        i = min(nb, key=b.__getitem__)
        if b[i] >= b[j]:
            raise NotProper(f"defender {j} has neither an edge to 0 nor a lower-valued neighbour")
        parent[j] = i
    return parent


def _floor(g: Graph, support: tuple[int, ...], b: Mapping[int, float]) -> float:
    below = [b[v] for v in g.defenders if v not in set(support)]
    return max(below, default=0.0)


def build_attack_tree(proper_g: Graph, d_set, b: Mapping[int, float]) -> AttackTree:
    """Reduce the proper graph to ``d_set`` and hang each node off its best predecessor."""
    support = tuple(sorted(d_set, key=b.__getitem__))
    adj = proper_g.adjacency()
    for m in proper_g.defenders:
        if m not in d_set:
            contract_in_place(adj, m)
    return AttackTree(support, _attach(adj, support, b), _floor(proper_g, support, b))


# -- first-order conditions --------------------------------------------------

def attack_masses(cg: CanonicalGame, tree: AttackTree, U: float) -> dict[int, float]:
    """Attack probability each supported defender needs to justify its investment at ``U``."""
    if not U > 0:
        raise DomainError(f"attacker utility must be positive, got {U!r}")
    game = cg.inner
    q = {}
    for j in tree.support:
        bj, dj, c = game.bval(j), game.dval(j), game.cost(j)
        k = tree.parent[j]
        if k == ATTACKER:
            if U > bj:
                raise DomainError(f"U = {U!r} exceeds b_{j} = {bj!r} for a directly attacked node")
            q[j] = c.derivative(1.0 - U / bj) / dj
        else:
            bk = game.bval(k)
            q[j] = bk * c.derivative(1.0 - bk / bj) / (U * dj)
    return q


def eval_F(cg: CanonicalGame, tree: AttackTree, U: float) -> float:
    """Total attack mass implied by the first-order conditions; equals 1 at equilibrium."""
    return math.fsum(attack_masses(cg, tree, U).values())


def find_kstar(cg: CanonicalGame, proper_g: Graph, scan_all: bool = False) -> tuple[int, AttackTree]:
    """Lowest supported defender of a proper graph and its attack tree.

    Scans candidates bottom-up, reducing the proper graph one defender at a
    time.  With ``scan_all`` every candidate is tested and exactly one must
    pass.
    """
    b = cg.inner.valuation
    survivors = sorted(proper_g.defenders, key=b.__getitem__)
    adj = proper_g.adjacency()
    hits: list[tuple[int, AttackTree]] = []
    prev = None
    for idx, k in enumerate(survivors):
        if prev is not None:
            contract_in_place(adj, prev)
        support = tuple(survivors[idx:])
        floor = b[prev] if prev is not None else 0.0
        tree = AttackTree(support, _attach(adj, support, b), floor)
        ok = eval_F(cg, tree, b[k]) <= 1.0
        if ok and prev is not None:
            ok = eval_F(cg, tree, floor) > 1.0
        if ok:
            hits.append((k, tree))
            if not scan_all:
                break
        prev = k
    if not hits:
        raise NoMixedSupport("no candidate support satisfies the bracketing condition")
    if scan_all and len(hits) != 1:
        raise NoMixedSupport(f"expected exactly one support, found {[k for k, _ in hits]}")
    return hits[0]


# -- attacker utility --------------------------------------------------------

def _quadratic_utility(cg: CanonicalGame, tree: AttackTree) -> float:
    # F(U) = 1 multiplied through by U gives A U^2 - B U - C = 0
    game = cg.inner
    A = B = C = 0.0
    for j in tree.support:
        bj, dj, g = game.bval(j), game.dval(j), game.cost(j).gamma
        k = tree.parent[j]
        if k == ATTACKER:
            A += g / (bj * dj)
            B += g / dj
        else:
            bk = game.bval(k)
            C += bk * g * (1.0 - bk / bj) / dj
    B -= 1.0
    disc = math.sqrt(B * B + 4.0 * A * C)
    if B >= 0:
        return (B + disc) / (2.0 * A)
    return 2.0 * C / (disc - B)


def bisect_decreasing(f, lo: float, hi: float, tol: float = ROOT_TOL, max_iter: int = 200) -> float:
    """Root of a decreasing ``f`` with ``f(lo) >= 0 >= f(hi)``."""
    flo, fhi = f(lo), f(hi)
    if flo < 0 or fhi > 0:
        raise BracketFailure(f"root not bracketed: f({lo!r})={flo!r}, f({hi!r})={fhi!r}")
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0:
            return mid
        if fm > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def solve_attacker_utility(
    cg: CanonicalGame, tree: AttackTree, kstar: int | None = None, method: str = "auto"
) -> float:
    """Solve ``F(U) = 1`` on the bracket ``(floor, b_kstar]``.

    ``method`` is ``"closed_form"`` (quadratic costs only), ``"bisection"``
    or ``"auto"``.
    """
    kstar = tree.kstar if kstar is None else kstar
    top = cg.inner.bval(kstar)
    if method == "auto":
        method = "closed_form" if all(cg.inner.cost(j).is_quadratic for j in tree.support) else "bisection"
    if method == "closed_form":
        U = _quadratic_utility(cg, tree)
    elif method == "bisection":
        lo = max(tree.floor, BRACKET_EPS * cg.inner.bval(cg.n))
        U = bisect_decreasing(lambda u: eval_F(cg, tree, u) - 1.0, lo, top)
    else:
        raise ValueError(f"unknown method {method!r}")
    slack = BOUND_SLACK * top
    if not (tree.floor < U <= top + slack):
        raise BracketFailure(f"U* = {U!r} outside ({tree.floor!r}, {top!r}]")
    return min(U, top)


def compute_tree_strategies(cg: CanonicalGame, tree: AttackTree, U: float) -> TreeEquilibrium:
    game = cg.inner
    x = {}
    for j in tree.support:
        k = tree.parent[j]
        ref = U if k == ATTACKER else game.bval(k)
        x[j] = 1.0 - ref / game.bval(j)
    q = attack_masses(cg, tree, U)
    total = math.fsum(q.values())
    if abs(total - 1.0) > SUM_TOL:
        raise NormalizationFailure(f"attack probabilities sum to {total!r}")
    return TreeEquilibrium(U, x, q, tree.kstar)


# -- reconstruction ----------------------------------------------------------

def expand_tree_paths(g: Graph, tree: AttackTree) -> dict[int, Path]:
    """Replace every tree edge by a path of ``g`` through unsupported nodes only.

    Segments on one root-to-leaf path that would reuse an interior node are
    re-routed around the nodes already used.
    """
    d_set = set(tree.support)
    full: dict[int, Path] = {ATTACKER: (ATTACKER,)}

    def expand(j: int) -> Path:
        if j in full:
            return full[j]
        k = tree.parent[j]
        head = expand(k)
        seg = connecting_path(g, d_set, k, j)
        used = set(head)
        if used & set(seg[1:]):
            seg = connecting_path(g, d_set, k, j, avoid=used - {k})
        full[j] = head + seg[1:]
        return full[j]

    return {j: expand(j) for j in tree.support}


def reconstruct_equilibrium(
    cg: CanonicalGame, original_g: Graph, tree: AttackTree, te: TreeEquilibrium
) -> MixedEquilibrium:
    """Mixed equilibrium of the original game, in original labels."""
    paths = expand_tree_paths(original_g, tree)
    orig = cg.original
    attacker = [(cg.original_path(paths[j]), te.q[j]) for j in tree.support]
    defense = {orig(c): 0.0 for c in range(1, cg.n + 1)}
    for j in tree.support:
        defense[orig(j)] = te.x[j]
    otree = AttackTree(
        tuple(orig(j) for j in tree.support),
        {orig(j): orig(k) for j, k in tree.parent.items()},
        tree.floor,
    )
    return MixedEquilibrium(attacker, defense, te.U, otree.support, otree)


def _original_pure(cg: CanonicalGame, pe: PureEquilibrium) -> PureEquilibrium:
    return PureEquilibrium(cg.original(pe.target), cg.original_path(pe.path), pe.x_target, pe.attacker_utility, pe.n)


# -- pipeline ----------------------------------------------------------------

def solve_detailed(game: GameInstance, method: str = "auto", scan_all: bool = False) -> Solution:
    validate(game)
    cg = canonicalize(game)
    pure = check_pure_ne(cg)
    if pure is not None:
        return Solution(game, cg, _original_pure(cg, pure), method="pure")
    g = cg.inner.graph
    proper_g, trace = properize(g, cg.inner.valuation)
    _, tree = find_kstar(cg, proper_g, scan_all=scan_all)
    U = solve_attacker_utility(cg, tree, method=method)
    te = compute_tree_strategies(cg, tree, U)
    eq = reconstruct_equilibrium(cg, g, tree, te)
    return Solution(game, cg, eq, proper_g, trace, tree, te, method)


def solve(game: GameInstance, method: str = "auto") -> PureEquilibrium | MixedEquilibrium:
    """A Nash equilibrium of ``game``, labelled like ``game``."""
    return solve_detailed(game, method=method).equilibrium


def reduce_game(game: GameInstance, m: int) -> tuple[GameInstance, dict[int, int]]:
    """The game with defender ``m`` removed and its neighbours joined.

    Defenders above ``m`` shift down by one; the returned map sends old
    labels to new ones.
    """
    g = reduce_by_node(game.graph, m)
    relabel = {j: (j if j < m else j - 1) for j in range(game.n + 1) if j != m}
    keep = [j for j in range(1, game.n + 1) if j != m]
    reduced = GameInstance(
        game.n - 1,
        frozenset((relabel[u], relabel[v]) for u, v in g.edges()),
        tuple(game.bval(j) for j in keep),
        tuple(game.dval(j) for j in keep),
        tuple(game.cost(j) for j in keep),
    )
    return reduced, relabel
