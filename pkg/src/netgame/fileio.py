"""JSON game and equilibrium documents, and DOT export of attack trees.

Game document::

    {"n": 4, "edges": [[0, 2], [1, 2]], "b": [...], "d": [...], "cost": {"gamma": 1.0}}

``cost`` may be omitted (gamma = 1), a number, a list of n numbers, or an
object with a ``gamma`` key holding either.  Floats are written with
``repr``, which round-trips doubles exactly.
"""

from __future__ import annotations

import json
import math
from pathlib import Path as FsPath
from typing import Any

from .engine import AttackTree, MixedEquilibrium
from .errors import ParseError, ValidationError
from .model import GameInstance, PureEquilibrium, validate


def _decode(text: str, name: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{name}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def _load(path) -> tuple[str, Any]:
    name = str(path)
    try:
        text = FsPath(path).read_text()
    except OSError as exc:
        raise ParseError(f"{name}: cannot read file ({exc.strerror})") from exc
    return name, _decode(text, name)


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"{where}: expected a number, got {value!r}")
    return float(value)


def _number_list(value, where: str, length: int) -> list[float]:
    if not isinstance(value, list):
        raise ParseError(f"{where}: expected a list of numbers")
    if len(value) != length:
        raise ParseError(f"{where}: length {len(value)} does not match n={length}")
    return [_number(v, f"{where}[{i}]") for i, v in enumerate(value)]


def game_from_dict(doc: Any, name: str = "<document>") -> GameInstance:
    if not isinstance(doc, dict):
        raise ParseError(f"{name}: top level must be an object")
    for key in ("n", "edges", "b", "d"):
        if key not in doc:
            raise ParseError(f"{name}: missing field '{key}'")
    n = doc["n"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ParseError(f"{name}: field 'n' must be a positive integer, got {n!r}")
    edges = doc["edges"]
    if not isinstance(edges, list):
        raise ParseError(f"{name}: field 'edges' must be a list of pairs")
    pairs = []
    for i, e in enumerate(edges):
        if not (isinstance(e, list) and len(e) == 2 and all(isinstance(v, int) and not isinstance(v, bool) for v in e)):
            raise ParseError(f"{name}: edges[{i}] must be a pair of integers, got {e!r}")
        u, v = e
        if not (0 <= u <= n and 0 <= v <= n):
            raise ParseError(f"{name}: edges[{i}] = {e} has a label outside 0..{n}")
        if u == v:
            raise ParseError(f"{name}: edges[{i}] = {e} is a self-loop")
        pairs.append((u, v))
    b = _number_list(doc["b"], f"{name}: field 'b'", n)
    d = _number_list(doc["d"], f"{name}: field 'd'", n)

    cost = doc.get("cost", 1.0)
    if isinstance(cost, dict):
        if "gamma" not in cost:
            raise ParseError(f"{name}: field 'cost' must carry 'gamma'")
        cost = cost["gamma"]
    if isinstance(cost, list):
        gamma = _number_list(cost, f"{name}: field 'cost.gamma'", n)
    else:
        gamma = _number(cost, f"{name}: field 'cost.gamma'")

    game = GameInstance.create(pairs, b, d, gamma=gamma)
    try:
        return validate(game)
    except ValidationError as exc:
        raise type(exc)(f"{name}: {exc}") from exc


def parse_game(path) -> GameInstance:
    """Read and validate a game document."""
    name, doc = _load(path)
    return game_from_dict(doc, name)


def loads_game(text: str) -> GameInstance:
    return game_from_dict(_decode(text, "<document>"))


def game_to_dict(game: GameInstance) -> dict:
    gammas = [c.gamma for c in game.costs]
    if not all(c.is_quadratic for c in game.costs):
        raise ValueError("only quadratic costs can be serialised")
    return {
        "n": game.n,
        "edges": [list(e) for e in sorted(game.edges)],
        "b": list(game.b),
        "d": list(game.d),
        "cost": {"gamma": gammas[0] if len(set(gammas)) == 1 else gammas},
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


# -- equilibria --------------------------------------------------------------

def _parent_list(eq, n: int) -> list[int | None]:
    parent: list[int | None] = [None] * n
    if eq.kind == "pure":
        parent[eq.target - 1] = 0
    elif eq.tree is not None:
        for j, k in eq.tree.parent.items():
            parent[j - 1] = k
    return parent


def equilibrium_to_dict(eq, n: int) -> dict:
    return {
        "type": eq.kind,
        "utility": eq.utility,
        "support": list(eq.support),
        "defense": [eq.defense[j] for j in range(1, n + 1)],
        "attacker": [{"path": list(p), "prob": pr} for p, pr in eq.attacker],
        "tree": _parent_list(eq, n),
    }


def equilibrium_from_dict(doc: Any, name: str = "<document>"):
    if not isinstance(doc, dict):
        raise ParseError(f"{name}: top level must be an object")
    for key in ("type", "utility", "support", "defense", "attacker"):
        if key not in doc:
            raise ParseError(f"{name}: missing field '{key}'")
    kind = doc["type"]
    if kind not in ("pure", "mixed"):
        raise ParseError(f"{name}: field 'type' must be 'pure' or 'mixed', got {kind!r}")
    utility = _number(doc["utility"], f"{name}: field 'utility'")
    defense_list = doc["defense"]
    if not isinstance(defense_list, list):
        raise ParseError(f"{name}: field 'defense' must be a list")
    defense = {j + 1: _number(v, f"{name}: defense[{j}]") for j, v in enumerate(defense_list)}
    n = len(defense)
    support = doc["support"]
    if not (isinstance(support, list) and all(isinstance(v, int) for v in support)):
        raise ParseError(f"{name}: field 'support' must be a list of labels")
    attacker = []
    if not isinstance(doc["attacker"], list):
        raise ParseError(f"{name}: field 'attacker' must be a list")
    for i, entry in enumerate(doc["attacker"]):
        if not (isinstance(entry, dict) and "path" in entry and "prob" in entry):
            raise ParseError(f"{name}: attacker[{i}] needs 'path' and 'prob'")
        path = entry["path"]
        if not (isinstance(path, list) and path and all(isinstance(v, int) and not isinstance(v, bool) for v in path)):
            raise ParseError(f"{name}: attacker[{i}].path must be a non-empty list of labels")
        attacker.append((tuple(path), _number(entry["prob"], f"{name}: attacker[{i}].prob")))

    if kind == "pure":
        if len(attacker) != 1 or len(support) != 1:
            raise ParseError(f"{name}: a pure equilibrium has exactly one attack path")
        path = attacker[0][0]
        t = path[-1]
        if t not in defense:
            raise ParseError(f"{name}: target {t} outside the defense list")
        return PureEquilibrium(t, path, defense[t], utility, n)

    tree = None
    parents = doc.get("tree")
    if isinstance(parents, list):
        pmap = {j + 1: k for j, k in enumerate(parents) if k is not None}
        tree = AttackTree(tuple(support), pmap)
    return MixedEquilibrium(attacker, defense, utility, tuple(support), tree)


def parse_equilibrium(path):
    name, doc = _load(path)
    return equilibrium_from_dict(doc, name)


def loads_equilibrium(text: str):
    return equilibrium_from_dict(_decode(text, "<document>"))


# -- DOT ---------------------------------------------------------------------

def _fmt(v: float) -> str:
    return repr(v) if not math.isfinite(v) else f"{v:.12g}"


def tree_to_dot(eq, game: GameInstance) -> str:
    """Attack tree as a DOT digraph, edges pointing from parent to child."""
    if eq.kind == "pure":
        edges = [(0, eq.target)]
    else:
        edges = [(eq.tree.parent[j], j) for j in eq.tree.support]
    lines = ["digraph attack_tree {", '  0 [label="0 (attacker)"];']
    for _, j in edges:
        lines.append(f'  {j} [label="{j} (b={_fmt(game.bval(j))})"];')
    for k, j in edges:
        lines.append(f"  {k} -> {j};")
    lines.append("}")
    return "\n".join(lines) + "\n"
