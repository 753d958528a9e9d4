"""Command line front end: ``netgame solve | verify | gen``.

Exit codes: 0 success, 2 parse or validation failure, 3 invalid cost
violated, 4 verification failure, 5 internal numerical error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .engine import solve
from .errors import GameError, GraphError, InvalidCost, NumericalError, ParseError, StructuralMismatch, ValidationError, InvalidFlag
from .fileio import dumps, equilibrium_to_dict, game_to_dict, parse_equilibrium, parse_game, tree_to_dot
from .generate import generate_game
from .verify import verify_equilibrium

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_COST = 3
EXIT_VERIFY = 4
EXIT_NUMERIC = 5


def _fail(code: int, msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return code


def _load_game(path: str) -> int | object:
    try:
        return parse_game(path)
    except InvalidCost as exc:
        return _fail(EXIT_COST, str(exc))
    except (ParseError, ValidationError) as exc:
        return _fail(EXIT_PARSE, str(exc))


def cmd_solve(args: argparse.Namespace) -> int:
    game = _load_game(args.game)
    if isinstance(game, int):
        return game
    try:
        eq = solve(game)
    except (NumericalError, GraphError) as exc:
        return _fail(EXIT_NUMERIC, f"{type(exc).__name__}: {exc}")

    text = dumps(equilibrium_to_dict(eq, game.n))
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    if args.dot:
        Path(args.dot).write_text(tree_to_dot(eq, game))

    if args.verify:
        report = verify_equilibrium(game, eq, args.tolerance)
        if not report.is_epsilon_ne:
            for line in report.lines():
                print(line, file=sys.stderr)
            return _fail(EXIT_VERIFY, "solution failed verification")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    game = _load_game(args.game)
    if isinstance(game, int):
        return game
    try:
        eq = parse_equilibrium(args.equilibrium)
        report = verify_equilibrium(game, eq, args.tolerance)
    except (ParseError, StructuralMismatch) as exc:
        return _fail(EXIT_PARSE, str(exc))
    for line in report.lines():
        print(line)
    return EXIT_OK if report.is_epsilon_ne else EXIT_VERIFY


def cmd_gen(args: argparse.Namespace) -> int:
    try:
        game = generate_game(args.nodes, args.edge_prob, args.seed, sort_b=not args.no_sort_b)
    except InvalidFlag as exc:
        return _fail(EXIT_PARSE, str(exc))
    sys.stdout.write(dumps(game_to_dict(game)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="netgame", description="Nash equilibria of attack and defense games on networks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="compute an equilibrium of a game file")
    p.add_argument("game")
    p.add_argument("--tolerance", type=float, default=None, help="verification epsilon")
    p.add_argument("--verify", action="store_true", help="check the result with the independent oracle")
    p.add_argument("--dot", metavar="FILE", help="write the attack tree as a DOT digraph")
    p.add_argument("--output", metavar="FILE", help="write the equilibrium here instead of stdout")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check an equilibrium file against a game file")
    p.add_argument("game")
    p.add_argument("equilibrium")
    p.add_argument("--tolerance", type=float, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="print a random connected game")
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--edge-prob", type=float, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--no-sort-b", action="store_true", help="leave valuations in random label order")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except GameError as exc:
        return _fail(EXIT_NUMERIC, f"{type(exc).__name__}: {exc}")


if __name__ == "__main__":
    sys.exit(main())
