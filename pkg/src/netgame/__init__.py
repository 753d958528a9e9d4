"""Exact Nash equilibria of attacker-versus-defenders games on networks."""

from .engine import (
    AttackTree,
    MixedEquilibrium,
    TreeEquilibrium,
    solve,
    solve_detailed,
)
from .model import CostFunction, GameInstance, PureEquilibrium, canonicalize, check_pure_ne, validate
from .verify import best_attack_path, simulate_payoffs, verify_equilibrium

__all__ = [
    "AttackTree",
    "CostFunction",
    "GameInstance",
    "MixedEquilibrium",
    "PureEquilibrium",
    "TreeEquilibrium",
    "best_attack_path",
    "canonicalize",
    "check_pure_ne",
    "simulate_payoffs",
    "solve",
    "solve_detailed",
    "validate",
    "verify_equilibrium",
]
