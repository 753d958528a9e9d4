"""Exception hierarchy shared by the solver, the oracle and the CLI."""

from __future__ import annotations


class GameError(Exception):
    """Base class for every error raised by netgame."""


# -- instance validation -----------------------------------------------------

class ValidationError(GameError):
    pass


class DisconnectedGraph(ValidationError):
    pass


class DuplicateValuation(ValidationError):
    pass


class InvalidCost(ValidationError):
    pass


class NonPositiveParameter(ValidationError):
    pass


class ParseError(GameError):
    pass


# -- graph operations --------------------------------------------------------

class GraphError(GameError):
    pass


class NodeAbsent(GraphError):
    pass


class CannotRemoveAttacker(GraphError):
    pass


class NoSuchPath(GraphError):
    pass


# -- numerical pipeline ------------------------------------------------------

class NumericalError(GameError):
    """Upstream inconsistency detected inside the constructive solver."""


class NotProper(NumericalError):
    pass


class DomainError(NumericalError):
    pass


class NoMixedSupport(NumericalError):
    pass


class BracketFailure(NumericalError):
    pass


class NormalizationFailure(NumericalError):
    pass


class StructuralMismatch(GameError):
    """An equilibrium does not fit the game it is checked against."""


class InvalidFlag(GameError):
    pass
