"""Exception hierarchy shared by every patronet module."""

from __future__ import annotations


class PatronetError(Exception):
    """Base class for all data and validation errors raised by patronet."""


class DuplicateActor(PatronetError):
    pass


class UnknownActor(PatronetError, KeyError):
    def __str__(self) -> str:  # KeyError would repr() the message
        return str(self.args[0]) if self.args else "unknown actor"


class SelfLoop(PatronetError):
    pass


class SealedNetwork(PatronetError):
    pass


class InvariantViolation(PatronetError):
    pass


class InvalidWeight(PatronetError, ValueError):
    pass


class ParseError(PatronetError):
    """Malformed input text. ``line`` is 1-based and counts every physical line."""

    def __init__(self, line: int | None, reason: str):
        self.line = line
        self.reason = reason
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{reason}")


class NonSquare(ParseError):
    pass


class BadCell(ParseError):
    def __init__(self, line: int, row: str, col: str, token: str):
        self.row = row
        self.col = col
        self.token = token
        super().__init__(line, f"bad cell [{row}, {col}]: {token!r}")


class NonzeroDiagonal(ParseError):
    def __init__(self, line: int, actor: str, token: str):
        self.row = self.col = actor
        self.token = token
        super().__init__(line, f"nonzero diagonal cell [{actor}, {actor}]: {token!r}")


class MissingCoordinates(PatronetError):
    pass


class EmptyTable(PatronetError):
    pass


class EmptyGraph(PatronetError):
    pass


class UncoveredNode(PatronetError):
    pass


class Disconnected(PatronetError):
    pass


class DisconnectedInput(Disconnected):
    pass


class SameActor(PatronetError):
    pass


class InvalidParams(PatronetError, ValueError):
    pass
