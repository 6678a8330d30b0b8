"""Exception hierarchy shared by every layer of the package."""

from __future__ import annotations


class DiagramError(Exception):
    """Base class for every error raised by preab."""


# linear algebra
class NoSolution(DiagramError):
    pass


class ShapeMismatch(DiagramError):
    pass


# backend construction
class DimensionMismatch(DiagramError):
    pass


class SubspaceViolation(DiagramError):
    pass


class NotInvertible(DiagramError):
    def __init__(self, reason: str, message: str = ""):
        self.reason = reason
        super().__init__(message or f"not invertible ({reason})")


# universal properties
class NotCommuting(DiagramError):
    pass


class NotAnnihilated(DiagramError):
    pass


class NoFactorization(DiagramError):
    pass


class NotUniversal(DiagramError):
    pass


class NotAKernel(DiagramError):
    pass


# constructions
class PreconditionFailed(DiagramError):
    pass


class MediationFailed(DiagramError):
    pass


class NotPullback(DiagramError):
    pass


class NotExact(DiagramError):
    pass


class HypothesisFailed(DiagramError):
    def __init__(self, hypothesis: str):
        self.hypothesis = hypothesis
        super().__init__(f"hypothesis failed: {hypothesis}")


class AssumptionsAFailed(DiagramError):
    pass


class FactorizationFailed(DiagramError):
    pass


class EtaNotInvertible(DiagramError):
    pass


class ChaseFailed(DiagramError):
    pass


# text format
class SourceError(DiagramError):
    """An error tied to a position in a ``.pad`` source."""

    def __init__(self, message: str, line: int = 0, column: int = 0, kind: str = ""):
        self.message = message
        self.line = line
        self.column = column
        self.kind = kind
        where = f"{line}:{column}: " if line else ""
        tag = f"[{kind}] " if kind else ""
        super().__init__(f"{where}{tag}{message}")


class ParseError(SourceError):
    pass


class ElabError(SourceError):
    pass
