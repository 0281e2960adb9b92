"""Exception taxonomy shared by every rootgrade module.

Each exception carries enough context in its message to diagnose a failure
without a debugger; none of them wrap another exception silently.
"""
from __future__ import annotations

__all__ = [
    "RootgradeError",
    "UnsupportedOrder",
    "DivisionByZero",
    "OrderMismatch",
    "DomainMismatch",
    "NotSquare",
    "NonCommuting",
    "AmbientMismatch",
    "DimMismatch",
    "NotLie",
    "NotJordanDegree3",
    "NotAGrading",
    "FieldLacksCubeRoot",
    "WeightMismatch",
    "DegenerateNeutralForm",
    "NotARootSystem",
    "NoCompletion",
    "SweepExhausted",
    "NoProgress",
    "NotClosed",
    "BookkeepingMismatch",
    "RankTooSmall",
    "UnknownEntry",
    "IoError",
    "ParseError",
    "SchemaVersionMismatch",
]


class RootgradeError(Exception):
    """Base class for all rootgrade-specific failures."""


class UnsupportedOrder(RootgradeError):
    """A cyclotomic order outside the supported whitelist was requested."""


class DivisionByZero(RootgradeError):
    """Division by the zero scalar."""


class OrderMismatch(RootgradeError):
    """Two scalars from cyclotomic fields of different orders were combined."""


class DomainMismatch(RootgradeError):
    """An element was used with a group it does not belong to."""


class NotSquare(RootgradeError):
    """A square matrix was required."""


class NonCommuting(RootgradeError):
    """Simultaneous eigenspaces were requested for non-commuting operators."""


class AmbientMismatch(RootgradeError):
    """Subspaces of different ambient dimensions were combined."""


class DimMismatch(RootgradeError):
    """Vector or matrix dimensions are inconsistent with the algebra."""


class NotLie(RootgradeError):
    """Structure constants fail antisymmetry or the Jacobi identity."""


class NotJordanDegree3(RootgradeError):
    """A commutative algebra lacks the degree-3 trace identities expected of it."""


class NotAGrading(RootgradeError):
    """A degree assignment is not respected by the product."""


class FieldLacksCubeRoot(RootgradeError):
    """A construction needs a primitive cube root of unity the field lacks."""


class WeightMismatch(RootgradeError):
    """Weight-space bookkeeping does not add up to the whole algebra."""


class DegenerateNeutralForm(RootgradeError):
    """The trace form restricted to the neutral component is degenerate."""


class NotARootSystem(RootgradeError):
    """A weight set fails the axioms or matches no catalogued type."""


class NoCompletion(RootgradeError):
    """A candidate nilpotent element extends to no sl2 triple."""


class SweepExhausted(RootgradeError):
    """An eigenvalue sweep ended before exhausting an operator's spectrum."""


class NoProgress(RootgradeError):
    """A torus-enlargement pass found nothing to adjoin."""


class NotClosed(RootgradeError):
    """A claimed subalgebra is not closed under the bracket."""


class BookkeepingMismatch(RootgradeError):
    """Two independently computed dimension counts disagree."""


class RankTooSmall(RootgradeError):
    """An operation requires a higher-rank root system than was supplied."""


class UnknownEntry(RootgradeError):
    """A catalog name that the registry does not contain."""


class IoError(RootgradeError):
    """A file could not be read or written."""


class ParseError(RootgradeError):
    """Malformed JSON or a malformed scalar/degree literal."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class SchemaVersionMismatch(RootgradeError):
    """A file declares a schema this version of the package does not speak."""
