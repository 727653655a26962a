"""Exception hierarchy.

Every error raised by the library derives from FlagforgeError, which the
CLI maps to exit code 1 (domain error).
"""

from __future__ import annotations


class FlagforgeError(Exception):
    """Base class for domain errors."""


class FieldError(FlagforgeError):
    pass


class ShapeMismatch(FlagforgeError):
    pass


class ParseError(FlagforgeError):
    """Malformed input; carries a location when one is known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None,
                 field: str | None = None):
        self.line = line
        self.column = column
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}" + (f", column {column}" if column is not None else ""))
        if field is not None:
            where.append(f"field {field!r}")
        super().__init__(f"{message} ({'; '.join(where)})" if where else message)


class ValidationError(FlagforgeError):
    """An input object violates a named invariant."""

    def __init__(self, invariant: str, detail: str = ""):
        self.invariant = invariant
        super().__init__(f"{invariant}: {detail}" if detail else invariant)


class HomogeneityViolation(FlagforgeError):
    pass


class NonHomogeneous(FlagforgeError):
    pass


class RingShapeMismatch(FlagforgeError):
    pass


class NotAChainMap(FlagforgeError):
    pass


class FlagViolation(FlagforgeError):
    pass


class AnchorNotAComplex(FlagforgeError):
    pass


class ParityMissing(FlagforgeError):
    pass


class FactorizationError(FlagforgeError):
    pass


class SquareNonzero(FlagforgeError):
    pass


class InvariantViolation(FlagforgeError):
    pass


class HomotopyInvalid(FlagforgeError):
    pass


class BudgetExceeded(FlagforgeError):
    pass


class NotArtinian(FlagforgeError):
    pass


class NoWitnessDegree(FlagforgeError):
    pass


class SupportUnbounded(FlagforgeError):
    pass


class NotMinimal(FlagforgeError):
    pass
