"""Exception hierarchy.

Domain errors (a violated mathematical hypothesis, an unsupported field, an
exhausted search budget) are kept apart from input errors so the CLI can map
them onto distinct exit codes.
"""


class EvoError(Exception):
    """Base class for all library errors."""


class DomainError(EvoError):
    """The input is well formed but outside the supported mathematics."""


class InputError(EvoError, ValueError):
    """Malformed text, file or argument."""


class ParseError(InputError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column})" if column is not None else ")")
        super().__init__(message + where)


class FieldMismatch(EvoError, TypeError):
    pass


class HypothesisViolation(DomainError):
    """The standing hypothesis dim(A^2) = 1 does not hold."""

    hypothesis = "dim(A²) = 1"


class RankZero(HypothesisViolation):
    pass


class RankTooLarge(HypothesisViolation):
    pass


class UnsupportedField(DomainError):
    pass


class BudgetExceeded(DomainError):
    pass


class PreconditionError(EvoError, ValueError):
    pass


class WitnessUnavailable(DomainError):
    """An object exists by the classification but no exact witness over Q was built.

    Distinct from "does not exist": callers treat it as a positive decision
    without a certificate.
    """
