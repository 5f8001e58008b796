from typing import Optional

from psys_oracle.span import SourceSpan


class PsysError(Exception):
    """Base exception class for psys-oracle errors."""

    pass


class InvalidSystemError(PsysError):
    """Raised when a P system description violates a structural rule."""

    def __init__(
        self,
        message: str,
        element: str = "",
        ordinal: Optional[int] = None,
        span: Optional[SourceSpan] = None,
    ):
        self.message = message
        self.element = element
        self.ordinal = ordinal
        self.span = span
        super().__init__(self.__str__())

    def with_span(self, span: Optional[SourceSpan]) -> "InvalidSystemError":
        self.span = span
        self.args = (self.__str__(),)
        return self

    def __str__(self) -> str:
        if self.span is not None:
            return f"{self.span}: {self.message}"
        return self.message


class UnknownSymbol(InvalidSystemError):
    """Raised when an object symbol is used but not declared in @objects."""

    pass


class UnknownLabel(InvalidSystemError):
    """Raised when a membrane label is used but not declared in @labels."""

    pass


class DuplicateLabel(InvalidSystemError):
    """Raised when two membranes (or two @labels entries) share a label."""

    pass


class DuplicateSymbol(InvalidSystemError):
    """Raised when an object symbol is declared twice."""

    pass


class UnplacedLabel(InvalidSystemError):
    """Raised when a declared label is not assigned to any membrane."""

    pass


class NotShallow(InvalidSystemError):
    """Raised when a membrane is nested below an inner membrane."""

    pass


class BadBound(InvalidSystemError):
    """Raised when the step bound T is not a positive integer."""

    pass


class InvalidRuleTarget(InvalidSystemError):
    """Raised when a send-in or division rule targets the skin membrane."""

    pass


class PsysSyntaxError(PsysError):
    """Raised when .psys text does not follow the grammar."""

    def __init__(self, span: SourceSpan, expected: str):
        self.span = span
        self.expected = expected
        super().__init__(f"{span}: expected {expected}")


class NegativeMultiplicity(PsysSyntaxError):
    """Raised when a multiset literal carries a negative multiplicity."""

    pass


class NegativeCount(PsysError):
    """Raised when multiset arithmetic would leave a negative count."""

    pass


class RejectedBranch(PsysError):
    """Raised to abandon a nondeterministic branch that cannot be a real computation."""

    pass


class ReplayError(PsysError):
    """Raised when a witness cannot drive a replay."""

    pass


class ReplayExhausted(ReplayError):
    """Raised when a replay asks for more choices than the witness holds."""

    pass


class ReplayOutOfRange(ReplayError):
    """Raised when a recorded value lies outside the requested choice bounds."""

    pass


class ReplayMismatch(ReplayError):
    """Raised when a recorded choice was made at a different choice point."""

    pass


class BudgetExceeded(PsysError):
    """Raised when a search exhausts its node budget before finishing."""

    pass


class InvalidInputError(PsysError):
    """Raised when invalid input is provided."""

    pass


class ConfigurationError(PsysError):
    """Raised when there's a configuration problem."""

    pass
