"""Exception types shared across the package."""


class BoxBallError(Exception):
    """Base class for all package errors."""


class ParseError(BoxBallError, ValueError):
    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class DomainError(BoxBallError, ValueError):
    """An argument lies outside the domain of an operation."""


class PreconditionError(BoxBallError, ValueError):
    """An operation was called on an input violating its precondition."""


class RegimeError(BoxBallError, ValueError):
    """Parameters do not belong to the regime a reference law describes."""


class BudgetExceededError(BoxBallError, RuntimeError):
    """Stabilization did not finish within the sweep budget."""


class InvariantViolation(BoxBallError, AssertionError):
    """Two constructions that must agree did not. Always an implementation bug."""
