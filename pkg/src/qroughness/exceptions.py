"""Exception types raised across the package."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class TruncationError(ValueError):
    """A Fock-basis truncation drops more probability than allowed."""

    def __init__(self, message, suggested_dim=None):
        super().__init__(message)
        self.suggested_dim = suggested_dim


class GridTooSmallError(ValueError):
    """A phase-space field has not decayed at the edge of its grid."""


class ConsistencyError(ArithmeticError):
    """An internal numerical cross-check failed."""


class UnsupportedStateError(ValueError):
    """The state has structure an operation does not handle."""
