"""Exception hierarchy shared by the engines, the CLI and the HTTP API."""


class TwoWayError(Exception):
    """Base class for every error raised by twoway."""


class ParseError(TwoWayError):
    """Malformed channel/protocol text. `position` is a 0-based character offset."""

    def __init__(self, message: str, position: int = 0):
        super().__init__(f"{message} (at position {position})")
        self.message = message
        self.position = position


class DomainError(TwoWayError, ValueError):
    """Input is well-formed but outside the legal domain of an operation."""


class NotSymmetricError(DomainError):
    pass


class UncertaintyViolationError(DomainError):
    pass


class InvalidCovarianceMatrixError(DomainError):
    pass


class SingularSpectrumError(DomainError):
    """Some symplectic eigenvalue sits within eps_pure of 1/2."""


class NotGaussianFamilyError(DomainError):
    pass


class NotDVFamilyError(DomainError):
    pass


class UnsupportedChannelError(DomainError):
    pass


class DivergentAtZeroError(DomainError):
    pass


class DivergentMemberError(DomainError):
    pass


class OutOfRangeError(DomainError):
    pass


class IndexOutOfRangeError(DomainError):
    pass


class DimensionMismatchError(DomainError):
    pass


class DimensionTooLargeError(DomainError):
    pass


class NotCovariantError(DomainError):
    pass


class InvalidStateError(DomainError):
    pass


class InvalidChannelError(DomainError):
    pass


class VerificationError(TwoWayError):
    """A numerical harness detected a violated expectation."""
