class DomainError(ValueError):
    """Raised when an input lies outside the domain of an operation."""


class PreconditionError(DomainError):
    """Raised when a theorem's hypothesis is not met by the supplied state."""
