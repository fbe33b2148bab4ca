"""Entanglement measures and monogamy bounds for multiqubit W-class states."""
from .errors import DomainError, PreconditionError

__all__ = ["DomainError", "PreconditionError"]
__version__ = "0.1.0"
