"""Exception types raised by chromakit."""


class ChromaError(Exception):
    """Base class for library errors."""


class OrderCapError(ChromaError, ValueError):
    """Requested table order exceeds the configured cap."""


class NumericOverflowError(ChromaError, OverflowError):
    """A recurrence produced a non-finite value."""

    def __init__(self, message, order=None, index=None):
        super().__init__(message)
        self.order = order
        self.index = index


class DomainError(ChromaError, ValueError):
    """Argument outside the region where a method is valid."""


class NotWeaklyBoundedError(ChromaError, ValueError):
    """Operation needs p < 1 but the family has p >= 1."""


class ConsistencyError(ChromaError, ArithmeticError):
    """Internal identity violated beyond roundoff."""


class JetKindError(ChromaError, TypeError):
    """Jet of the wrong kind passed to a basis change."""


class WindowError(ChromaError, ValueError):
    """Not enough samples around the requested center."""
