"""Exception types raised across the package."""


class QBroadcastError(ValueError):
    """Base class for all package errors."""


class DimensionMismatch(QBroadcastError):
    pass


class DomainError(QBroadcastError):
    """A parameter lies outside its allowed interval."""


class InvalidState(QBroadcastError):
    """The operator is not a valid density matrix."""


class SpecError(QBroadcastError):
    """A cloner specification is inconsistent or unsupported by the operation."""
