"""Exception hierarchy shared by the library and the CLI."""


class FlowtypeError(Exception):
    """Base class for all library errors."""


class InvalidInput(FlowtypeError, ValueError):
    """Malformed or ill-typed input (CLI exit code 2)."""


class PreconditionError(FlowtypeError):
    """A documented precondition does not hold (CLI exit code 3)."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class GuardExceeded(PreconditionError):
    """A search-space guard was exceeded and no override was given."""
