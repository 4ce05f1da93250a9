"""Exception hierarchy shared by every module."""


class ZeroSumError(Exception):
    """Base class for all package errors."""


class GroupMismatchError(ZeroSumError, ValueError):
    """Operands live in different groups."""


class DomainError(ZeroSumError, ValueError):
    """A formula or operation was applied outside its domain of validity."""


class ResourceCapError(ZeroSumError):
    """A configured resource cap would be exceeded.

    ``partial_lower_bound`` is set by extremal searches that were able to fully
    decide every length below some threshold before giving up.
    """

    def __init__(self, message, partial_lower_bound=None):
        super().__init__(message)
        self.partial_lower_bound = partial_lower_bound


class ValidationError(ZeroSumError, ValueError):
    """Caller-supplied input violates a documented precondition."""


class InternalContradictionError(ZeroSumError):
    """A mathematical guarantee failed at runtime; some supplied constant is wrong."""


class AssumptionViolationError(ZeroSumError):
    """A registry assumption that an algorithm relies on does not hold."""


class ConfigurationError(ZeroSumError):
    """Required registry data is missing."""
