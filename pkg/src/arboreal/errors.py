"""Shared exception types."""


class ArborealError(Exception):
    pass


class ParseError(ArborealError):
    """Malformed input text; carries the offending token."""

    def __init__(self, message, token=None):
        super().__init__(message)
        self.token = token


class NotPrimeError(ArborealError):
    pass


class NotCubicError(ArborealError):
    pass


class NeedsExtension(ArborealError):
    """Normal form requires an irrational parameter; carries its minimal polynomial."""

    def __init__(self, message, minimal_poly=None):
        super().__init__(message)
        self.minimal_poly = minimal_poly


class DegreeBudgetExceeded(ArborealError):
    pass


class TimeBudgetExceeded(ArborealError):
    """Time budget hit; ``partial`` holds whatever was completed, flagged."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class Inconclusive(ArborealError):
    pass


class TooLarge(ArborealError):
    pass


class UndefinedError(ArborealError, ValueError):
    pass


class PreconditionError(ArborealError, ValueError):
    pass
