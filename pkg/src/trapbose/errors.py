"""Exception types raised by the library."""


class TrapBoseError(Exception):
    """Base class for all library errors."""


class InvalidInputError(TrapBoseError, ValueError):
    pass


class DomainError(TrapBoseError, ValueError):
    pass


class TailFitError(TrapBoseError):
    pass


class CutoffError(TrapBoseError):
    pass


class BracketError(TrapBoseError):
    pass


class NumericRangeError(TrapBoseError):
    pass


class CapacityError(TrapBoseError):
    pass


class PreconditionError(TrapBoseError):
    pass


class IterationLimitError(TrapBoseError):
    """Iterative solver hit its cap. ``best`` carries the best iterate found."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class TruncationError(TrapBoseError):
    def __init__(self, message, bound=None):
        super().__init__(message)
        self.bound = bound
