"""Exception types shared across the package."""


class ParseError(ValueError):
    """Malformed polynomial, arrangement file or graph file."""


class RingMismatchError(ValueError):
    """Operands live in different rings."""


class BudgetExceeded(RuntimeError):
    """A Groebner computation hit a configured pair or degree cap."""

    def __init__(self, message, pairs=0, degree=0):
        super().__init__(message)
        self.pairs = pairs
        self.degree = degree


class ConsistencyError(AssertionError):
    """An internal exactness check failed (e.g. Q*K != 0)."""
