"""Exception types shared across the package."""


class StabilityError(ValueError):
    """The mean-reversion parameter lies outside the stable range (-2, 0)."""


class NotPositiveDefiniteError(ValueError):
    """A matrix that must be positive definite failed its Cholesky factorization."""


class DegenerateSystemError(ValueError):
    """A linear system that should be regular turned out singular."""


class GridRangeError(ValueError):
    """A query point falls outside a solver's state grid."""


class NumericOverflowError(ArithmeticError):
    """Backward induction produced non-finite intermediate values."""
