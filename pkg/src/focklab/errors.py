"""Exception hierarchy for focklab."""


class FocklabError(Exception):
    """Base class for all library errors."""


class OrderOutOfRangeError(FocklabError, ValueError):
    """Hermite/Laguerre/polyanalytic order outside the supported range."""


class RangeError(FocklabError, ValueError):
    """Argument outside the supported evaluation range (shift too large, |z| too big)."""


class DivergentIntegralError(FocklabError, ValueError):
    """Gaussian integral with Re(a) <= 0."""


class ConditioningError(FocklabError, ValueError):
    """Direct symbol evaluation requested outside its well-conditioned strip."""


class UnsupportedPathError(FocklabError):
    """The requested evaluation route does not exist for this symbol."""


class WrongSpaceError(FocklabError, ValueError):
    """Fock data of one polyanalytic order handed to an operator of another."""


class GridMismatchError(FocklabError, ValueError):
    """Grids are incompatible, non-uniform, or violate their invariants."""
