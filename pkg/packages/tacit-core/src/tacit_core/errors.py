class TcError(Exception):
    """Base class for every error raised by tacit_core."""


class InputError(TcError, ValueError):
    """A problem, strategy or parameter failed validation."""


class DimensionError(InputError):
    """Array shapes, alphabets or Hilbert dimensions do not agree."""


class RangeError(InputError):
    """A scalar parameter lies outside its admissible range."""


class UnsupportedError(InputError):
    """The operation is not defined for this kind of problem."""


class BudgetExceeded(TcError):
    """A search would evaluate more candidates than the configured budget."""

    def __init__(self, what: str, count: int, budget: int):
        super().__init__(f"{what}: {count:,} candidates exceed the budget of {budget:,}")
        self.count = count
        self.budget = budget


class NumericalError(TcError, ArithmeticError):
    """A numerical routine produced a result outside its tolerance."""
