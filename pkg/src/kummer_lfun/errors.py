"""Exception types shared across the engine."""


class BudgetExceeded(ValueError):
    """A finite field (or a naive double sum) would exceed the table budget."""


class InconsistencyError(RuntimeError):
    """Two independent computations disagree, or an L-coefficient is not an integer."""


class BadReductionError(ValueError):
    """A group order was requested at a place of bad reduction."""
