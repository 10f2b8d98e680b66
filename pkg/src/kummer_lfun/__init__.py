"""Exact L-functions and ranks for the Kummer family y^2 = x(x^2 + t^(2d) x - 4 t^(2d)) over F_q(t)."""

from .errors import BadReductionError, BudgetExceeded, InconsistencyError

__all__ = ["BadReductionError", "BudgetExceeded", "InconsistencyError"]
__version__ = "0.1.0"
