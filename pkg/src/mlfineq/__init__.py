"""Mittag-Leffler function evaluation and numerical checks of its inequalities."""

from ._backend import BACKEND
from .core import (EvalBatch, EvalResult, Method, Params, TaylorJet, derivative, deriv_coeffs,
                   eval, eval_asymptotic, eval_derivative, eval_many, eval_series, switch_radius,
                   taylor_jet)
from .errors import (BracketFailure, ContourThroughZero, DivisionByZeroSeries, DomainTooSmall,
                     IllConditioned, MLFError, NonFinite)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "EvalBatch", "EvalResult", "Method", "Params", "TaylorJet", "derivative",
    "deriv_coeffs", "eval", "eval_asymptotic", "eval_derivative", "eval_many", "eval_series",
    "switch_radius", "taylor_jet", "BracketFailure", "ContourThroughZero", "DivisionByZeroSeries",
    "DomainTooSmall", "IllConditioned", "MLFError", "NonFinite", "__version__",
]
