"""Implied-volatility surfaces, daily sentiment, and VAR forecasting."""

from . import data_io, decompose, errors, evaluate, sentiment, surface, synthgen, varfit

__version__ = "0.1.0"

__all__ = [
    "data_io",
    "decompose",
    "errors",
    "evaluate",
    "sentiment",
    "surface",
    "synthgen",
    "varfit",
    "__version__",
]
