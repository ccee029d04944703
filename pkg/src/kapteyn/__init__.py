"""Kapteyn series of Bessel functions: summation, closed forms, integrals and asymptotics."""
from .closed import REGISTRY, ClosedFormEntry, eval_closed, get_entry, registry_ids
from .direct import EvalResult, SeriesSpec, sum_integral, sum_series
from .errors import ConvergenceError, DomainError, KapteynError, QuadratureError, UnknownIdError
from .rational import Poly, RationalFunction

__version__ = "0.1.0"

__all__ = [
    "REGISTRY",
    "ClosedFormEntry",
    "ConvergenceError",
    "DomainError",
    "EvalResult",
    "KapteynError",
    "Poly",
    "QuadratureError",
    "RationalFunction",
    "SeriesSpec",
    "UnknownIdError",
    "eval_closed",
    "get_entry",
    "registry_ids",
    "sum_integral",
    "sum_series",
]
