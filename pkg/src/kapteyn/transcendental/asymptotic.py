"""Leading-order behaviour of divergent sums as ``x -> 1``."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

from ..direct import SeriesSpec, sum_integral, sum_series
from ..errors import DomainError, UnknownIdError
from .integrals import csc2_integral, regularized_jprime_sum

X_ASYM = 0.95
SQRT3 = math.sqrt(3.0)

_FORMULAS = {
    "3.24": ("sum J'_m(m x)", lambda w: SQRT3 / math.sqrt(w)),
    "3.24'": ("sum m J''_m(m x)", lambda w: SQRT3 / w**1.5),
    "3.53": ("int_0^x sum n J_2n(2n t) dt", lambda w: 1.0 / (4.0 * SQRT3 * w**1.5)),
    "3.54": ("sum n J_2n(2n x)", lambda w: SQRT3 / (4.0 * w**2.5)),
    "5.04": ("sum n J_n(n x)^2", lambda w: 1.0 / (math.pi * SQRT3 * w * w)),
    "5.08": ("sum n J'_n(n x)^2", lambda w: 2.0 / (math.pi * SQRT3 * w)),
}


class AsymptoticRangeWarning(UserWarning):
    """The argument is below the range where a leading-order formula applies."""


@dataclass(frozen=True)
class AsymResult:
    """Leading-order value with a validity tag."""

    id: str
    x: float
    value: float
    in_range: bool
    warning: str | None = None

    def __float__(self) -> float:
        return self.value


def asym_ids() -> list:
    return list(_FORMULAS)


def asym_description(id: str) -> str:
    return _lookup(id)[0]


def _lookup(id: str):
    try:
        return _FORMULAS[id]
    except KeyError:
        raise UnknownIdError(f"unknown asymptotic id {id!r}; known: {', '.join(_FORMULAS)}") from None


def asym_eval(id: str, x: float, x_asym: float = X_ASYM) -> AsymResult:
    """Evaluate a leading-order ``x -> 1`` formula.

    Below ``x_asym`` the value is still returned, tagged and accompanied
    by an :class:`AsymptoticRangeWarning`, so callers can compare regimes.
    """
    _, fn = _lookup(id)
    x = float(x)
    if not 0.0 < x < 1.0:
        raise DomainError(f"x must lie in (0, 1), got {x!r}")
    value = fn((1.0 - x) * (1.0 + x))
    if x > x_asym:
        return AsymResult(id, x, value, True)
    msg = f"x = {x!r} is below the asymptotic range x > {x_asym!r}"
    warnings.warn(msg, AsymptoticRangeWarning, stacklevel=2)
    return AsymResult(id, x, value, False, msg)


_HALF_N_EVEN = SeriesSpec(nu=1, parity="even", scale=Fraction(1, 2))


def reference_value(id: str, x: float, tol: float = 1e-10) -> float:
    """Accurate value of the sum that an asymptotic formula approximates.

    Uses the regularized integrals for the linear derivative sums and
    direct summation (with the argument cap lifted) otherwise; close to
    ``x = 1`` the bilinear sums need millions of terms.
    """
    _lookup(id)
    cap = max(0.999, 0.5 * (1.0 + x))
    if id == "3.24":
        return regularized_jprime_sum("all_m", x, tol)
    if id == "3.24'":
        return csc2_integral("all_m", x, tol, method="decomposed" if x > 0.99 else "plain")
    if id == "3.53":
        return sum_integral(_HALF_N_EVEN, x, tol, x_max=cap).value
    if id == "3.54":
        return sum_series(_HALF_N_EVEN, x, tol, x_max=cap).value
    if id == "5.04":
        return sum_series(SeriesSpec("bilinear", nu=1), x, tol, x_max=cap).value
    return sum_series(SeriesSpec("bilinear", nu=1, deriv=(1, 1)), x, tol, x_max=cap).value
