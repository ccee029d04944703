"""Bessel-type special functions used by the series engines.

Scalar routines pick an evaluation regime per call and can report it
through :func:`bessel_eval`.  The array routines used for bulk term
generation always go through :func:`scipy.special.jv`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np
from scipy import special

from .errors import DomainError

# order at and above which large-order calls leave the recurrence regime
CROSSOVER_ORDER = 50

_REGIMES = ("series", "recurrence", "uniform-asymptotic")


@dataclass(frozen=True)
class BesselEvalPoint:
    """One evaluation of J_n(x) together with the regime that produced it."""

    order: int
    argument: float
    regime: str
    value: float


def select_regime(n: int, x: float, crossover: int = CROSSOVER_ORDER) -> str:
    """Return the regime used by :func:`bessel_j` for ``J_n(x)``.

    The ascending series is used while ``x**2 <= 4(n+1)``: its terms then
    decrease from the first one, so no cancellation occurs.  Outside that
    disc, orders below ``crossover`` use Miller's backward recurrence and
    larger orders are delegated to AMOS, which switches internally to
    Olver's uniform expansions.
    """
    ax = abs(x)
    if ax * ax <= 4.0 * (n + 1):
        return "series"
    if n < crossover:
        return "recurrence"
    return "uniform-asymptotic"


def _check_order(n) -> int:
    if isinstance(n, (bool, np.bool_)) or int(n) != n or n < 0:
        raise DomainError(f"order must be a non-negative integer, got {n!r}")
    return int(n)


def _series(n: int, x: float) -> float:
    h = 0.5 * x
    pre = 1.0
    for k in range(1, n + 1):
        pre *= h / k
    if pre == 0.0:
        return 0.0
    q = -h * h
    term = 1.0
    total = 1.0
    s = 1
    while True:
        term *= q / (s * (n + s))
        total += term
        if abs(term) <= 1e-17 * abs(total):
            break
        s += 1
    return pre * total


def _miller(n: int, x: float) -> float:
    # start well above max(n, x) so the seeded solution has decayed to J
    top = int(max(n, x) + 30 + 10 * x ** (1.0 / 3.0))
    top += top % 2
    big, small = 1e250, 1e-250
    bjp, bj = 0.0, 1e-30
    ans = 0.0
    norm = 0.0
    tox = 2.0 / x
    for j in range(top, 0, -1):
        bjm = j * tox * bj - bjp
        bjp, bj = bj, bjm
        if abs(bj) > big:
            bj *= small
            bjp *= small
            ans *= small
            norm *= small
        k = j - 1
        if k == n:
            ans = bj
        if k > 0 and k % 2 == 0:
            norm += 2.0 * bj
    norm += bj
    return ans / norm


def bessel_eval(n: int, x: float, crossover: int = CROSSOVER_ORDER) -> BesselEvalPoint:
    """Evaluate ``J_n(x)`` and record the regime used."""
    n = _check_order(n)
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"argument must be finite, got {x!r}")
    sign = -1.0 if (x < 0 and n % 2) else 1.0
    ax = abs(x)
    regime = select_regime(n, ax, crossover)
    if ax == 0.0:
        value = 1.0 if n == 0 else 0.0
    elif regime == "series":
        value = _series(n, ax)
    elif regime == "recurrence":
        value = _miller(n, ax)
    else:
        value = float(special.jv(n, ax))
    return BesselEvalPoint(n, x, regime, sign * value)


def bessel_j(n: int, x: float) -> float:
    """Bessel function of the first kind ``J_n(x)`` for integer ``n >= 0``.

    Accurate to about 1e-13 relative for ``n <= 1000`` and ``|x| <= 1000``
    away from the zeros of ``J_n``.
    """
    return bessel_eval(n, x).value


def bessel_j_prime(n: int, x: float) -> float:
    """First derivative ``J_n'(x)``."""
    n = _check_order(n)
    if n == 0:
        return -bessel_j(1, x)
    return 0.5 * (bessel_j(n - 1, x) - bessel_j(n + 1, x))


def bessel_j_second(n: int, x: float) -> float:
    """Second derivative ``J_n''(x)`` from Bessel's equation.

    At ``x = 0`` the equation cannot be divided through; the series limit
    is used for ``n >= 1`` and ``n = 0`` is rejected.
    """
    n = _check_order(n)
    x = float(x)
    if x == 0.0:
        if n == 0:
            raise DomainError("J_0''(0) is not available from the rearranged Bessel equation")
        return 0.25 if n == 2 else 0.0
    j = bessel_j(n, x)
    jp = bessel_j_prime(n, x)
    return -jp / x - (1.0 - (n / x) ** 2) * j


_K_ORDERS = {Fraction(1, 3): 1.0 / 3.0, Fraction(2, 3): 2.0 / 3.0}


def _k_order(nu) -> float:
    frac = Fraction(nu).limit_denominator(12)
    if frac not in _K_ORDERS or abs(float(nu) - float(frac)) > 1e-12:
        raise DomainError(f"only K_(1/3) and K_(2/3) are supported, got nu={nu!r}")
    return _K_ORDERS[frac]


def bessel_k(nu, x):
    """Modified Bessel function ``K_nu(x)`` for ``nu`` in {1/3, 2/3}, ``x > 0``."""
    order = _k_order(nu)
    xa = np.asarray(x, dtype=float)
    if np.any(~(xa > 0)):
        raise DomainError("K_nu(x) requires x > 0")
    out = special.kv(order, xa)
    return float(out) if np.ndim(out) == 0 else out


def airy_ai(z: float) -> float:
    """Airy function ``Ai(z)``."""
    return float(special.airy(z)[0])


def airy_ai_prime(z: float) -> float:
    """Derivative of the Airy function, ``Ai'(z)``."""
    return float(special.airy(z)[1])


def gamma(x: float) -> float:
    """Gamma function for real ``x > 0``."""
    x = float(x)
    if not x > 0:
        raise DomainError(f"gamma(x) is only provided for x > 0, got {x!r}")
    return math.gamma(x)


def _check_unit(x: float) -> float:
    x = float(x)
    if not 0.0 < x < 1.0:
        raise DomainError(f"uniform approximations need 0 < x < 1, got {x!r}")
    return x


def uniform_j(n: float, x: float) -> float:
    """Leading-order transition-region approximation of ``J_n(n x)``.

    ``sqrt(1-x^2)/(pi sqrt 3) * K_{1/3}(n (1-x^2)^{3/2} / 3)``; relative
    error is of order ``1/n`` near ``x = 1``.
    """
    x = _check_unit(x)
    w = 1.0 - x * x
    return math.sqrt(w) / (math.pi * math.sqrt(3.0)) * bessel_k(Fraction(1, 3), n * w**1.5 / 3.0)


def uniform_j_prime(n: float, x: float) -> float:
    """Leading-order transition-region approximation of ``J_n'(n x)``."""
    x = _check_unit(x)
    w = 1.0 - x * x
    return w / (math.sqrt(3.0) * math.pi) * bessel_k(Fraction(2, 3), n * w**1.5 / 3.0)


def airy_j_prime(n: float, x: float) -> float:
    """Airy form ``-(2/n)^{2/3} Ai'((n/2)^{2/3}(1-x^2))`` of ``J_n'(n x)``."""
    x = _check_unit(x)
    return -((2.0 / n) ** (2.0 / 3.0)) * airy_ai_prime((n / 2.0) ** (2.0 / 3.0) * (1.0 - x * x))


# ---------------------------------------------------------------------------
# bulk term generation


def jn_scaled(m, x: float, d: int = 0) -> np.ndarray:
    """``D^d J_m(m x)`` for an integer array ``m >= 1`` and scalar ``x``.

    ``D`` is differentiation with respect to the full argument ``m x``.
    """
    m = np.asarray(m, dtype=float)
    y = m * x
    if d == 0:
        return special.jv(m, y)
    if d == 1:
        return 0.5 * (special.jv(m - 1.0, y) - special.jv(m + 1.0, y))
    if d == 2:
        if x == 0.0:
            return np.where(m == 2.0, 0.25, 0.0)
        jm1 = special.jv(m - 1.0, y)
        jp1 = special.jv(m + 1.0, y)
        j = special.jv(m, y)
        # J'' = -J'/y - (1 - m^2/y^2) J with y = m x
        return -0.5 * (jm1 - jp1) / y + (1.0 / (x * x) - 1.0) * j
    raise DomainError(f"derivative order must be 0, 1 or 2, got {d!r}")


def jn_scaled_mp(m: int, x, d: int = 0):
    """Extended-precision ``D^d J_m(m x)`` at the current mpmath precision."""
    x = mpmath.mpf(x)
    return mpmath.besselj(m, m * x, derivative=d)
