"""Cancellation-free building blocks for the theta integrands.

All functions take and return Python floats; they are called pointwise
by QUADPACK.  Small arguments switch to truncated Taylor series where
the direct formula would subtract nearly equal numbers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import DomainError

PI = math.pi
HALF_PI = 0.5 * math.pi


def sinc(t: float) -> float:
    """``sin(t)/t`` with the removable point at 0."""
    if abs(t) < 1e-4:
        t2 = t * t
        return 1.0 - t2 / 6.0 + t2 * t2 / 120.0
    return math.sin(t) / t


def one_minus_sinc(t: float) -> float:
    """``1 - sin(t)/t`` without cancellation for small ``t``."""
    if abs(t) < 0.5:
        t2 = t * t
        term = t2 / 6.0
        total = term
        k = 1
        while abs(term) > 1e-18 * total:
            term *= -t2 / ((2 * k + 2) * (2 * k + 3))
            total += term
            k += 1
        return total
    return 1.0 - math.sin(t) / t


def q_remainder(t: float) -> float:
    """``t^2 - 6(1 - sin(t)/t)``, which starts at ``t^4/20``."""
    if abs(t) < 1.0:
        t2 = t * t
        term = t2 * t2 / 20.0
        total = term
        k = 2
        while abs(term) > 1e-18 * abs(total):
            term *= -t2 / ((2 * k + 2) * (2 * k + 3))
            total += term
            k += 1
        return total
    return t * t - 6.0 * one_minus_sinc(t)


def q_remainder2(t: float) -> float:
    """``q(t) - t^4/20``, which starts at ``-t^6/840``."""
    if abs(t) < 1.5:
        t2 = t * t
        term = -(t2**3) / 840.0
        total = term
        k = 3
        while abs(term) > 1e-18 * abs(total):
            term *= -t2 / ((2 * k + 2) * (2 * k + 3))
            total += term
            k += 1
        return total
    return q_remainder(t) - t**4 / 20.0


def cot_minus_inv(p: float) -> float:
    """``cot(p) - 1/p`` for ``0 <= p < pi``."""
    if abs(p) < 0.1:
        p2 = p * p
        return -p * (1.0 / 3.0 + p2 * (1.0 / 45.0 + p2 * (2.0 / 945.0 + p2 * (1.0 / 4725.0 + p2 * 2.0 / 93555.0))))
    return math.cos(p) / math.sin(p) - 1.0 / p


def csc_minus_inv(p: float) -> float:
    """``1/sin(p) - 1/p`` for ``0 <= p < pi``."""
    if abs(p) < 0.1:
        p2 = p * p
        return p * (1.0 / 6.0 + p2 * (7.0 / 360.0 + p2 * (31.0 / 15120.0 + p2 * (127.0 / 604800.0 + p2 * 73.0 / 3421440.0))))
    return 1.0 / math.sin(p) - 1.0 / p


def p_over_sin(p: float) -> float:
    """``p / sin(p)``."""
    return 1.0 + p * csc_minus_inv(p)


def log_sinc(p: float) -> float:
    """``log(sin(p)/p)`` for ``0 <= p < pi``."""
    if abs(p) < 0.1:
        p2 = p * p
        return -p2 / 6.0 - p2 * p2 / 180.0 - p2**3 / 2835.0
    return math.log(math.sin(p) / p)


@dataclass(frozen=True)
class IntegrandParams:
    """Parameters of the theta integrands.

    Attributes
    ----------
    x : float
        Kapteyn argument, ``0 <= x < 1``.
    a : float
        Geometric factor in ``(0, 1]``.
    """

    x: float
    a: float = 1.0

    def __post_init__(self):
        x, a = float(self.x), float(self.a)
        if not 0.0 <= x < 1.0:
            raise DomainError(f"x must lie in [0, 1), got {x!r}")
        if not 0.0 < a <= 1.0:
            raise DomainError(f"a must lie in (0, 1], got {a!r}")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "a", a)

    @property
    def b(self) -> float:
        return 1.0 + self.a * self.a

    @property
    def e(self) -> float:
        return -2.0 * self.a

    @property
    def c(self) -> float:
        """``6(1-x)/x``; infinite at ``x = 0``."""
        return math.inf if self.x == 0.0 else 6.0 * (1.0 - self.x) / self.x

    def one_minus_xs(self, theta: float) -> float:
        """``1 - x sin(theta)/theta``, kept accurate near ``theta = 0``."""
        return (1.0 - self.x) + self.x * one_minus_sinc(theta)

    def psi(self, theta: float) -> float:
        """``theta - x sin(theta)``."""
        return theta * self.one_minus_xs(theta)

    def phi(self, theta: float) -> float:
        """``theta/2 - (x/2) sin(theta)``."""
        return 0.5 * self.psi(theta)

    def psi_complement(self, theta: float) -> float:
        """``pi - psi(theta)`` computed from ``u = pi - theta``."""
        u = PI - theta
        return u * (1.0 + self.x * sinc(u))
