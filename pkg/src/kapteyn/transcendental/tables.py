"""Exact power-series tables of transcendental Kapteyn sums.

Each table stores the printed rational coefficients of a bracketed
series together with its prefactor ``const * x**p * (1 - x**2)**(h/2)``.
The oracle recomputes every coefficient from the ascending series of
``J_m(m x)`` in exact rational arithmetic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable

from ..direct import SeriesSpec, sum_integral, sum_series
from ..errors import DomainError, UnknownIdError
from ..rational import Poly, RationalFunction

F = Fraction
MAX_TAYLOR_ORDER = 12
SAFETY = 10.0
A_SYMBOL = Poly.monomial(1)  # the geometric factor a, as a polynomial variable


# exact series arithmetic -------------------------------------------------
# Coefficient lists are indexed by the power of x; entries are Fractions,
# or Poly objects in ``a`` when the geometric factor is kept symbolic.

def _zeros(K):
    return [F(0)] * (K + 1)


def _mul(u, v, K):
    out = _zeros(K)
    for i, ui in enumerate(u[: K + 1]):
        if ui == 0:
            continue
        for j, vj in enumerate(v[: K + 1 - i]):
            if vj != 0:
                out[i + j] = out[i + j] + ui * vj
    return out


def _binomial(alpha: Fraction, K):
    """``(1 - x**2)**alpha`` through ``x**K``."""
    out = _zeros(K)
    coef = F(1)
    for j in range(K // 2 + 1):
        out[2 * j] = coef * (-1) ** j
        coef = coef * (alpha - j) / (j + 1)
    return out


def _integrate(u, K):
    return [F(0)] + [u[i] / (i + 1) for i in range(K)]


def bessel_taylor(m: int, d: int, K: int) -> list:
    """Taylor coefficients in ``x`` of ``D^d J_m`` evaluated at ``m x``."""
    out = _zeros(K)
    s = 0
    while True:
        n = m + 2 * s
        p = n - d
        if p > K:
            break
        if n >= d and p >= 0:
            falling = 1
            for i in range(d):
                falling *= n - i
            out[p] += F((-1) ** s * falling * m**p, 2**n * math.factorial(s) * math.factorial(m + s))
        s += 1
    return out


def bessel_square_taylor(n: int, K: int) -> list:
    """Taylor coefficients of ``J_n(n x)**2`` from its closed ascending series."""
    out = _zeros(K)
    s = 0
    while 2 * (n + s) <= K:
        k = n + s
        out[2 * k] = F(
            (-1) ** s * math.factorial(2 * k) * n ** (2 * k),
            math.factorial(s) * 4**k * math.factorial(2 * n + s) * math.factorial(k) ** 2,
        )
        s += 1
    return out


def _weight(spec: SeriesSpec, m: int, symbolic_a: bool):
    w = F(m) ** spec.nu * spec.scale
    if spec.alternating and m % 2:
        w = -w
    if symbolic_a:
        return Poly.monomial(m, w)
    if spec.a != 1.0:
        w = w * F(spec.a) ** m
    return w


def _included(spec: SeriesSpec, m: int) -> bool:
    return spec.parity == "all" or (spec.parity == "even") == (m % 2 == 0)


def taylor_series(spec: SeriesSpec, K: int, symbolic_a: bool = False) -> list:
    """Exact Taylor coefficients of a Kapteyn sum through ``x**K``.

    Orders above ``K + 2`` cannot reach ``x**K`` because ``J_m(m x)``
    starts at ``x**m`` and each derivative lowers the power by one.
    """
    out = _zeros(K)
    if spec.family == "linear":
        d = spec.deriv
        for m in range(1, K + d + 1):
            if not _included(spec, m):
                continue
            w = _weight(spec, m, symbolic_a)
            for i, v in enumerate(bessel_taylor(m, d, K)):
                if v:
                    out[i] = out[i] + w * v
        return out
    d1, d2 = spec.deriv
    for n in range(1, (K + d1 + d2) // 2 + 1):
        if not _included(spec, n):
            continue
        w = _weight(spec, n, symbolic_a)
        if d1 == d2 == 0:
            prod = bessel_square_taylor(n, K)
        else:
            prod = _mul(bessel_taylor(n, d1, K), bessel_taylor(n, d2, K), K)
        for i, v in enumerate(prod):
            if v:
                out[i] = out[i] + w * v
    return out


def extract_taylor_coeff(spec: SeriesSpec, k: int, symbolic_a: bool = False):
    """Exact coefficient of ``x**k`` in the Taylor expansion of a sum.

    Parameters
    ----------
    spec : SeriesSpec
    k : int
        Power of ``x``, at most ``MAX_TAYLOR_ORDER``.
    symbolic_a : bool
        Return a polynomial in the geometric factor ``a`` instead of
        substituting ``spec.a``.

    Returns
    -------
    Fraction or Poly
    """
    k = int(k)
    if k < 0:
        raise DomainError(f"k must be non-negative, got {k}")
    if k > MAX_TAYLOR_ORDER:
        raise DomainError(f"k = {k} exceeds the extraction budget {MAX_TAYLOR_ORDER}")
    return taylor_series(spec, k, symbolic_a)[k]


# table definitions -------------------------------------------------------

@dataclass(frozen=True)
class CoeffTable:
    """Printed power series of a transcendental sum.

    The represented function is
    ``const * x**p * (1 - x**2)**(h/2) * sum_j c_j x**((start + j) * step)``.

    Attributes
    ----------
    id : str
    description : str
    coefficients : tuple
        Exact rationals (``Poly`` in ``a`` for the geometric-factor table).
    step : int
        Power step, 1 or 2.
    start : int
        Index of the first stored coefficient.
    const, p, h : Fraction, int, int
        Prefactor descriptor.
    source : callable
        ``source(K)`` returns the exact Taylor coefficients of the function.
    oracle : callable
        ``oracle(x, tol, a)`` evaluates the function numerically.
    """

    id: str
    description: str
    coefficients: tuple
    step: int
    start: int = 0
    const: Fraction = F(1)
    p: int = 0
    h: int = 0
    source: Callable = field(default=None, repr=False, compare=False)
    oracle: Callable = field(default=None, repr=False, compare=False)
    symbolic_a: bool = False

    @property
    def last(self) -> int:
        return self.start + len(self.coefficients) - 1

    @property
    def last_power(self) -> int:
        return self.p + self.last * self.step

    def prefactor(self) -> RationalFunction:
        """Prefactor as an element of ``Q(x)(sqrt(1 - x^2))``."""
        out = RationalFunction(Poly.monomial(self.p, self.const))
        root = RationalFunction.sqrt_term()
        factor = root if self.h > 0 else root.inverse()
        for _ in range(abs(self.h)):
            out = out * factor
        return out

    def prefactor_value(self, x: float) -> float:
        return float(self.const) * x**self.p * (1.0 - x * x) ** (0.5 * self.h)

    def bracket_series(self, K: int) -> list:
        """Exact coefficients of the bracketed series through ``x**K``."""
        S = self.source(K + self.p)
        T = _mul(S, _binomial(F(-self.h, 2), K + self.p), K + self.p)
        inv = 1 / self.const
        return [v * inv for v in T[self.p:]]

    def to_dict(self) -> dict:
        def enc(c):
            if isinstance(c, Poly):
                return {"poly_in_a": c.to_pairs()}
            return [c.numerator, c.denominator]

        return {
            "id": self.id,
            "description": self.description,
            "prefactor": {"const": [self.const.numerator, self.const.denominator], "x_power": self.p,
                          "one_minus_x2_half_power": self.h, "expression": str(self.prefactor())},
            "step": self.step,
            "start": self.start,
            "coefficients": [enc(c) for c in self.coefficients],
        }


def _lin(**kw) -> SeriesSpec:
    return SeriesSpec(family="linear", **kw)


def _bil(**kw) -> SeriesSpec:
    return SeriesSpec(family="bilinear", **kw)


def _spec_source(spec, symbolic=False):
    return lambda K: taylor_series(spec, K, symbolic)


def _spec_oracle(spec):
    def run(x, tol=1e-13, a=None):
        s = spec if a is None else spec.with_(a=a)
        return sum_series(s, x, tol).value
    return run


_HALF_N_EVEN = _lin(nu=1, parity="even", scale=F(1, 2))  # sum n J_2n(2n x)
_JP_EVEN = _lin(nu=0, parity="even", deriv=1)            # sum J'_2n(2n x)


def _integral_source(K):
    return _integrate(taylor_series(_HALF_N_EVEN, K), K)


def _integral_oracle(x, tol=1e-13, a=None):
    return sum_integral(_HALF_N_EVEN, x, tol).value


def _probability_source(K):
    A = taylor_series(_JP_EVEN, K)
    B = _integral_source(K)
    out = _zeros(K)
    for i in range(K + 1):
        out[i] = (A[i - 2] if i >= 2 else 0) - B[i] + (B[i - 2] if i >= 2 else 0)
    return out


def _probability_oracle(x, tol=1e-13, a=None):
    A = sum_series(_JP_EVEN, x, tol).value
    B = _integral_oracle(x, tol)
    return x * x * A - (1.0 - x * x) * B


def _table(id, desc, coeffs, step, source, oracle, **kw):
    return CoeffTable(id, desc, tuple(coeffs), step, source=source, oracle=oracle, **kw)


def _build_tables() -> dict:
    s_m1 = _lin(nu=-1)
    s_m1a = _lin(nu=-1, a=0.5)
    s_jp = _lin(nu=0, deriv=1)
    s_nj_even = _lin(nu=1, parity="even")
    s_m1_even = _lin(nu=-1, parity="even")
    b_1 = _bil(nu=1)
    b_1p = _bil(nu=1, deriv=(1, 1))
    b_m1 = _bil(nu=-1)
    a = A_SYMBOL
    tabs = [
        _table("3.04", "sum a^m J_m(m x)/m", [a * F(1, 2), a * a * F(1, 4), (3 * a**3 - a) * F(1, 16)], 1,
               _spec_source(s_m1a, True), _spec_oracle(s_m1a), start=1, symbolic_a=True),
        _table("3.20", "sum J_m(m x)/m",
               [F(1, 2), F(1, 4), F(1, 8), F(1, 12), F(23, 384), F(11, 240), F(841, 23040), F(151, 5040)],
               1, _spec_source(s_m1), _spec_oracle(s_m1), start=1),
        _table("3.22", "sum J'_m(m x)",
               [F(1, 2), F(1, 2), F(3, 8), F(1, 3), F(115, 384), F(11, 40), F(5887, 23040), F(151, 630)],
               1, _spec_source(s_jp), _spec_oracle(s_jp)),
        _table("3.49", "sum 2n J_2n(2n x)",
               [F(1), F(7, 3), F(239, 60), F(1481, 252), F(292223, 36288)],
               2, _spec_source(s_nj_even), _spec_oracle(s_nj_even), start=1),
        _table("3.50", "sum J_2n(2n x)/(2n)",
               [F(1, 4), F(1, 12), F(11, 240), F(151, 5040), F(15619, 725760)],
               2, _spec_source(s_m1_even), _spec_oracle(s_m1_even), start=1),
        _table("3.51", "sum J'_2n(2n x)",
               [F(1, 2), F(1, 3), F(11, 40), F(151, 630), F(15619, 72576)],
               2, _spec_source(_JP_EVEN), _spec_oracle(_JP_EVEN), p=1),
        _table("3.52", "sum J'_2n(2n x), resummed",
               [F(1), F(1, 6), F(11, 120), F(59, 1008), F(14971, 362880)],
               2, _spec_source(_JP_EVEN), _spec_oracle(_JP_EVEN), const=F(1, 2), p=1, h=-1),
        _table("3.55", "sum 2n J_2n(2n x), resummed",
               [F(1), F(-1, 6), F(1, 40), F(5, 1008), F(103, 72576)],
               2, _spec_source(s_nj_even), _spec_oracle(s_nj_even), p=2, h=-5),
        _table("3.56", "int_0^x sum n J_2n(2n t) dt",
               [F(1), F(-1, 10), F(-1, 56), F(-19, 3024), F(-809, 266112)],
               2, _integral_source, _integral_oracle, const=F(1, 6), p=3, h=-3),
        _table("5.02", "sum n J_n(n x)^2",
               [F(1), F(7, 4), F(239, 96), F(7435, 2304), F(292223, 73728)],
               2, _spec_source(b_1), _spec_oracle(b_1), const=F(1, 4), p=2),
        _table("5.06", "sum n J_n(n x)^2, resummed",
               [F(1), F(-1, 4), F(-1, 96), F(-5, 2304), F(-23, 73728)],
               2, _spec_source(b_1), _spec_oracle(b_1), const=F(1, 4), p=2, h=-4),
        _table("5.07", "sum n J'_n(n x)^2",
               [F(1, 4), F(5, 16), F(127, 384), F(3133, 9216), F(101887, 294912)],
               2, _spec_source(b_1p), _spec_oracle(b_1p)),
        _table("5.09", "sum n J'_n(n x)^2, resummed",
               [F(1), F(1, 4), F(7, 96), F(85, 2304), F(1631, 73728)],
               2, _spec_source(b_1p), _spec_oracle(b_1p), const=F(1, 4), h=-2),
        _table("5.10", "sum J_n(n x)^2/n",
               [F(1), F(1, 4), F(11, 96), F(151, 2304), F(15619, 368640)],
               2, _spec_source(b_m1), _spec_oracle(b_m1), const=F(1, 4), p=2),
        _table("6.04", "normalized total radiation probability",
               [F(1), F(3, 10), F(41, 280), F(275, 3024), F(28121, 443520)],
               2, _probability_source, _probability_oracle, const=F(1, 3), p=3, h=-1),
    ]
    return {t.id: t for t in tabs}


TABLES = _build_tables()


def table_ids() -> list:
    return list(TABLES)


def get_table(id: str) -> CoeffTable:
    try:
        return TABLES[str(id)]
    except KeyError:
        raise UnknownIdError(f"unknown coefficient table {id!r}; known: {', '.join(TABLES)}") from None


def _coeff_value(c, a):
    if isinstance(c, Poly):
        if a is None:
            raise DomainError("this table depends on the geometric factor; pass a")
        return float(c(F(a)))
    return float(c)


def eval_coeff_table(id: str, x: float, order: int | None = None, a: float | None = None) -> float:
    """Evaluate a truncated table.

    Parameters
    ----------
    id : str
        Table id, e.g. ``"3.20"``.
    x : float
    order : int, optional
        Highest coefficient index ``k`` kept; the bracket term of index
        ``k`` carries ``x**(k * step)``.  Defaults to every stored term.
    a : float, optional
        Geometric factor, required by the ``"3.04"`` table.
    """
    t = get_table(id)
    if order is None:
        order = t.last
    order = int(order)
    if order > t.last:
        raise DomainError(f"table {id} stores terms up to index {t.last}, asked for {order}")
    if order < t.start:
        raise DomainError(f"table {id} starts at index {t.start}, asked for {order}")
    x = float(x)
    if not -1.0 < x < 1.0:
        raise DomainError(f"x must lie in (-1, 1), got {x!r}")
    if a is not None and not 0.0 < a <= 1.0:
        raise DomainError(f"a must lie in (0, 1], got {a!r}")
    terms = [
        _coeff_value(c, a) * x ** ((t.start + j) * t.step)
        for j, c in enumerate(t.coefficients[: order - t.start + 1])
    ]
    return t.prefactor_value(x) * math.fsum(terms)


@lru_cache(maxsize=None)
def _exact_bracket(id: str, K: int) -> tuple:
    return tuple(get_table(id).bracket_series(K))


@dataclass
class CoeffCheck:
    """Comparison of one stored coefficient with the exact oracle."""

    index: int
    power: int
    printed: object
    exact: object

    @property
    def ok(self) -> bool:
        return self.printed == self.exact


def verify_table(id: str) -> list:
    """Compare every stored coefficient with the exact extraction.

    Also checks that the bracket has no terms off the ``step`` lattice.
    Returns one ``CoeffCheck`` per stored coefficient, plus one per
    unexpected non-zero off-lattice coefficient (with ``printed = 0``).
    """
    t = get_table(id)
    B = _exact_bracket(id, t.last * t.step)
    out = []
    stored = {(t.start + j) * t.step: c for j, c in enumerate(t.coefficients)}
    for power in range(t.last * t.step + 1):
        if power in stored:
            out.append(CoeffCheck(power // t.step, power, stored[power], B[power]))
        elif B[power] != 0:
            out.append(CoeffCheck(-1, power, F(0), B[power]))
    return out


def next_coefficient(id: str):
    """Exact first omitted bracket coefficient and its power of ``x``."""
    t = get_table(id)
    power = (t.last + 1) * t.step
    for _ in range(4):
        B = _exact_bracket(id, power)
        if B[power] != 0:
            return B[power], power
        power += t.step
    return F(0), power


def truncation_bound(id: str, x: float, a: float | None = None) -> float:
    """``SAFETY`` times the magnitude of the first omitted term at ``x``."""
    t = get_table(id)
    c, power = next_coefficient(id)
    return SAFETY * abs(t.prefactor_value(x) * _coeff_value(c, a) * x**power)


def eval_table_oracle(id: str, x: float, tol: float = 1e-13, a: float | None = None) -> float:
    """Numerical value of the function a table expands, from the direct engine."""
    return get_table(id).oracle(x, tol, a)
