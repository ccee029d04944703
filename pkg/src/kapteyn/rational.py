"""Exact rational-function algebra with a square-root extension.

Elements have the form ``(P + Q*s) / D`` where ``P, Q, D`` are polynomials
in ``z`` with rational coefficients and ``s = sqrt(1 - z**2)``.  Pure
rational functions have ``Q = 0``.  All arithmetic is exact.
"""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from numbers import Rational

import mpmath
import numpy as np

from .errors import DomainError


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    if isinstance(c, float):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"cannot convert {type(c).__name__} to an exact rational")


class Poly:
    """Polynomial with exact rational coefficients, lowest degree first."""

    __slots__ = ("c",)

    def __init__(self, coeffs=()):
        c = [_frac(v) for v in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.c = tuple(c)

    # construction helpers
    @classmethod
    def const(cls, v) -> "Poly":
        return cls([v])

    @classmethod
    def monomial(cls, k: int, v=1) -> "Poly":
        return cls([0] * k + [v])

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return not self.c

    def lead(self) -> Fraction:
        return self.c[-1] if self.c else Fraction(0)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return self.c == other.c

    def __hash__(self):
        return hash(self.c)

    def __repr__(self):
        return f"Poly({[str(v) for v in self.c]})"

    def __add__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        other = other if isinstance(other, Poly) else Poly.const(other)
        n = max(len(self.c), len(other.c))
        a = self.c + (Fraction(0),) * (n - len(self.c))
        b = other.c + (Fraction(0),) * (n - len(other.c))
        return Poly([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return Poly([-v for v in self.c])

    def __sub__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        other = other if isinstance(other, Poly) else Poly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return Poly.const(other) - self

    def __mul__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        if not isinstance(other, Poly):
            v = _frac(other)
            return Poly([v * x for x in self.c])
        if not self.c or not other.c:
            return Poly()
        out = [Fraction(0)] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            if a == 0:
                continue
            for j, b in enumerate(other.c):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def divmod(self, other: "Poly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q = [Fraction(0)] * max(len(self.c) - len(other.c) + 1, 1)
        r = list(self.c)
        dl = other.lead()
        while len(r) >= len(other.c) and any(r):
            shift = len(r) - len(other.c)
            f = r[-1] / dl
            q[shift] = f
            for i, b in enumerate(other.c):
                r[shift + i] -= f * b
            r.pop()
            while r and r[-1] == 0:
                r.pop()
        return Poly(q), Poly(r)

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError("polynomial division is not exact")
        return q

    def monic(self) -> "Poly":
        return self * (1 / self.lead()) if self.c else self

    def deriv(self) -> "Poly":
        return Poly([k * v for k, v in enumerate(self.c)][1:])

    def antideriv(self) -> "Poly":
        return Poly([0] + [v / (k + 1) for k, v in enumerate(self.c)])

    def __call__(self, z):
        if isinstance(z, (Fraction, int)):
            acc = Fraction(0)
        else:
            acc = 0 * z
        for v in reversed(self.c):
            acc = acc * z + (v if isinstance(z, (Fraction, int)) else _as(v, z))
        return acc

    def compose_neg(self) -> "Poly":
        """Return ``p(-z)``."""
        return Poly([v if k % 2 == 0 else -v for k, v in enumerate(self.c)])

    def shift_power(self, k: int) -> "Poly":
        """Multiply by ``z**k``."""
        return Poly([0] * k + list(self.c)) if self.c else self

    def valuation(self) -> int:
        """Lowest power with a non-zero coefficient."""
        for k, v in enumerate(self.c):
            if v != 0:
                return k
        raise ValueError("zero polynomial has no valuation")

    def to_pairs(self):
        return [[v.numerator, v.denominator] for v in self.c]

    def __str__(self):
        if not self.c:
            return "0"
        parts = []
        for k, v in enumerate(self.c):
            if v == 0:
                continue
            mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
            if mono and abs(v) == 1:
                coef = "-" if v < 0 else ""
                parts.append(f"{coef}{mono}")
            else:
                parts.append(f"{v}{'*' + mono if mono else ''}")
        return " + ".join(parts).replace("+ -", "- ")


def _as(v: Fraction, like):
    if isinstance(like, mpmath.mpf):
        return mpmath.mpf(v.numerator) / v.denominator
    return float(v)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor."""
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic() if not a.is_zero() else Poly.const(1)


ONE = Poly.const(1)
Z = Poly.monomial(1)
S2 = Poly([1, 0, -1])  # 1 - z^2, the square of the extension element


class RationalFunction:
    """Normalized element ``(p + q*sqrt(1-z^2)) / d`` of Q(z)(sqrt(1-z^2)).

    The stored triple has no common polynomial factor and a monic
    denominator, which makes equality a structural comparison.
    """

    __slots__ = ("p", "q", "d")

    def __init__(self, p, q=None, d=None):
        p = p if isinstance(p, Poly) else Poly(p)
        q = Poly() if q is None else (q if isinstance(q, Poly) else Poly(q))
        d = ONE if d is None else (d if isinstance(d, Poly) else Poly(d))
        if d.is_zero():
            raise ZeroDivisionError("zero denominator")
        if p.is_zero() and q.is_zero():
            self.p, self.q, self.d = Poly(), Poly(), ONE
            return
        g = reduce(poly_gcd, [x for x in (p, q, d) if not x.is_zero()])
        if g.degree > 0:
            p, q, d = (x.exact_div(g) for x in (p, q, d))
        lc = d.lead()
        self.p, self.q, self.d = p * (1 / lc), q * (1 / lc), d * (1 / lc)

    # constructors -----------------------------------------------------
    @classmethod
    def from_poly(cls, num, den=None) -> "RationalFunction":
        return cls(num, None, den)

    @classmethod
    def sqrt_term(cls, coeff=1) -> "RationalFunction":
        """The element ``coeff * sqrt(1 - z^2)``."""
        return cls(Poly(), Poly.const(coeff), ONE)

    @property
    def is_rational(self) -> bool:
        return self.q.is_zero()

    def is_zero(self) -> bool:
        return self.p.is_zero() and self.q.is_zero()

    # arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Poly):
            return RationalFunction(other)
        return RationalFunction(Poly.const(other))

    def __add__(self, other):
        o = self._coerce(other)
        return RationalFunction(self.p * o.d + o.p * self.d, self.q * o.d + o.q * self.d, self.d * o.d)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.p, -self.q, self.d)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        p = self.p * o.p + self.q * o.q * S2
        q = self.p * o.q + self.q * o.p
        return RationalFunction(p, q, self.d * o.d)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        # 1/(p + q s) = (p - q s) / (p^2 - q^2 (1 - z^2))
        norm = self.p * self.p - self.q * self.q * S2
        return RationalFunction(self.d * self.p, -(self.d * self.q), norm)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self.p == o.p and self.q == o.q and self.d == o.d

    def __hash__(self):
        return hash((self.p, self.q, self.d))

    def deriv(self) -> "RationalFunction":
        """Exact derivative with respect to ``z``."""
        p, q, d = self.p, self.q, self.d
        dp, dq, dd = p.deriv(), q.deriv(), d.deriv()
        # (q s)' = s * (q' (1 - z^2) - z q) / (1 - z^2)
        num_p = (dp * d - p * dd) * S2
        num_q = (dq * S2 - Z * q) * d - q * dd * S2
        return RationalFunction(num_p, num_q, d * d * S2)

    def euler(self) -> "RationalFunction":
        """Apply ``z d/dz``."""
        return RationalFunction(Z) * self.deriv()

    def conjugate(self) -> "RationalFunction":
        return RationalFunction(self.p, -self.q, self.d)

    def reflect(self) -> "RationalFunction":
        """Return ``f(-z)``."""
        return RationalFunction(self.p.compose_neg(), self.q.compose_neg(), self.d.compose_neg())

    # evaluation -----------------------------------------------------------
    def eval_exact(self, z) -> Fraction:
        """Exact value at rational ``z``; only for pure rational functions."""
        if not self.is_rational:
            raise ValueError("exact evaluation needs a rational function")
        z = _frac(z)
        den = self.d(z)
        if den == 0:
            raise ZeroDivisionError(f"pole at z = {z}")
        return self.p(z) / den

    def __call__(self, z):
        if isinstance(z, np.ndarray):
            return np.array([self(float(v)) for v in z.ravel()]).reshape(z.shape)
        zf = _frac(z) if not isinstance(z, mpmath.mpf) else None
        if zf is None:
            return self._eval_mp(z)
        if self.is_rational:
            return float(self.eval_exact(zf))
        if abs(zf) > 1:
            raise DomainError("sqrt(1 - z^2) is not real for |z| > 1")
        with mpmath.workdps(40):
            return float(self._eval_mp(mpmath.mpf(zf.numerator) / zf.denominator, zf))

    def _eval_mp(self, z, zf=None):
        if zf is not None:
            P, Q, D = self.p(zf), self.q(zf), self.d(zf)
            if D == 0:
                raise ZeroDivisionError(f"pole at z = {zf}")
            s = mpmath.sqrt(mpmath.mpf((1 - zf * zf).numerator) / (1 - zf * zf).denominator)
            Pm = mpmath.mpf(P.numerator) / P.denominator
            Qm = mpmath.mpf(Q.numerator) / Q.denominator
            Dm = mpmath.mpf(D.numerator) / D.denominator
            if P != 0 and Q != 0 and (P > 0) != (Q > 0):
                # conjugate form avoids cancellation between p and q*s
                R = P * P - Q * Q * (1 - zf * zf)
                Rm = mpmath.mpf(R.numerator) / R.denominator
                return Rm / (Dm * (Pm - Qm * s))
            return (Pm + Qm * s) / Dm
        s = mpmath.sqrt(1 - z * z)
        return (self.p(z) + self.q(z) * s) / self.d(z)

    def has_pole_in(self, lo: float = 0.0, hi: float = 1.0) -> bool:
        """True if the denominator vanishes in the open interval (lo, hi)."""
        d = self.d
        # strip the exact factors z -+ 1 first; multiple roots defeat np.roots
        for f in (Poly([-1, 1]), Poly([1, 1]), Poly([0, 1])):
            while d.degree > 0:
                q, r = d.divmod(f)
                if not r.is_zero():
                    break
                d = q
        if d.degree <= 0:
            return False
        roots = np.roots([float(v) for v in reversed(d.c)])
        for r in roots:
            if abs(r.imag) < 1e-9 and lo + 1e-12 < r.real < hi - 1e-12:
                return True
        return False

    # presentation ----------------------------------------------------------
    def to_dict(self) -> dict:
        return {"p": self.p.to_pairs(), "q": self.q.to_pairs(), "d": self.d.to_pairs()}

    def __str__(self):
        num = f"({self.p})" if self.q.is_zero() else f"({self.p}) + ({self.q})*sqrt(1-z^2)"
        return num if self.d == ONE else f"{num} / ({self.d})"

    def __repr__(self):
        return f"RationalFunction({self})"


# ---------------------------------------------------------------------------
# exact integration of rational functions


def _solve_linear(rows, rhs):
    """Gauss-Jordan elimination over Q; returns one solution or None."""
    n_rows, n_cols = len(rows), len(rows[0]) if rows else 0
    a = [list(r) + [b] for r, b in zip(rows, rhs)]
    piv_cols = []
    r = 0
    for c in range(n_cols):
        piv = next((i for i in range(r, n_rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [v * inv for v in a[r]]
        for i in range(n_rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [vi - f * vr for vi, vr in zip(a[i], a[r])]
        piv_cols.append(c)
        r += 1
    for i in range(r, n_rows):
        if a[i][-1] != 0:
            return None
    sol = [Fraction(0)] * n_cols
    for i, c in enumerate(piv_cols):
        sol[c] = a[i][-1]
    return sol


def antiderivative(f: RationalFunction) -> RationalFunction:
    """Rational antiderivative of a rational function (Hermite reduction).

    Raises :class:`ArithmeticError` if the antiderivative has a
    logarithmic or arctangent part, or if ``f`` carries a square root.
    """
    if not f.is_rational:
        raise ArithmeticError("only rational integrands are supported")
    if f.is_zero():
        return RationalFunction(Poly())
    quo, rem = f.p.divmod(f.d)
    poly_part = quo.antideriv()
    if rem.is_zero():
        return RationalFunction(poly_part)
    B = f.d
    D1 = poly_gcd(B, B.deriv())
    D2 = B.exact_div(D1)
    n1, n2 = max(D1.degree, 0), max(D2.degree, 0)
    # rem = C' D2 - C (D2 D1'/D1) + E D1 with deg C < n1, deg E < n2
    H = (D2 * D1.deriv()).exact_div(D1)
    cols = []
    for k in range(n1):
        ck = Poly.monomial(k)
        cols.append(ck.deriv() * D2 - ck * H)
    for k in range(n2):
        cols.append(Poly.monomial(k) * D1)
    size = B.degree
    rows = [[col.c[i] if i < len(col.c) else Fraction(0) for col in cols] for i in range(size)]
    rhs = [rem.c[i] if i < len(rem.c) else Fraction(0) for i in range(size)]
    sol = _solve_linear(rows, rhs)
    if sol is None:
        raise ArithmeticError("Hermite reduction system is inconsistent")
    C = Poly(sol[:n1])
    E = Poly(sol[n1:])
    if not E.is_zero():
        raise ArithmeticError("antiderivative has a logarithmic part")
    return RationalFunction(poly_part) + RationalFunction(C, None, D1)


def definite_from_zero(f: RationalFunction) -> RationalFunction:
    """``z -> integral_0^z f(t) dt`` for a rational ``f`` regular at 0."""
    F = antiderivative(f)
    return F - F.eval_exact(0)
