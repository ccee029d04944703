"""Brute-force summation of Kapteyn series with certified truncation.

A :class:`SeriesSpec` describes one series

    sum_m  c * m**nu * (-1)**m * a**m * D^d J_m(m x)              (linear)
    sum_n  c * n**nu * (-1)**n * a**n * D^d1 J_n(n x) D^d2 J_n(n x)  (bilinear)

with ``m`` running over all, even or odd positive integers.  The engine
in :func:`sum_series` is deliberately simple (terms are generated in
vectorized chunks and accumulated with :func:`math.fsum`) because every
other module in the package is validated against it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction

import mpmath
import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy import integrate, special

from .errors import ConvergenceError, DomainError, QuadratureError
from .specfun import jn_scaled

X_MAX = 0.999
ABS_FLOOR = 1e-15
MAX_TERMS = 20_000_000
# relative accuracy assumed for one float term, on top of argument rounding
EPS_TERM = 5e-15
# largest number of terms recomputed in extended precision
MP_TERM_LIMIT = 20_000
TAIL_RUN = 5

FAMILIES = ("linear", "bilinear")
PARITIES = ("all", "even", "odd")


@dataclass(frozen=True)
class SeriesSpec:
    """Structural description of one Kapteyn series.

    Parameters
    ----------
    family : {"linear", "bilinear"}
    nu : int
        Weight exponent, the term carries ``m**nu``; between -2 and 4.
    alternating : bool
        Include the factor ``(-1)**m``.
    parity : {"all", "even", "odd"}
        Which Bessel orders are summed.  Odd sums start at ``m = 1``.
    a : float
        Geometric factor ``a**m`` with ``0 < a <= 1``.
    deriv : int or tuple of int
        Derivative order ``d`` (linear) or pair ``(d1, d2)`` (bilinear).
    scale : Fraction
        Constant overall factor, e.g. ``1/2`` for ``sum n J_2n(2n x)``.
    """

    family: str = "linear"
    nu: int = 0
    alternating: bool = False
    parity: str = "all"
    a: float = 1.0
    deriv: int | tuple = 0
    scale: Fraction = field(default=Fraction(1))

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"family must be one of {FAMILIES}, got {self.family!r}")
        if self.parity not in PARITIES:
            raise DomainError(f"parity must be one of {PARITIES}, got {self.parity!r}")
        if int(self.nu) != self.nu or not -2 <= self.nu <= 4:
            raise DomainError(f"weight exponent must be an integer in [-2, 4], got {self.nu!r}")
        object.__setattr__(self, "nu", int(self.nu))
        a = float(self.a)
        if not 0.0 < a <= 1.0:
            raise DomainError(f"geometric factor a must lie in (0, 1], got {self.a!r}")
        object.__setattr__(self, "a", a)
        d = self.deriv
        if self.family == "linear":
            if isinstance(d, (tuple, list)):
                raise DomainError("linear series take a single derivative order")
            orders = (d,)
        else:
            if isinstance(d, (tuple, list)):
                d = tuple(int(v) for v in d)
            else:
                d = (int(d), int(d))
            if len(d) != 2:
                raise DomainError("bilinear series take a pair of derivative orders")
            object.__setattr__(self, "deriv", tuple(sorted(d)))
            orders = d
        if any(int(v) != v or v not in (0, 1, 2) for v in orders):
            raise DomainError(f"derivative orders must be 0, 1 or 2, got {self.deriv!r}")
        if self.family == "linear":
            object.__setattr__(self, "deriv", int(d))
        object.__setattr__(self, "scale", Fraction(self.scale))
        if self.scale == 0:
            raise DomainError("scale must be non-zero")

    @property
    def derivs(self) -> tuple:
        return (self.deriv,) if self.family == "linear" else self.deriv

    def orders(self, k):
        """Bessel orders for the 1-based term indices ``k``."""
        k = np.asarray(k, dtype=np.int64)
        if self.parity == "all":
            return k
        if self.parity == "even":
            return 2 * k
        return 2 * k - 1

    def describe(self) -> str:
        parts = [self.family, f"nu={self.nu}", self.parity]
        if self.alternating:
            parts.append("alternating")
        if self.a != 1.0:
            parts.append(f"a={self.a!r}")
        parts.append("d=" + (str(self.deriv) if self.family == "linear" else f"{self.deriv[0]},{self.deriv[1]}"))
        if self.scale != 1:
            parts.append(f"scale={self.scale}")
        return " ".join(parts)

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "nu": self.nu,
            "alternating": self.alternating,
            "parity": self.parity,
            "a": self.a,
            "deriv": list(self.derivs) if self.family == "bilinear" else self.deriv,
            "scale": str(self.scale),
        }

    # term generation ---------------------------------------------------
    def coefficients(self, m) -> np.ndarray:
        m = np.asarray(m, dtype=float)
        c = float(self.scale) * m ** self.nu
        if self.alternating:
            c = np.where(np.asarray(m) % 2 == 1, -c, c)
        if self.a != 1.0:
            c = c * np.exp(m * math.log(self.a))
        return c

    def terms(self, m, x: float) -> np.ndarray:
        """Float terms for Bessel orders ``m`` at argument ``x``."""
        m = np.asarray(m)
        if self.family == "linear":
            v = jn_scaled(m, x, self.deriv)
        else:
            d1, d2 = self.deriv
            f1 = jn_scaled(m, x, d1)
            v = f1 * f1 if d1 == d2 else f1 * jn_scaled(m, x, d2)
        return self.coefficients(m) * v

    def term_mp(self, m: int, x):
        """One term in extended precision at the current mpmath precision."""
        x = mpmath.mpf(x)
        c = mpmath.mpf(self.scale.numerator) / self.scale.denominator * mpmath.mpf(m) ** self.nu
        if self.alternating and m % 2:
            c = -c
        if self.a != 1.0:
            c *= mpmath.mpf(self.a) ** m
        if self.family == "linear":
            return c * _jmp(m, x, self.deriv)
        d1, d2 = self.deriv
        f1 = _jmp(m, x, d1)
        return c * f1 * (f1 if d1 == d2 else _jmp(m, x, d2))

    def with_(self, **kw) -> "SeriesSpec":
        return replace(self, **kw)


def _jmp(m: int, x, d: int):
    kw = {"maxterms": 10**7, "maxprec": 200_000}
    y = m * x
    if d == 0:
        return mpmath.besselj(m, y, **kw)
    jm1 = mpmath.besselj(m - 1, y, **kw)
    jp1 = mpmath.besselj(m + 1, y, **kw)
    if d == 1:
        return (jm1 - jp1) / 2
    if y == 0:
        return mpmath.mpf(0.25) if m == 2 else mpmath.mpf(0)
    j = mpmath.besselj(m, y, **kw)
    return -(jm1 - jp1) / (2 * y) + (1 / (x * x) - 1) * j


@dataclass(frozen=True)
class EvalResult:
    """Value of a summation or quadrature with its error bookkeeping.

    ``abs_error_estimate`` combines the truncation bound ``tail_bound``
    (geometric extrapolation of the last terms) with an estimate of the
    rounding error carried by the terms themselves.
    """

    value: float
    abs_error_estimate: float
    terms_used: int
    method: str
    tail_bound: float = 0.0


# ---------------------------------------------------------------------------
# decay-rate bookkeeping


def decay_rate(x: float) -> float:
    """Exponential decay rate per unit order of ``J_m(m x)``, ``x < 1``.

    ``J_m(m x) ~ exp(-m g(x))`` with ``g = arcsech(x) - sqrt(1 - x^2)``,
    which behaves like ``(1 - x^2)^{3/2}/3`` as ``x -> 1``.
    """
    if x <= 0.0:
        return math.inf
    if x >= 1.0:
        return 0.0
    w = 1.0 - x * x
    s = math.sqrt(w)
    if w < 1e-3:
        # series of arcsech(x) - s in s, avoids cancellation
        return s**3 / 3 + s**5 / 5 + s**7 / 7 + s**9 / 9
    return math.log((1.0 + s) / x) - s


def minimum_order(x: float, a: float = 1.0) -> int:
    """``m_min`` below which the tail test is not trusted."""
    w = 1.0 - x * x
    bound = math.inf if w <= 0.0 else 10.0 / w**1.5
    if a < 1.0:
        bound = min(bound, 10.0 / -math.log(a))
    return max(1, math.ceil(bound))


def _term_rate(spec: SeriesSpec, x: float) -> float:
    g = decay_rate(x)
    if spec.family == "bilinear":
        g *= 2.0
    if spec.a < 1.0:
        g += -math.log(spec.a)
    if spec.parity != "all":
        g *= 2.0  # rate per term index, orders step by two
    return g


def estimate_terms(spec: SeriesSpec, x: float, tol: float) -> float:
    """Rough count of terms needed for relative accuracy ``tol``."""
    g = _term_rate(spec, x)
    if g == math.inf:
        return 1.0
    if g <= 0.0:
        return math.inf
    p = spec.nu + sum(spec.derivs) + 2
    n = 10.0
    for _ in range(20):
        n = (math.log(1.0 / tol) + max(p, 1) * math.log(max(n, 2.0))) / g
    return n


# ---------------------------------------------------------------------------
# summation driver


@dataclass
class _Accumulator:
    terms: list
    orders: list
    total: float = 0.0


def _drive(term_fn, spec: SeriesSpec, x: float, tol: float, m_min: int, max_terms: int, err_fn):
    """Sum ``term_fn`` over term indices until the tail test fires.

    Returns (float terms, orders, index of last term, tail bound).
    """
    chunk = 2048
    k0 = 1
    pieces, order_pieces = [], []
    s_prev = 0.0
    tail_t = np.empty(0)
    tail_small = np.empty(0, dtype=bool)
    while True:
        k = np.arange(k0, k0 + chunk)
        m = spec.orders(k)
        t = term_fn(m)
        if not np.all(np.isfinite(t)):
            raise ConvergenceError("non-finite term encountered")
        partial = s_prev + np.cumsum(t)
        thr = np.maximum(tol * np.abs(partial), ABS_FLOOR)
        small = np.abs(t) <= thr
        ext_t = np.concatenate([tail_t, t])
        ext_small = np.concatenate([tail_small, small])
        lead = len(tail_t)
        if len(ext_t) >= TAIL_RUN:
            run = sliding_window_view(ext_small, TAIL_RUN).all(axis=1)
            a_new = np.abs(ext_t[TAIL_RUN - 1 :])
            a_old = np.abs(ext_t[: len(ext_t) - TAIL_RUN + 1])
            with np.errstate(divide="ignore", invalid="ignore"):
                r = np.where(a_new == 0.0, 0.0, (a_new / a_old) ** (1.0 / (TAIL_RUN - 1)))
                rem = np.where(r < 1.0, a_new * r / (1.0 - r), np.inf)
            # align to the new chunk indices
            idx = np.arange(len(run)) + (TAIL_RUN - 1 - lead)
            valid = (idx >= 0) & (idx < len(t))
            run, r, rem, idx = run[valid], r[valid], rem[valid], idx[valid]
            ok = run & (m[idx] >= m_min) & (r < 1.0) & (rem <= thr[idx])
            hit = np.flatnonzero(ok)
            if hit.size:
                j = idx[hit[0]]
                pieces.append(t[: j + 1])
                order_pieces.append(m[: j + 1])
                return np.concatenate(pieces), np.concatenate(order_pieces), float(rem[hit[0]])
        pieces.append(t)
        order_pieces.append(m)
        s_prev = float(partial[-1])
        tail_t = ext_t[-(TAIL_RUN - 1) :]
        tail_small = ext_small[-(TAIL_RUN - 1) :]
        k0 += chunk
        if k0 > max_terms:
            raise ConvergenceError(f"no convergence within {max_terms} terms at x={x!r}")
        chunk = min(chunk * 2, 1 << 18)


def _rounding(t: np.ndarray, m: np.ndarray, x: float, spec: SeriesSpec) -> np.ndarray:
    """Per-term rounding error estimate of the float terms."""
    s = math.sqrt(max(1.0 - x * x, 0.0))
    # relative sensitivity to the rounding of the argument m*x
    cond = np.asarray(m, dtype=float) * s / max(x, 1e-300)
    if spec.family == "bilinear":
        cond = 2.0 * cond
    return np.abs(t) * (EPS_TERM + 1.2e-16 * cond)


def _validate_x(x: float, spec: SeriesSpec, x_max: float) -> float:
    x = float(x)
    if not math.isfinite(x) or x < 0.0:
        raise DomainError(f"x must be a finite non-negative number, got {x!r}")
    if x_max >= 1.0:
        raise DomainError("x_max must be below 1")
    limit = 1.0 if spec.a < 1.0 else x_max
    if x > limit:
        raise DomainError(
            f"x={x!r} exceeds the direct-summation limit {limit!r}; use the asymptotic evaluators "
            "(kapteyn.transcendental.asym_eval) or the regularized integrals near x = 1"
        )
    return x


def sum_series(
    spec: SeriesSpec,
    x: float,
    tol: float = 1e-12,
    *,
    x_max: float = X_MAX,
    precision: str = "auto",
    max_terms: int = MAX_TERMS,
) -> EvalResult:
    """Sum a Kapteyn series by brute force.

    Parameters
    ----------
    spec : SeriesSpec
    x : float
        Argument, ``0 <= x <= x_max`` (``x <= 1`` when ``spec.a < 1``).
    tol : float
        Requested relative accuracy, at least 1e-14.  An absolute floor of
        1e-15 applies to sums that vanish.
    x_max : float
        Upper limit on ``x``; the default 0.999 keeps term counts near 1e6.
    precision : {"auto", "float", "mp"}
        ``auto`` recomputes the largest terms with mpmath when cancellation
        between terms would otherwise exceed ``tol``.
    max_terms : int
        Budget; specs needing more terms are refused up front.

    Returns
    -------
    EvalResult
    """
    if not tol >= 1e-14:
        raise DomainError(f"tol must be at least 1e-14, got {tol!r}")
    if precision not in ("auto", "float", "mp"):
        raise DomainError(f"unknown precision mode {precision!r}")
    x = _validate_x(x, spec, x_max)
    need = estimate_terms(spec, x, tol)
    if need > max_terms:
        raise DomainError(
            f"{spec.describe()} needs about {need:.3g} terms at x={x!r} (budget {max_terms}); "
            "use the asymptotic evaluators"
        )
    m_min = minimum_order(x, spec.a)
    t, m, tail = _drive(lambda mm: spec.terms(mm, x), spec, x, tol, m_min, max_terms, None)
    return _finish(spec, x, t, m, tail, tol, precision, lambda mm: spec.term_mp(int(mm), x), "direct")


def _finish(spec, x, t, m, tail, tol, precision, mp_term, label) -> EvalResult:
    value = math.fsum(t)
    err_terms = _rounding(t, m, x, spec)
    round_err = float(np.sum(err_terms))
    target = max(tol * abs(value), ABS_FLOOR)
    use_mp = precision == "mp" or (precision == "auto" and round_err > 0.5 * target)
    if not use_mp:
        return EvalResult(value, tail + round_err, len(t), f"{label}/float", tail)
    # recompute the terms that dominate the rounding error
    order = np.argsort(-err_terms)
    if precision == "mp":
        chosen = order
    else:
        cum = np.cumsum(err_terms[order])
        rest = round_err - cum
        count = int(np.searchsorted(-rest, -0.25 * target)) + 1
        chosen = order[: min(count, len(order))]
    if len(chosen) > MP_TERM_LIMIT and precision != "mp":
        return EvalResult(value, tail + round_err, len(t), f"{label}/float", tail)
    big = float(np.max(np.abs(t))) if len(t) else 0.0
    digits = 20 + max(0, math.ceil(math.log10(max(big, 1e-300) / max(target, 1e-300))))
    t = t.copy()
    with mpmath.workdps(digits):
        exact = [mp_term(mm) for mm in m[chosen]]
        t_mp = {int(i): v for i, v in zip(chosen, exact)}
        rest_idx = np.setdiff1d(np.arange(len(t)), chosen)
        total = mpmath.fsum(list(t_mp.values()) + [mpmath.mpf(float(v)) for v in t[rest_idx]])
    value = float(total)
    round_err = float(np.sum(err_terms[rest_idx])) + abs(value) * 1e-16
    return EvalResult(value, tail + round_err, len(t), f"{label}/mp", tail)


# ---------------------------------------------------------------------------
# linear -> bilinear transform


def bilinear_from_linear(spec: SeriesSpec, x: float, tol: float = 1e-12) -> EvalResult:
    """Bilinear sum ``sum_n n**nu J_n(n x)**2`` from a linear even-order sum.

    Uses ``J_n(z)**2 = (2/pi) int_0^{pi/2} J_2n(2 z cos phi) dphi``.
    ``spec`` must describe the linear series ``sum_n (2n)**nu J_2n(2n y)``
    (family linear, parity even, d = 0); the result is scaled by
    ``2**-nu`` so that it equals the bilinear series with the same weight.
    """
    if spec.family != "linear" or spec.parity != "even" or spec.deriv != 0:
        raise DomainError("bilinear_from_linear needs a linear, even-order, underived spec")
    x = _validate_x(x, spec, X_MAX)
    if x == 0.0:
        return EvalResult(0.0, 0.0, 1, "transform")
    inner_tol = max(tol * 0.1, 1e-14)
    used = [0]
    errs = []

    def f(phi):
        r = sum_series(spec, x * math.cos(phi), inner_tol, precision="float")
        used[0] += r.terms_used
        errs.append(r.abs_error_estimate)
        return r.value

    val, err, info = _quad(f, 0.0, 0.5 * math.pi, tol)
    factor = 2.0 / math.pi * 2.0 ** (-spec.nu)
    value = factor * val
    e = factor * (err + (max(errs) if errs else 0.0) * 0.5 * math.pi)
    return EvalResult(value, e, max(used[0], 1), "transform")


def _quad(f, a, b, tol, limit=200, points=None):
    val, err, info = integrate.quad(
        f, a, b, epsabs=ABS_FLOOR, epsrel=max(tol, 1e-14), limit=limit, points=points, full_output=1
    )[:3]
    return val, err, info


# ---------------------------------------------------------------------------
# term-wise integration from 0 to beta

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(10)
_GL2_NODES, _GL2_WEIGHTS = np.polynomial.legendre.leggauss(20)
# above this order the Neumann-series identity replaces quadrature
NEUMANN_ORDER = 200


def _panels(m: np.ndarray, beta: float, levels: int = 0) -> np.ndarray:
    """Graded panel edges on [0, beta] per order, shape (len(m), P+1).

    Panels are geometric in the distance from beta, starting at the local
    decay length of ``J_m(m x)`` below beta.
    """
    w = max(1.0 - beta * beta, 0.0)
    mf = np.asarray(m, dtype=float)
    scale = np.maximum(np.sqrt(w), mf ** (-1.0 / 3.0))
    length = np.minimum(beta / (mf * scale), beta)
    n_geo = int(np.ceil(np.log2(beta / float(np.min(length))))) + 1 if beta > 0 else 1
    j = np.arange(n_geo + 1)
    dist = np.where(j == 0, 0.0, length[:, None] * 2.0 ** (j[None, :] - 1))
    dist = np.minimum(dist, beta)
    edges = np.sort(beta - dist, axis=1)
    if levels:
        for _ in range(levels):
            mid = 0.5 * (edges[:, 1:] + edges[:, :-1])
            both = np.empty((edges.shape[0], edges.shape[1] * 2 - 1))
            both[:, 0::2] = edges
            both[:, 1::2] = mid
            edges = both
    return edges


def _gl_on_panels(fn, m, edges, nodes, weights):
    lo, hi = edges[:, :-1], edges[:, 1:]
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    xs = mid[:, :, None] + half[:, :, None] * nodes[None, None, :]
    vals = fn(np.asarray(m)[:, None, None], xs)
    return np.sum(vals * weights[None, None, :] * half[:, :, None], axis=(1, 2))


def _jq(mm, xs):
    return special.jv(mm, mm * xs)


def integrate_terms_quadrature(m, beta: float, tol: float = 1e-13, max_levels: int = 5) -> tuple:
    """``int_0^beta J_m(m x) dx`` for an array of orders by panel quadrature.

    Each order gets graded panels; a 10-point and a 20-point Gauss-Legendre
    rule are compared and panels are bisected until they agree to ``tol``.
    Returns (values, error estimates).
    """
    m = np.atleast_1d(np.asarray(m, dtype=float))
    out = np.empty(len(m))
    err = np.empty(len(m))
    todo = np.arange(len(m))
    for level in range(max_levels + 1):
        edges = _panels(m[todo], beta, level)
        lo = _gl_on_panels(_jq, m[todo], edges, _GL_NODES, _GL_WEIGHTS)
        hi = _gl_on_panels(_jq, m[todo], edges, _GL2_NODES, _GL2_WEIGHTS)
        e = np.abs(hi - lo)
        out[todo] = hi
        err[todo] = e
        bad = e > np.maximum(tol * np.abs(hi), 1e-300)
        todo = todo[bad]
        if todo.size == 0:
            break
    if todo.size:
        raise QuadratureError(
            f"term-wise quadrature did not reach tol={tol!r} for {todo.size} orders",
            estimate=float(np.sum(out)),
            error=float(np.sum(err)),
        )
    return out, err


def integrate_terms_neumann(m, beta: float) -> np.ndarray:
    """``int_0^beta J_m(m x) dx`` via ``int_0^z J_m = 2 sum_k J_{m+2k+1}(z)``.

    The tail sum is obtained by backward recurrence from a high starting
    order, normalized with one direct evaluation of ``J_{m+1}``.
    """
    m = np.atleast_1d(np.asarray(m, dtype=float))
    if beta == 0.0:
        return np.zeros(len(m))
    z = m * beta
    span = math.ceil(40.0 / math.acosh(1.0 / beta)) if beta < 1.0 else 4000
    top = 2 * span + 2
    # unnormalized backward recurrence over orders m+1 .. m+1+top
    hi = np.zeros(len(m))
    cur = np.full(len(m), 1e-200)
    acc = np.zeros(len(m))
    for j in range(top, -1, -1):
        nu = m + 1.0 + j
        if j % 2 == 0:
            acc += cur
        # J_{nu-1} = (2 nu / z) J_nu - J_{nu+1}
        prev = (2.0 * nu / z) * cur - hi
        hi, cur = cur, prev
        if j % 16 == 0:
            big = np.abs(cur) > 1e200
            if np.any(big):
                hi = np.where(big, hi * 1e-200, hi)
                cur = np.where(big, cur * 1e-200, cur)
                acc = np.where(big, acc * 1e-200, acc)
    # after the loop ``hi`` holds the unnormalized J_{m+1}
    norm = special.jv(m + 1.0, z) / hi
    return 2.0 * acc * norm / m


def integrate_term(m: int, beta: float, d: int = 0, method: str = "auto", tol: float = 1e-13) -> float:
    """``int_0^beta D^d J_m(m x) dx`` for one order ``m >= 1``."""
    if d == 1:
        return float(special.jv(m, m * beta)) / m
    if d == 2:
        jp = 0.5 * (special.jv(m - 1, m * beta) - special.jv(m + 1, m * beta))
        return float(jp - (0.5 if m == 1 else 0.0)) / m
    if method == "neumann" or (method == "auto" and m > NEUMANN_ORDER):
        return float(integrate_terms_neumann([m], beta)[0])
    return float(integrate_terms_quadrature([m], beta, tol)[0][0])


def sum_integral(
    spec: SeriesSpec,
    beta: float,
    tol: float = 1e-12,
    *,
    method: str = "auto",
    x_max: float = X_MAX,
    max_terms: int = MAX_TERMS,
) -> EvalResult:
    """``int_0^beta dx`` of a linear Kapteyn series, integrated term by term.

    ``method`` selects how each ``int_0^beta J_m(m x) dx`` is computed:
    ``quadrature`` (graded Gauss-Legendre panels), ``neumann`` (Bessel
    tail-sum identity) or ``auto`` (quadrature up to order 200, then the
    identity).  Derivative specs are integrated exactly.
    """
    if spec.family != "linear":
        raise DomainError("sum_integral supports linear series only")
    if method not in ("auto", "quadrature", "neumann"):
        raise DomainError(f"unknown integration method {method!r}")
    if not tol >= 1e-14:
        raise DomainError(f"tol must be at least 1e-14, got {tol!r}")
    beta = _validate_x(beta, spec, x_max)
    if beta == 0.0:
        return EvalResult(0.0, 0.0, 1, f"integral/{method}")
    if estimate_terms(spec, beta, tol) > max_terms:
        raise DomainError(f"{spec.describe()} needs too many terms at beta={beta!r}")
    quad_errs = []

    def raw(mm):
        mm = np.asarray(mm)
        d = spec.deriv
        mf = mm.astype(float)
        if d == 1:
            v = special.jv(mf, mf * beta) / mf
        elif d == 2:
            jp = 0.5 * (special.jv(mf - 1, mf * beta) - special.jv(mf + 1, mf * beta))
            v = (jp - np.where(mm == 1, 0.5, 0.0)) / mf
        else:
            v = np.empty(len(mm))
            if method == "neumann":
                low = np.zeros(len(mm), dtype=bool)
            elif method == "quadrature":
                low = np.ones(len(mm), dtype=bool)
            else:
                low = mm <= NEUMANN_ORDER
            if np.any(low):
                q, e = integrate_terms_quadrature(mf[low], beta, max(tol * 0.1, 1e-14))
                v[low] = q
                quad_errs.append(float(np.sum(np.abs(spec.coefficients(mm[low]) * e))))
            if np.any(~low):
                v[~low] = integrate_terms_neumann(mf[~low], beta)
        return spec.coefficients(mm) * v

    m_min = minimum_order(beta, spec.a)
    t, m, tail = _drive(raw, spec, beta, tol, m_min, max_terms, None)
    value = math.fsum(t)
    round_err = float(np.sum(_rounding(t, m, beta, spec))) + sum(quad_errs)
    return EvalResult(value, tail + round_err, len(t), f"integral/{method}", tail)
