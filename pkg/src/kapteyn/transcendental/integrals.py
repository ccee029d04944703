"""Integral representations of linear and bilinear transcendental sums.

Every representation is an integral over ``theta in [0, pi]`` of a
function of the Kepler-type phases ``psi = theta - x sin(theta)`` and
``phi = psi / 2``.  Logarithmic endpoint singularities are absorbed by
splitting off ``log(theta)`` analytically; the remaining integrands are
bounded and evaluated through the cancellation-free helpers in
:mod:`.integrands`.
"""
from __future__ import annotations

import math
import warnings

from scipy.integrate import IntegrationWarning, quad

from ..errors import DomainError, QuadratureError
from .integrands import (
    HALF_PI,
    PI,
    IntegrandParams,
    cot_minus_inv,
    csc_minus_inv,
    log_sinc,
    p_over_sin,
    q_remainder,
    q_remainder2,
    sinc,
)

DEFAULT_TOL = 1e-10
MIN_TOL = 1e-12
QUAD_LIMIT = 10_000
X_PLAIN_MAX = 0.999
X_REGULARIZED_MAX = 0.99999
DECOMPOSE_ABOVE = 0.99
LOG_PI_TERM = PI * math.log(PI) - PI  # int_0^pi log(theta) dtheta

LOG_VARIANTS = ("all_m", "even", "param_a", "bilinear")
COT_VARIANTS = ("all_m", "even", "bilinear")
CSC2_VARIANTS = ("all_m", "even")
AUX_IDS = ("I1", "I2", "I3", "I3_4")


def _check_tol(tol: float) -> float:
    tol = float(tol)
    if not tol >= MIN_TOL:
        raise DomainError(f"tol must be at least {MIN_TOL:g}, got {tol!r}")
    return tol


def _check_x(x: float, hi: float, *, allow_zero: bool = True) -> float:
    x = float(x)
    lo_ok = x >= 0.0 if allow_zero else x > 0.0
    if not (lo_ok and x <= hi):
        lo = "[0" if allow_zero else "(0"
        raise DomainError(f"x must lie in {lo}, {hi}], got {x!r}")
    return x


def _quad(f, tol: float, what: str, a: float = 0.0, b: float = PI, points=None) -> float:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        val, err = quad(f, a, b, epsabs=0.1 * tol, epsrel=0.1 * tol, limit=QUAD_LIMIT, points=points)
    if not math.isfinite(val) or err > tol * max(1.0, abs(val)):
        raise QuadratureError(f"{what}: quadrature did not reach tol={tol:g}", val, err)
    return val


def _breaks(p: IntegrandParams):
    """Interior breakpoints at the width of the near-singular region."""
    if p.x == 0.0:
        return None
    w = math.sqrt(p.c)
    pts = [v for v in (w, 4.0 * w) if 1e-8 < v < PI - 1e-8]
    return pts or None


# pointwise pieces --------------------------------------------------------

def _ratio_theta_phi(p: IntegrandParams, t: float) -> float:
    """``sin(theta) / sin(phi)``; ``phi <= pi/2`` on the whole range."""
    phi = p.phi(t)
    return 2.0 * sinc(t) / (p.one_minus_xs(t) * sinc(phi))


def _ratio_theta_psi(p: IntegrandParams, t: float) -> float:
    """``sin(theta) / sin(psi)``, stable at both endpoints."""
    psi = p.psi(t)
    if psi <= HALF_PI:
        return sinc(t) / (p.one_minus_xs(t) * sinc(psi))
    u = PI - t
    su = sinc(u)
    return su / (1.0 + p.x * su) * p_over_sin(p.psi_complement(t))


def _cos_psi(p: IntegrandParams, t: float) -> float:
    psi = p.psi(t)
    return math.cos(psi) if psi <= HALF_PI else -math.cos(p.psi_complement(t))


def _log_2sin_phi_reg(p: IntegrandParams, t: float) -> float:
    """``log(2 sin(phi)) - log(theta)``."""
    return math.log(p.one_minus_xs(t)) + log_sinc(p.phi(t))


def _log_2sin_psi_reg(p: IntegrandParams, t: float) -> float:
    """``log(2 sin(psi)) - log(theta) - log(pi - theta)``."""
    u = PI - t
    psi_l = p.psi(t)
    psi_r = p.psi_complement(t)
    if psi_l <= HALF_PI:
        log_g = log_sinc(psi_l) - math.log(psi_r)
    else:
        log_g = log_sinc(psi_r) - math.log(psi_l)
    return math.log(2.0) + log_g + math.log(p.one_minus_xs(t)) + math.log(1.0 + p.x * sinc(u))


# log-type integrals ------------------------------------------------------

def _log_all(p: IntegrandParams, tol: float) -> float:
    val = _quad(lambda t: _log_2sin_phi_reg(p, t), tol * PI, "log integral (all_m)", points=_breaks(p))
    return -(val + LOG_PI_TERM) / PI


def _log_even(p: IntegrandParams, tol: float) -> float:
    val = _quad(lambda t: _log_2sin_psi_reg(p, t), tol * 2 * PI, "log integral (even)", points=_breaks(p))
    return -(val + 2.0 * LOG_PI_TERM) / (2.0 * PI)


def _log_param_a(p: IntegrandParams, tol: float) -> float:
    if p.a == 1.0:
        return _log_all(p, tol)
    a = p.a

    def f(t):
        s = math.sin(0.5 * p.psi(t))
        return math.log((1.0 - a) ** 2 + 4.0 * a * s * s)

    return -_quad(f, tol * 2 * PI, "log integral (param_a)", points=_breaks(p)) / (2.0 * PI)


def _bilinear_outer(inner, x: float, tol: float, what: str) -> float:
    """``(4/pi) int_0^{pi/2} inner(x cos(phi), phi) dphi`` with tensorized tolerance."""
    inner_tol = max(0.1 * tol, MIN_TOL)

    def f(phi):
        return inner(x * math.cos(phi), math.cos(phi), inner_tol)

    return 4.0 / PI * _quad(f, tol * HALF_PI, what, 0.0, HALF_PI)


def log_integral(variant: str, params: IntegrandParams, tol: float = DEFAULT_TOL) -> float:
    """Logarithmic integral representation of a ``1/m``-weighted sum.

    Parameters
    ----------
    variant : {"all_m", "even", "param_a", "bilinear"}
        ``all_m``: ``sum J_m(m x)/m``; ``even``: ``sum J_2n(2n x)/(2n)``;
        ``param_a``: ``sum a**m J_m(m x)/m``; ``bilinear``:
        ``sum J_n(n x)**2 / n`` as a double integral.
    params : IntegrandParams
        ``x`` in ``[0, 0.999]``; ``a`` is used by ``param_a`` only.
    tol : float
        Absolute tolerance relative to unit scale, at least 1e-12.

    Raises
    ------
    DomainError
        ``x`` out of range or unknown variant.
    QuadratureError
        The subdivision budget was exhausted; carries the best estimate.
    """
    tol = _check_tol(tol)
    _check_x(params.x, X_PLAIN_MAX)
    if params.x == 0.0:
        if variant not in LOG_VARIANTS:
            raise DomainError(f"unknown log_integral variant {variant!r}")
        return 0.0
    if variant == "all_m":
        return _log_all(params, tol)
    if variant == "even":
        return _log_even(params, tol)
    if variant == "param_a":
        return _log_param_a(params, tol)
    if variant == "bilinear":
        inner = lambda y, _c, t: _log_even(IntegrandParams(y), t) if y > 0 else 0.0  # noqa: E731
        return _bilinear_outer(inner, params.x, tol, "log integral (bilinear)")
    raise DomainError(f"unknown log_integral variant {variant!r}; expected one of {LOG_VARIANTS}")


# cot-type integrals ------------------------------------------------------

def _cot_all(p: IntegrandParams, tol: float) -> float:
    f = lambda t: math.cos(p.phi(t)) * _ratio_theta_phi(p, t)  # noqa: E731
    return _quad(f, tol * 2 * PI, "cot integral (all_m)", points=_breaks(p)) / (2.0 * PI)


def _cot_even(p: IntegrandParams, tol: float) -> float:
    f = lambda t: _cos_psi(p, t) * _ratio_theta_psi(p, t)  # noqa: E731
    return _quad(f, tol * 2 * PI, "cot integral (even)", points=_breaks(p)) / (2.0 * PI)


def cot_integral(variant: str, params: IntegrandParams, tol: float = DEFAULT_TOL) -> float:
    """Cotangent integral representation of first-derivative sums.

    ``all_m``: ``sum J'_m(m x)``; ``even``: ``sum J'_2n(2n x)``;
    ``bilinear``: ``sum 2 J_n(n x) J'_n(n x)``.  The integrands have
    finite limits at ``theta = 0`` and are evaluated through
    ``sin(theta)/sin(phase)`` ratios that stay exact there.
    """
    tol = _check_tol(tol)
    _check_x(params.x, X_PLAIN_MAX)
    if variant == "all_m":
        return _cot_all(params, tol)
    if variant == "even":
        return _cot_even(params, tol)
    if variant == "bilinear":
        if params.x == 0.0:
            return 0.0
        inner = lambda y, c, t: c * _cot_even(IntegrandParams(y), t)  # noqa: E731
        return _bilinear_outer(inner, params.x, tol, "cot integral (bilinear)")
    raise DomainError(f"unknown cot_integral variant {variant!r}; expected one of {COT_VARIANTS}")


# regularized pieces ------------------------------------------------------

def _aux_closed(id: str, c: float) -> float:
    r = math.sqrt(c)
    at = math.atan(PI / r)
    e = PI * PI + c
    if id == "I1":
        return at / r
    if id == "I2":
        return at / (2.0 * c * r) + PI / (2.0 * c * e)
    if id == "I3":
        return 3.0 * at / (8.0 * c * c * r) + 3.0 * PI / (8.0 * c * c * e) + PI / (4.0 * c * e * e)
    if id == "I3_4":
        return 3.0 * at / (8.0 * r) - 5.0 * PI / (8.0 * e) + c * PI / (4.0 * e * e)
    raise DomainError(f"unknown auxiliary integral {id!r}; expected one of {AUX_IDS}")


def _aux_integrand(id: str, c: float):
    if id == "I1":
        return lambda t: 1.0 / (c + t * t)
    if id == "I2":
        return lambda t: 1.0 / (c + t * t) ** 2
    if id == "I3":
        return lambda t: 1.0 / (c + t * t) ** 3
    if id == "I3_4":
        return lambda t: t**4 / (c + t * t) ** 3
    raise DomainError(f"unknown auxiliary integral {id!r}; expected one of {AUX_IDS}")


def aux_integral(id: str, c: float, method: str = "closed", tol: float = 1e-13) -> float:
    """Auxiliary integrals ``int_0^pi theta**k (c + theta**2)**-n dtheta``.

    Parameters
    ----------
    id : {"I1", "I2", "I3", "I3_4"}
        ``(k, n)`` = (0, 1), (0, 2), (0, 3) and (4, 3).
    c : float
        Positive shift.
    method : {"closed", "quadrature", "printed"}
        ``printed`` reproduces the published ``I3_4`` expression whose
        last denominator lacks the square; it exists for auditing only.
    """
    c = float(c)
    if not c > 0.0 or not math.isfinite(c):
        raise DomainError(f"c must be positive and finite, got {c!r}")
    if method == "closed":
        return _aux_closed(id, c)
    if method == "quadrature":
        f = _aux_integrand(id, c)
        r = math.sqrt(c)
        pts = [r] if r < PI else None
        scale = _aux_closed(id, c)
        return _quad(lambda t: f(t) / scale, tol, f"aux integral {id}", points=pts) * scale
    if method == "printed":
        if id != "I3_4":
            return _aux_closed(id, c)
        r = math.sqrt(c)
        e = PI * PI + c
        return 3.0 * math.atan(PI / r) / (8.0 * r) - 5.0 * PI / (8.0 * e) + c * PI / (4.0 * e)
    raise DomainError(f"unknown method {method!r}; expected closed, quadrature or printed")


def _reg_parts(p: IntegrandParams, t: float):
    """``(A, R, R2)`` of the rational subtraction, see :func:`csc2_integral`."""
    x, c = p.x, p.c
    t2 = t * t
    D = c + t2
    q = q_remainder(t)
    Dq = D - q  # = 6 (1 - x sinc) / x
    A = 6.0 / (x * D)
    R = 6.0 / x * q / (D * Dq)
    R2 = 6.0 / x * (q_remainder2(t) * D + q * t2 * t2 / 20.0) / (D * D * Dq)
    return A, R, R2


def _csc2_plain(p: IntegrandParams, even: bool, tol: float) -> float:
    if even:
        f = lambda t: _ratio_theta_psi(p, t) ** 2  # noqa: E731
        w = 1.0 / (2.0 * PI)
    else:
        f = lambda t: _ratio_theta_phi(p, t) ** 2  # noqa: E731
        w = 1.0 / (4.0 * PI)
    return w * _quad(f, tol / w, "csc^2 integral", points=_breaks(p))


def _h_all(p: IntegrandParams, t: float) -> float:
    """``sin(theta) (csc(phi) - 1/phi)``."""
    return math.sin(t) * csc_minus_inv(p.phi(t))


def _h_even(p: IntegrandParams, t: float) -> float:
    """``sin(theta) (csc(psi) - 1/psi)``."""
    psi = p.psi(t)
    if psi <= HALF_PI:
        return math.sin(t) * csc_minus_inv(psi)
    return _ratio_theta_psi(p, t) - math.sin(t) / psi


def _csc2_decomposed(p: IntegrandParams, even: bool, tol: float) -> float:
    x, c = p.x, p.c

    def f(t):
        A, R, R2 = _reg_parts(p, t)
        s_over = (A + R - 1.0) / x  # sin(theta)/psi
        h = _h_even(p, t) if even else _h_all(p, t)
        if not even:
            s_over *= 2.0  # sin(theta)/phi
        k = 1.0 if even else 4.0
        return h * h + 2.0 * s_over * h + k / (x * x) * (-2.0 * R + R * R + 2.0 * A * R2)

    w = 1.0 / (2.0 * PI) if even else 1.0 / (4.0 * PI)
    numeric = w * _quad(f, tol / w, "regularized csc^2 integral", points=_breaks(p))
    analytic = (
        PI
        - 12.0 / x * _aux_closed("I1", c)
        + 36.0 / (x * x) * _aux_closed("I2", c)
        + 18.0 / (5.0 * x * x) * _aux_closed("I3_4", c)
    )
    return numeric + analytic / ((2.0 if even else 1.0) * PI * x * x)


def csc2_integral(variant: str, x: float, tol: float = DEFAULT_TOL, method: str = "auto") -> float:
    """Squared-cosecant representation of second-derivative sums.

    ``all_m``: ``sum m J''_m(m x)``; ``even``: ``sum 2n J''_2n(2n x)``.

    Parameters
    ----------
    variant : {"all_m", "even"}
    x : float
        In ``[0, 0.99999]``; the plain integrand is limited to 0.999.
    tol : float
    method : {"auto", "plain", "decomposed"}
        ``decomposed`` subtracts the rational model ``6/(x(c + theta**2))``
        of ``theta/psi`` and adds its integrals in closed form, which
        keeps the quadrature bounded as ``x -> 1``.  ``auto`` switches
        to it above ``x = 0.99``.
    """
    tol = _check_tol(tol)
    if variant not in CSC2_VARIANTS:
        raise DomainError(f"unknown csc2_integral variant {variant!r}; expected one of {CSC2_VARIANTS}")
    if method not in ("auto", "plain", "decomposed"):
        raise DomainError(f"unknown method {method!r}")
    even = variant == "even"
    if method == "auto":
        method = "decomposed" if x > DECOMPOSE_ABOVE else "plain"
    if method == "plain":
        p = IntegrandParams(_check_x(x, X_PLAIN_MAX))
        return _csc2_plain(p, even, tol)
    p = IntegrandParams(_check_x(x, X_REGULARIZED_MAX, allow_zero=False))
    return _csc2_decomposed(p, even, tol)


def regularized_jprime_sum(variant: str, x: float, tol: float = DEFAULT_TOL) -> float:
    """``sum J'_m(m x)`` (``all_m``) or ``sum J'_2n(2n x)`` (``even``).

    Splits the cotangent integrand into ``cot(phase) - 1/phase``, the
    bounded remainder of ``theta/psi`` against ``6/(x(c + theta**2))``
    and the closed-form arctan term, so it stays accurate up to
    ``x = 0.99999``.
    """
    tol = _check_tol(tol)
    if variant not in ("all_m", "even"):
        raise DomainError(f"unknown variant {variant!r}; expected all_m or even")
    x = _check_x(x, X_REGULARIZED_MAX, allow_zero=False)
    p = IntegrandParams(x)
    even = variant == "even"

    def f(t):
        _, R, _ = _reg_parts(p, t)
        if even:
            psi = p.psi(t)
            if psi <= HALF_PI:
                g = math.sin(t) * cot_minus_inv(psi)
            else:
                g = _cos_psi(p, t) * _ratio_theta_psi(p, t) - math.sin(t) / psi
            return g + R / x
        return math.sin(t) * cot_minus_inv(p.phi(t)) + 2.0 * R / x

    numeric = _quad(f, tol * 2 * PI, "regularized J' sum", points=_breaks(p)) / (2.0 * PI)
    k = 3.0 if even else 6.0
    boundary = -1.0 / (2.0 * x) if even else -1.0 / x
    return boundary + numeric + k / (PI * x * x) * _aux_closed("I1", p.c)
