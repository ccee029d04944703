"""Radiation of a charge on a circular orbit, built on Kapteyn sums.

Units are natural (``hbar = c = 1``) and every public result is a
dimensionless normalized quantity:

* harmonic intensity ``I_hat_n = I_n v / (2 e^2 omega_H^2)``;
* total probability ``P_hat = P hbar v / (2 e^2 omega_H)``, so that the
  physical rate is ``P = 2 alpha omega_H P_hat / beta``;
* quantum rate ``W / (alpha m)`` per unit proper time.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .closed import get_entry, parity_combine
from .direct import (
    NEUMANN_ORDER,
    SeriesSpec,
    integrate_terms_neumann,
    integrate_terms_quadrature,
    sum_integral,
    sum_series,
)
from .errors import DomainError
from .rational import RationalFunction, definite_from_zero
from .specfun import bessel_j_prime, gamma
from .transcendental.tables import eval_coeff_table, truncation_bound

ALPHA = 1.0 / 137.0
SERIES_BETA_MAX = 0.9
NUMERIC_BETA_MAX = 0.999
LOW_CHI_MAX = 0.1
HIGH_CHI_MIN = 10.0
CLASSICAL_COEFF = 5.0 / (2.0 * math.sqrt(3.0))

_JP_EVEN = SeriesSpec(nu=0, parity="even", deriv=1)
_HALF_N_EVEN = SeriesSpec(nu=1, parity="even", scale=Fraction(1, 2))


def _check_beta(beta: float, hi: float = 1.0, closed: bool = False) -> float:
    beta = float(beta)
    ok = 0.0 <= beta <= hi if closed else 0.0 <= beta < hi
    if not ok:
        bound = f"{hi}]" if closed else f"{hi})"
        raise DomainError(f"beta must lie in [0, {bound}, got {beta!r}")
    return beta


# per-harmonic intensity --------------------------------------------------

def harmonic_intensities(n, beta: float, tol: float = 1e-13) -> np.ndarray:
    """Normalized Schott intensities ``I_hat_n`` for an array of harmonics.

    ``I_hat_n = beta^2 n J'_2n(2n beta) - (1 - beta^2) n^2 int_0^beta J_2n(2n x) dx``
    with the integrals from graded Gauss-Legendre panels (orders up to
    ``NEUMANN_ORDER``) or the Neumann tail identity above.
    """
    beta = _check_beta(beta)
    n = np.atleast_1d(np.asarray(n))
    if np.any(n < 1) or np.any(n != np.round(n)):
        raise DomainError("harmonic numbers must be integers >= 1")
    n = n.astype(np.int64)
    if beta == 0.0:
        return np.zeros(len(n))
    m = (2 * n).astype(float)
    integ = np.empty(len(n))
    low = m <= NEUMANN_ORDER
    if np.any(low):
        integ[low] = integrate_terms_quadrature(m[low], beta, tol)[0]
    if np.any(~low):
        integ[~low] = integrate_terms_neumann(m[~low], beta)
    jp = np.array([bessel_j_prime(int(k), k * beta) for k in m])
    nf = n.astype(float)
    return beta * beta * nf * jp - (1.0 - beta * beta) * nf * nf * integ


def harmonic_intensity(n: int, beta: float) -> float:
    """Normalized intensity ``I_n v / (2 e^2 omega_H^2)`` of harmonic ``n``."""
    if not 0.0 < float(beta) < 1.0:
        raise DomainError(f"beta must lie in (0, 1), got {beta!r}")
    return float(harmonic_intensities([n], beta)[0])


@lru_cache(maxsize=1)
def _total_intensity_form() -> RationalFunction:
    # sum_n n J'_2n(2n b) is half the even part of sum m J'_m; the
    # integrand sum_n n^2 J_2n(2n x) is a quarter of the even part of
    # sum m^2 J_m, whose antiderivative is rational.
    jp_even = get_entry("2.07").expression * Fraction(1, 2)
    e2, _ = parity_combine(get_entry("2.17").expression, get_entry("2.18").expression)
    integral = definite_from_zero(e2 * Fraction(1, 4))
    z = RationalFunction.from_poly([0, 1])
    one_minus = RationalFunction.from_poly([1, 0, -1])
    return z * z * jp_even - one_minus * integral


def total_intensity_closed(beta: float) -> float:
    """``sum_n I_hat_n`` assembled exactly from registry closed forms."""
    beta = _check_beta(beta)
    return 0.0 if beta == 0.0 else _total_intensity_form()(beta)


def total_intensity_form() -> RationalFunction:
    """Exact rational form of the total normalized intensity."""
    return _total_intensity_form()


# total probability -------------------------------------------------------

@dataclass(frozen=True)
class ProbabilityResult:
    """Normalized total probability ``P_hat = P hbar v / (2 e^2 omega_H)``.

    Attributes
    ----------
    value : float
    method : str
    error_estimate : float
    beta : float
    """

    value: float
    method: str
    error_estimate: float
    beta: float

    def rate(self, omega_H: float) -> float:
        """Physical probability per unit time, ``2 alpha omega_H P_hat / beta``."""
        if self.beta == 0.0:
            return 0.0
        return 2.0 * ALPHA * float(omega_H) * self.value / self.beta

    def field_units(self) -> float:
        """Rate in units of ``eH/(mc)`` for a magnetic field, ``omega_H = (eH/mc) sqrt(1 - beta^2)``."""
        if self.beta == 0.0:
            return 0.0
        return 2.0 * ALPHA * math.sqrt(1.0 - self.beta**2) * self.value / self.beta


def total_probability(beta: float, method: str = "numeric", tol: float = 1e-12) -> ProbabilityResult:
    """Normalized total radiation probability per unit time.

    Parameters
    ----------
    beta : float
    method : {"numeric", "series"}
        ``numeric`` sums ``beta^2 sum J'_2n(2n beta)`` and the integral of
        ``sum n J_2n(2n x)`` directly (``beta <= 0.999``); ``series`` uses
        the five-term power series (``beta <= 0.9``).
    """
    if method == "series":
        beta = _check_beta(beta, SERIES_BETA_MAX, closed=True)
        if beta == 0.0:
            return ProbabilityResult(0.0, "series", 0.0, beta)
        value = eval_coeff_table("6.04", beta)
        return ProbabilityResult(value, "series", truncation_bound("6.04", beta), beta)
    if method != "numeric":
        raise DomainError(f"unknown method {method!r}; expected numeric or series")
    beta = _check_beta(beta, NUMERIC_BETA_MAX, closed=True)
    if beta == 0.0:
        return ProbabilityResult(0.0, "numeric", 0.0, beta)
    a = sum_series(_JP_EVEN, beta, tol)
    b = sum_integral(_HALF_N_EVEN, beta, tol)
    w = 1.0 - beta * beta
    value = beta * beta * a.value - w * b.value
    err = beta * beta * a.abs_error_estimate + w * b.abs_error_estimate
    return ProbabilityResult(value, "numeric", err, beta)


def probability_sum_rule(beta: float, tol: float = 1e-12, max_harmonics: int = 100_000) -> tuple:
    """``sum_n I_hat_n / n`` summed harmonic by harmonic.

    Returns ``(value, harmonics_used)``; stops once a block of harmonics
    contributes less than ``tol``.
    """
    beta = _check_beta(beta)
    if beta == 0.0:
        return 0.0, 0
    total, n0, block = [], 1, 64
    while n0 <= max_harmonics:
        n = np.arange(n0, n0 + block)
        t = harmonic_intensities(n, beta) / n
        total.extend(t.tolist())
        if abs(t[-1]) * block < tol and abs(float(np.sum(t[-8:]))) < tol:
            return math.fsum(total), len(total)
        n0 += block
        block = min(2 * block, 4096)
    raise DomainError(f"harmonic sum did not converge within {max_harmonics} harmonics")


# ultrarelativistic and quantum limits -------------------------------------

def ultrarelativistic_P() -> float:
    """``P hbar / (eH/mc)`` for ``1 - beta << 1``, i.e. ``5 alpha / (2 sqrt 3)``."""
    return CLASSICAL_COEFF * ALPHA


def classical_bridge(result: ProbabilityResult) -> float:
    """Map a normalized probability to units of ``alpha eH/(mc)``: ``2 sqrt(1 - beta^2) P_hat / beta``."""
    return result.field_units() / ALPHA


def quantum_W_low(chi: float) -> float:
    """Small-``chi`` rate ``W/(alpha m) = 5 chi / (2 sqrt 3)``."""
    return CLASSICAL_COEFF * chi


def quantum_W_high(chi: float) -> float:
    """Large-``chi`` rate ``W/(alpha m) = 14 Gamma(2/3) (3 chi)^(2/3) / 27``."""
    return 14.0 * gamma(2.0 / 3.0) * (3.0 * chi) ** (2.0 / 3.0) / 27.0


@dataclass(frozen=True)
class QuantumRate:
    """Both limiting rates ``W/(alpha m)`` and the applicable regime.

    ``regime`` is ``"low"`` for ``chi <= 0.1``, ``"high"`` for
    ``chi >= 10`` and ``"intermediate"`` in between, where no formula
    applies and ``value`` is ``None``.
    """

    chi: float
    regime: str
    low: float
    high: float

    @property
    def value(self) -> float | None:
        return {"low": self.low, "high": self.high}.get(self.regime)


def quantum_W(chi: float) -> QuantumRate:
    """Quantum radiation rate per unit proper time, in units of ``alpha m``."""
    chi = float(chi)
    if not chi >= 0.0 or not math.isfinite(chi):
        raise DomainError(f"chi must be a finite non-negative number, got {chi!r}")
    regime = "low" if chi <= LOW_CHI_MAX else ("high" if chi >= HIGH_CHI_MIN else "intermediate")
    return QuantumRate(chi, regime, quantum_W_low(chi), quantum_W_high(chi))


def quantum_W_branch(chi: float, branch: str) -> float:
    """One branch of the quantum rate regardless of regime."""
    r = quantum_W(chi)
    if branch == "low":
        return r.low
    if branch == "high":
        return r.high
    raise DomainError(f"branch must be low or high, got {branch!r}")


def survival_probability(P: float, t: float) -> float:
    """Probability ``exp(-P t)`` that no photon is emitted during ``t``."""
    P, t = float(P), float(t)
    if not P >= 0.0 or not t >= 0.0:
        raise DomainError("rate and time must be non-negative")
    return math.exp(-P * t)


def proper_time(t: float, beta: float) -> float:
    """``tau = sqrt(1 - beta^2) t``; rates obey ``P t = W tau``."""
    return math.sqrt(1.0 - _check_beta(beta) ** 2) * float(t)


def lab_rate_from_proper(W: float, beta: float) -> float:
    """Laboratory rate ``P = W sqrt(1 - beta^2)`` from a proper-time rate."""
    return float(W) * math.sqrt(1.0 - _check_beta(beta) ** 2)


def lab_lifetime(gamma_factor: float, field: float, branch: str = "high", exact_momentum: bool = False) -> float:
    """Mean radiation-free laboratory lifetime in units of ``1/m``.

    Parameters
    ----------
    gamma_factor : float
        ``E/m``, at least 1.
    field : float
        Field strength in units of ``m^2/e``, so that ``chi = field * p/m``.
    branch : {"low", "high"}
    exact_momentum : bool
        Use ``p/m = sqrt(gamma^2 - 1)``; by default the ultrarelativistic
        ``p/m = gamma`` is used, which makes the scaling exact.

    Notes
    -----
    ``t = gamma / (alpha W(chi))``: the proper-time rate ``W`` is dilated
    by ``gamma``.  In the high branch ``t`` grows as ``gamma^(1/3)``.
    """
    g = float(gamma_factor)
    if not g >= 1.0:
        raise DomainError(f"E/m must be at least 1, got {g!r}")
    if not float(field) > 0.0:
        raise DomainError("field must be positive")
    p = math.sqrt(g * g - 1.0) if exact_momentum else g
    w = quantum_W_branch(field * p, branch)
    return math.inf if w == 0.0 else g / (ALPHA * w)


@dataclass(frozen=True)
class RadiationInput:
    """Inputs of the radiation calculator.

    ``time`` is in the units of ``1/omega_H`` (classical mode) or of
    ``1/m`` (quantum mode, ``hbar = c = 1``).
    """

    beta: float
    omega_H: float = 1.0
    chi: float = 0.0
    time: float = 0.0
    mode: str = "classical"

    def __post_init__(self):
        _check_beta(self.beta)
        if not self.omega_H > 0.0:
            raise DomainError("omega_H must be positive")
        if not self.chi >= 0.0 or not self.time >= 0.0:
            raise DomainError("chi and time must be non-negative")
        if self.mode not in ("classical", "quantum"):
            raise DomainError(f"mode must be classical or quantum, got {self.mode!r}")


def omega_from_field(eH_over_mc: float, beta: float) -> float:
    """First-harmonic frequency in a magnetic field, ``(eH/mc) sqrt(1 - beta^2)``."""
    return float(eH_over_mc) * math.sqrt(1.0 - _check_beta(beta) ** 2)


def evaluate(inp: RadiationInput, method: str = "numeric") -> dict:
    """Rate and survival probability for one set of inputs."""
    if inp.mode == "classical":
        res = total_probability(inp.beta, method)
        rate = res.rate(inp.omega_H)
        return {
            "mode": "classical",
            "beta": inp.beta,
            "P_hat": res.value,
            "P_hat_error": res.error_estimate,
            "method": res.method,
            "rate": rate,
            "survival": survival_probability(rate, inp.time),
        }
    q = quantum_W(inp.chi)
    g = 1.0 / math.sqrt(1.0 - inp.beta**2)
    out = {"mode": "quantum", "beta": inp.beta, "chi": inp.chi, "regime": q.regime,
           "W_low": q.low, "W_high": q.high}
    if q.value is not None:
        rate = ALPHA * q.value / g
        out.update(rate=rate, survival=survival_probability(rate, inp.time))
    else:
        out.update(rate=None, survival=None)
    return out
