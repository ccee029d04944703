import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate
from scipy.special import jv, jvp

from kapteyn.errors import DomainError
from kapteyn.radiation import (
    ALPHA,
    CLASSICAL_COEFF,
    ProbabilityResult,
    RadiationInput,
    classical_bridge,
    evaluate,
    harmonic_intensities,
    harmonic_intensity,
    lab_lifetime,
    lab_rate_from_proper,
    omega_from_field,
    probability_sum_rule,
    proper_time,
    quantum_W,
    quantum_W_branch,
    survival_probability,
    total_intensity_closed,
    total_intensity_form,
    total_probability,
    ultrarelativistic_P,
)
from kapteyn.rational import Poly, RationalFunction


def test_first_harmonic_worked_value():
    assert harmonic_intensity(1, 0.5) == pytest.approx(3.770e-2, abs=1e-5)


def test_first_harmonic_against_mpmath():
    b = mpmath.mpf("0.5")
    with mpmath.workdps(30):
        integral = mpmath.quad(lambda x: mpmath.besselj(2, 2 * x), [0, b])
        ref = b**2 * mpmath.besselj(2, 2 * b, derivative=1) - (1 - b**2) * integral
    assert harmonic_intensity(1, 0.5) == pytest.approx(float(ref), rel=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("beta", [0.3, 0.7])
def test_angular_form_integrates_to_intensity(n, beta):
    # I_hat_n = (beta/2) n^2 int sin(th) [cot^2 J_n(u)^2 + beta^2 J_n'(u)^2] dth,
    # u = n beta sin(th)
    def f(th):
        u = n * beta * math.sin(th)
        cot = math.cos(th) / math.sin(th)
        return (cot**2 * jv(n, u) ** 2 + beta**2 * jvp(n, u) ** 2) * math.sin(th)

    val, _ = integrate.quad(f, 0.0, math.pi, epsabs=1e-15, epsrel=1e-13)
    assert 0.5 * beta * n * n * val == pytest.approx(harmonic_intensity(n, beta), rel=1e-10)


def test_intensity_vanishes_at_rest_and_domain():
    small = [harmonic_intensity(3, b) for b in (1e-2, 1e-3, 1e-4)]
    assert small[0] > small[1] > small[2] > 0.0
    assert small[2] < 1e-20
    with pytest.raises(DomainError):
        harmonic_intensity(1, 0.0)
    with pytest.raises(DomainError):
        harmonic_intensity(1, 1.0)
    with pytest.raises(DomainError):
        harmonic_intensity(0, 0.5)


@pytest.mark.parametrize("beta", [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9])
def test_intensities_non_negative(beta):
    assert np.all(harmonic_intensities(np.arange(1, 201), beta) >= 0.0)


def test_total_intensity_from_closed_forms():
    beta = 0.5
    n = np.arange(1, 4001)
    total = math.fsum(harmonic_intensities(n, beta))
    assert total == pytest.approx(total_intensity_closed(beta), abs=1e-6)
    form = total_intensity_form()
    z3 = RationalFunction(Poly([0, 0, 0, 1]))
    assert form * RationalFunction(Poly([3, 0, -6, 0, 3])) == z3


def test_series_worked_value():
    r = total_probability(0.3, "series")
    assert r.value == pytest.approx(9.7012e-3, abs=5e-8)
    assert r.method == "series"
    assert total_probability(0.0, "series").value == 0.0
    assert total_probability(0.0).value == 0.0


def test_numeric_and_series_agree_at_moderate_speed():
    a = total_probability(0.3)
    b = total_probability(0.3, "series")
    assert abs(a.value - b.value) <= 1e-6


def test_method_ranges():
    with pytest.raises(DomainError):
        total_probability(0.95, "series")
    with pytest.raises(DomainError):
        total_probability(0.9995)
    with pytest.raises(DomainError):
        total_probability(0.5, "guess")


@pytest.mark.parametrize("beta", [0.3, 0.5, 0.7])
def test_probability_sum_rule(beta):
    num = total_probability(beta)
    val, used = probability_sum_rule(beta)
    assert used > 0
    assert val == pytest.approx(num.value, abs=max(1e-10, 10 * num.error_estimate))


def test_series_monotone():
    betas = np.linspace(0.0, 0.9, 91)
    vals = [total_probability(b, "series").value for b in betas]
    assert all(a < b for a, b in zip(vals, vals[1:]))


def test_ultrarelativistic_limit():
    assert ultrarelativistic_P() == pytest.approx(1.05356e-2, rel=1e-5)
    beta = 0.999
    bridge = classical_bridge(total_probability(beta))
    assert abs(bridge / (CLASSICAL_COEFF * beta**3) - 1) <= 0.05


def test_classical_quantum_seam():
    for chi in (1e-3, 0.01, 0.05):
        assert quantum_W(chi).low / chi == ultrarelativistic_P() / ALPHA


def test_quantum_worked_values():
    assert quantum_W_branch(1 / 3, "high") == pytest.approx(0.70213, abs=1e-5)
    assert quantum_W(0.0).value == 0.0
    assert quantum_W(0.01).value == pytest.approx(1.44338e-2, rel=1e-5)
    mid = quantum_W(1.0)
    assert mid.regime == "intermediate" and mid.value is None
    assert quantum_W(20.0).regime == "high"
    with pytest.raises(DomainError):
        quantum_W(-1.0)
    with pytest.raises(DomainError):
        quantum_W_branch(1.0, "middle")


def test_survival_probability():
    assert survival_probability(0.1, 10) == pytest.approx(0.3678794, abs=1e-7)
    assert survival_probability(5.0, 0.0) == 1.0
    with pytest.raises(DomainError):
        survival_probability(-1.0, 1.0)


@given(st.floats(0.0, 0.99), st.floats(0.0, 10.0), st.floats(0.0, 100.0))
def test_lab_and_proper_exponents_agree(beta, W, t):
    # P t = W tau
    P = lab_rate_from_proper(W, beta)
    assert P * t == pytest.approx(W * proper_time(t, beta), rel=1e-12, abs=1e-300)


@pytest.mark.parametrize("gamma", [10.0, 1e3, 1e5])
def test_lifetime_scaling(gamma):
    ratio = lab_lifetime(2 * gamma, 1.0) / lab_lifetime(gamma, 1.0)
    assert ratio == pytest.approx(2 ** (1 / 3), rel=1e-12)
    exact = lab_lifetime(2 * gamma, 1.0, exact_momentum=True) / lab_lifetime(gamma, 1.0, exact_momentum=True)
    assert exact == pytest.approx(2 ** (1 / 3), rel=0.5 / gamma**2)


def test_rate_conversions():
    r = total_probability(0.5)
    assert r.rate(2.0) == pytest.approx(2 * ALPHA * 2.0 * r.value / 0.5)
    assert r.field_units() == pytest.approx(r.rate(omega_from_field(1.0, 0.5)))
    assert ProbabilityResult(0.0, "numeric", 0.0, 0.0).rate(1.0) == 0.0


def test_evaluate_modes():
    c = evaluate(RadiationInput(0.3, omega_H=1.0, time=10.0))
    assert c["survival"] == pytest.approx(math.exp(-c["rate"] * 10.0))
    q = evaluate(RadiationInput(0.9, chi=0.05, time=1.0, mode="quantum"))
    assert q["regime"] == "low" and q["rate"] > 0
    gap = evaluate(RadiationInput(0.9, chi=1.0, mode="quantum"))
    assert gap["rate"] is None
    with pytest.raises(DomainError):
        RadiationInput(0.5, mode="other")
    with pytest.raises(DomainError):
        RadiationInput(0.5, omega_H=0.0)
