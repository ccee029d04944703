import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kapteyn.closed import REGISTRY, eval_closed
from kapteyn.direct import (
    SeriesSpec,
    bilinear_from_linear,
    decay_rate,
    estimate_terms,
    integrate_term,
    integrate_terms_neumann,
    integrate_terms_quadrature,
    minimum_order,
    sum_integral,
    sum_series,
)
from kapteyn.errors import DomainError

X_GRID = [0.1, 0.3, 0.5, 0.7, 0.9]


@pytest.mark.parametrize(
    "kw",
    [
        {"family": "triple"},
        {"parity": "prime"},
        {"nu": 5},
        {"nu": -3},
        {"nu": 1.5},
        {"deriv": 3},
        {"deriv": (1, 1)},
        {"family": "bilinear", "deriv": (0, 1, 2)},
        {"scale": 0},
    ],
)
def test_spec_validation(kw):
    with pytest.raises(DomainError):
        SeriesSpec(**kw)


def test_spec_normalizes_bilinear_orders():
    assert SeriesSpec("bilinear", deriv=(1, 0)).deriv == (0, 1)
    assert SeriesSpec("bilinear", deriv=1).deriv == (1, 1)
    assert SeriesSpec(scale=0.5).scale == Fraction(1, 2)


@pytest.mark.parametrize("eid", sorted(REGISTRY))
@pytest.mark.parametrize("x", [0.2, 0.6, 0.9])
def test_direct_matches_closed_forms(eid, x):
    entry = REGISTRY[eid]
    r = sum_series(entry.spec, x, 1e-12)
    exact = eval_closed(eid, x)
    assert r.value == pytest.approx(exact, rel=1e-11, abs=1e-14)


@pytest.mark.parametrize("eid", ["2.03", "2.17", "2.20", "4.07", "4.14"])
@pytest.mark.parametrize("tol", [1e-6, 1e-9])
def test_error_estimate_is_honest(eid, tol):
    entry = REGISTRY[eid]
    for x in X_GRID:
        r = sum_series(entry.spec, x, tol)
        err = abs(r.value - eval_closed(eid, x))
        assert err <= max(r.abs_error_estimate, 1e-15) * 1.5
        assert err <= tol * abs(r.value) * 1.5 + 1e-15


def test_refusals():
    spec = SeriesSpec(nu=0)
    with pytest.raises(DomainError):
        sum_series(spec, 0.9995)
    with pytest.raises(DomainError):
        sum_series(spec, 0.5, 1e-15)
    with pytest.raises(DomainError):
        sum_series(spec, -0.1)
    with pytest.raises(DomainError):
        sum_series(spec, 0.5, precision="quad")
    with pytest.raises(DomainError):
        sum_series(SeriesSpec(nu=4), 0.998, max_terms=1000)


def test_damped_series_reaches_unit_argument():
    r = sum_series(SeriesSpec(nu=0, a=0.5), 1.0, 1e-12)
    # |J_m(m)| < 1, so the damped sum is bounded by the geometric series
    assert 0.0 < r.value < 1.0


@given(
    st.integers(-2, 4),
    st.sampled_from([0, 1, 2]),
    st.floats(0.05, 0.9),
)
def test_parity_reconstruction(nu, d, x):
    base = SeriesSpec(nu=nu, deriv=d)
    full = sum_series(base, x, 1e-12).value
    even = sum_series(base.with_(parity="even"), x, 1e-12).value
    odd = sum_series(base.with_(parity="odd"), x, 1e-12).value
    alt = sum_series(base.with_(alternating=True), x, 1e-12).value
    scale = max(1.0, abs(even) + abs(odd))
    assert full == pytest.approx(even + odd, abs=1e-11 * scale)
    assert alt == pytest.approx(even - odd, abs=1e-11 * scale)


def test_decay_rate_and_term_counts_are_monotone():
    xs = np.linspace(0.1, 0.999, 40)
    rates = [decay_rate(x) for x in xs]
    assert all(a > b for a, b in zip(rates, rates[1:]))
    w = 1e-4
    x = math.sqrt(1 - w)
    assert decay_rate(x) == pytest.approx(w**1.5 / 3, rel=1e-3)
    counts = [estimate_terms(SeriesSpec(nu=1), x, 1e-10) for x in xs]
    assert all(a <= b for a, b in zip(counts, counts[1:]))
    assert minimum_order(0.5) >= 1


@pytest.mark.parametrize("nu", [-2, -1, 0, 1])
@pytest.mark.parametrize("x", [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8])
def test_derivative_consistency(nu, x):
    h = 1e-4
    spec = SeriesSpec(nu=nu)
    plus = sum_series(spec, x + h, 1e-13).value
    minus = sum_series(spec, x - h, 1e-13).value
    fd = (plus - minus) / (2 * h)
    # d/dx J_m(m x) = m J'_m(m x)
    deriv = sum_series(SeriesSpec(nu=nu + 1, deriv=1), x, 1e-13).value
    assert fd == pytest.approx(deriv, rel=1e-6)


@pytest.mark.parametrize("x", [0.5, 0.8])
def test_mp_path_agrees(x):
    spec = SeriesSpec(nu=2, deriv=2, alternating=True)
    a = sum_series(spec, x, 1e-10, precision="float")
    b = sum_series(spec, x, 1e-10, precision="mp")
    assert b.method.endswith("/mp")
    assert a.value == pytest.approx(b.value, rel=1e-9)


def test_auto_precision_handles_cancellation():
    # alternating weight-4 sum at small x cancels strongly
    spec = SeriesSpec(nu=4, alternating=True)
    r = sum_series(spec, 0.02, 1e-12)
    assert r.value == pytest.approx(eval_closed("2.22", 0.02), rel=1e-11)


@pytest.mark.parametrize("x", [0.3, 0.7])
def test_bilinear_from_linear(x):
    lin = SeriesSpec(nu=0, parity="even")
    r = bilinear_from_linear(lin, x, 1e-11)
    assert r.value == pytest.approx(eval_closed("4.07", x), rel=1e-9)
    with pytest.raises(DomainError):
        bilinear_from_linear(SeriesSpec(nu=0), x)


def test_integrate_term_methods_agree():
    m = np.arange(150, 260)
    for beta in (0.3, 0.8, 0.99):
        q, _ = integrate_terms_quadrature(m.astype(float), beta, 1e-14)
        n = integrate_terms_neumann(m.astype(float), beta)
        assert np.allclose(q, n, rtol=1e-10, atol=1e-300)
    assert integrate_term(5, 0.5, method="quadrature") == pytest.approx(
        integrate_term(5, 0.5, method="neumann"), rel=1e-11
    )


@pytest.mark.parametrize("beta", [0.4, 0.8])
def test_sum_integral_methods_and_fundamental_theorem(beta):
    spec = SeriesSpec(nu=1, parity="even", scale=Fraction(1, 2))
    a = sum_integral(spec, beta, 1e-11, method="quadrature").value
    b = sum_integral(spec, beta, 1e-11, method="neumann").value
    c = sum_integral(spec, beta, 1e-11).value
    assert a == pytest.approx(b, rel=1e-9)
    assert a == pytest.approx(c, rel=1e-9)
    h = 1e-4
    fd = (sum_integral(spec, beta + h, 1e-12).value - sum_integral(spec, beta - h, 1e-12).value) / (2 * h)
    assert fd == pytest.approx(sum_series(spec, beta, 1e-12).value, rel=1e-6)


def test_sum_integral_of_derivative_series_is_exact():
    # int_0^beta sum m J'_m(m x) dx = sum J_m(m beta)
    beta = 0.6
    r = sum_integral(SeriesSpec(nu=1, deriv=1), beta, 1e-12)
    assert r.value == pytest.approx(eval_closed("2.03", beta), rel=1e-11)
    with pytest.raises(DomainError):
        sum_integral(SeriesSpec("bilinear"), beta)
