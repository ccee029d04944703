from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from kapteyn.rational import (
    ONE,
    S2,
    Z,
    Poly,
    RationalFunction,
    antiderivative,
    definite_from_zero,
    poly_gcd,
)

coef = st.fractions(min_value=-5, max_value=5, max_denominator=7)
polys = st.lists(coef, min_size=0, max_size=4).map(Poly)
nonzero_polys = polys.filter(lambda p: not p.is_zero())


@st.composite
def elements(draw):
    return RationalFunction(draw(polys), draw(polys), draw(nonzero_polys))


nonzero_elements = elements().filter(lambda f: not f.is_zero())


def test_poly_basics():
    p = Poly([1, 2, 3])
    assert p.degree == 2
    assert p(F(2)) == 17
    assert p.deriv() == Poly([2, 6])
    assert p.antideriv().deriv() == p
    assert (p * p).exact_div(p) == p
    q, r = Poly([-1, 0, 1]).divmod(Poly([-1, 1]))
    assert q == Poly([1, 1]) and r.is_zero()
    assert poly_gcd(Poly([-1, 0, 1]), Poly([1, 1])) == Poly([1, 1])
    assert Poly([0, 0, 5]).valuation() == 2
    assert str(Poly([1, -1])) == "1 - z"


def test_poly_is_exact():
    p = Poly([F(1, 3)])
    assert p(F(1)) == F(1, 3)
    with pytest.raises(TypeError):
        Poly([object()])


def test_canonical_form():
    a = RationalFunction(Poly([2, 2]), None, Poly([4, 4]))
    assert a == RationalFunction(Poly([F(1, 2)]))
    b = RationalFunction(Poly([0, 3]), Poly([0, 3]), Poly([0, 6]))
    assert b.d == ONE and b.p == Poly([F(1, 2)])
    assert b.q == Poly([F(1, 2)])


def test_sqrt_algebra():
    s = RationalFunction.sqrt_term()
    assert s * s == RationalFunction(S2)
    assert s.inverse() * s == RationalFunction(ONE)
    assert s.conjugate() == -s


def test_derivative_of_sqrt():
    s = RationalFunction.sqrt_term()
    # d/dz sqrt(1-z^2) = -z / sqrt(1-z^2)
    assert s.deriv() == -RationalFunction(Z) / s


def test_evaluation_with_cancellation():
    # 1 - sqrt(1 - z^2) near z = 0 loses everything in naive float
    f = RationalFunction(ONE) - RationalFunction.sqrt_term()
    z = 1e-5
    with mpmath.workdps(50):
        ref = float(1 - mpmath.sqrt(1 - mpmath.mpf(z) ** 2))
    assert f(z) == pytest.approx(ref, rel=1e-14)


@given(elements(), elements())
def test_ring_axioms(a, b):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) - b == a


@given(elements(), nonzero_elements)
def test_division_roundtrip(a, b):
    assert (a * b) / b == a


@given(elements(), elements())
def test_product_rule(a, b):
    assert (a * b).deriv() == a.deriv() * b + a * b.deriv()


@given(elements(), st.floats(0.05, 0.95))
def test_float_evaluation_matches_mp(f, z):
    zf = F(z)
    assume(f.d(zf) != 0)
    with mpmath.workdps(60):
        ref = f._eval_mp(mpmath.mpf(z))
    got = f(z)
    assert abs(got - float(ref)) <= 1e-12 * max(1.0, abs(float(ref)))


@given(polys, nonzero_polys)
def test_antiderivative_inverts_derivative(num, den):
    f = RationalFunction.from_poly(num, den)
    assert antiderivative(f.deriv()).deriv() == f.deriv()


def test_log_part_is_rejected():
    with pytest.raises(ArithmeticError):
        antiderivative(RationalFunction.from_poly(ONE, Poly([1, 1])))


def test_definite_from_zero():
    f = RationalFunction.from_poly(Poly([0, 2]), Poly([1, 0, -2, 0, 1]))  # 2z/(1-z^2)^2
    g = definite_from_zero(f)
    assert g == RationalFunction.from_poly(Poly([0, 0, 1]), S2)  # z^2/(1-z^2)


def test_has_pole_in():
    assert not RationalFunction.from_poly(ONE, Poly([1, -1]) ** 3).has_pole_in(0, 1)
    assert RationalFunction.from_poly(ONE, Poly([-1, 2])).has_pole_in(0, 1)
    assert not RationalFunction.from_poly(ONE, Poly([1, 0, 1])).has_pole_in(0, 1)


def test_reflect_and_serialization():
    f = RationalFunction(Poly([0, 1]), Poly([1]), Poly([1, 1]))
    assert f.reflect().reflect() == f
    d = f.to_dict()
    assert set(d) == {"p", "q", "d"}
    assert "sqrt(1-z^2)" in str(f)
