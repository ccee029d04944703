"""Registry of algebraic Kapteyn sums and the exact operators that derive them.

Every entry pairs a :class:`~kapteyn.direct.SeriesSpec` with its closed form
as a :class:`~kapteyn.rational.RationalFunction`.  Entries marked
``operator-derived`` are rebuilt from lower-weight entries by the
Kapteyn operator, parity splitting or the derivative identities, and the
results must coincide exactly with the transcribed forms.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .direct import SeriesSpec
from .errors import DomainError, UnknownIdError
from .rational import ONE, S2, Z, Poly, RationalFunction, definite_from_zero

F = Fraction
_s = RationalFunction.sqrt_term()


def _rf(num, den=(1,)) -> RationalFunction:
    return RationalFunction(Poly(num), None, Poly(den))


def _pow(p: Poly, k: int) -> Poly:
    return p**k


ONE_MINUS = Poly([1, -1])
ONE_PLUS = Poly([1, 1])


@dataclass(frozen=True)
class ClosedFormEntry:
    """One closed-form Kapteyn sum.

    ``validity`` is the half-open interval ``[lo, hi)`` of arguments where the
    series converges and the expression applies.  ``notes`` carries any
    convention findings, e.g. the starting index of odd sums.
    """

    id: str
    spec: SeriesSpec
    expression: RationalFunction
    validity: tuple = (0.0, 1.0)
    provenance: str = "transcribed"
    notes: str = ""
    derivation: object = field(default=None, compare=False, repr=False)

    def __call__(self, z: float) -> float:
        return eval_entry(self, z)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "spec": self.spec.to_dict(),
            "descriptor": self.spec.describe(),
            "expression": self.expression.to_dict(),
            "text": str(self.expression),
            "validity": list(self.validity),
            "provenance": self.provenance,
            "notes": self.notes,
        }


def _lin(nu, parity="all", alternating=False, deriv=0, scale=1):
    return SeriesSpec("linear", nu, alternating, parity, 1.0, deriv, Fraction(scale))


def _bil(nu, deriv=(0, 0), scale=1):
    return SeriesSpec("bilinear", nu, False, "all", 1.0, deriv, Fraction(scale))


_ODD_NOTE = "odd sum includes m = 1; confirmed by direct summation"

# transcribed right-hand sides -------------------------------------------------
_TRANSCRIBED = [
    ("2.03", _lin(0), _rf([0, 1], [2, -2]), ""),
    ("2.04", _lin(0, alternating=True), _rf([0, -1], [2, 2]), ""),
    ("2.05", _lin(0, "even"), _rf([0, 0, 1], [2, 0, -2]), ""),
    ("2.06", _lin(0, "odd"), _rf([0, 1], [2, 0, -2]), _ODD_NOTE),
    ("2.07", _lin(1, "even", deriv=1), _rf([0, 1], _pow(S2, 2).c), ""),
    ("2.08", _lin(1, "odd", deriv=1), _rf([1, 0, 1], (_pow(S2, 2) * 2).c), _ODD_NOTE),
    ("2.09", _lin(2, "even", deriv=2), _rf([1, 0, 3], _pow(S2, 3).c), ""),
    ("2.13", _lin(-2), _rf([0, F(1, 2), F(1, 8)]), ""),
    ("2.14", _lin(-2, alternating=True), _rf([0, F(-1, 2), F(1, 8)]), ""),
    ("2.15a", _lin(-1, "even", deriv=1), _rf([0, F(1, 4)]), ""),
    ("2.15b", _lin(-1, "odd", deriv=1), _rf([F(1, 2)]), _ODD_NOTE),
    ("2.17", _lin(2), _rf([0, 1], (_pow(ONE_MINUS, 4) * 2).c), ""),
    ("2.18", _lin(2, alternating=True), _rf([0, -1], (_pow(ONE_PLUS, 4) * 2).c), ""),
    ("2.20", _lin(4), _rf([0, 1, 9], (_pow(ONE_MINUS, 7) * 2).c), ""),
    ("2.22", _lin(4, alternating=True), _rf([0, -1, 9], (_pow(ONE_PLUS, 7) * 2).c), ""),
    (
        "2.23",
        _lin(4, "even", scale=F(1, 16)),
        _rf([0, 0, 1, 0, 14, 0, 21, 0, 4], (_pow(S2, 7) * 2).c),
        "sum of n^4 J_2n(2n z): weight (2n)^4 scaled by 1/16",
    ),
    (
        "2.24",
        _lin(4, "odd"),
        _rf([0, 1, 0, 84, 0, 350, 0, 196, 0, 9], (_pow(S2, 7) * 2).c),
        _ODD_NOTE,
    ),
    ("4.04", _bil(-2), _rf([0, 0, F(1, 4)]), ""),
    ("4.06", _bil(-2, (1, 1)), _rf([F(1, 4), 0, F(-1, 8)]), ""),
    ("4.07", _bil(0), (ONE / _s - 1) * F(1, 2), ""),
    ("4.08", _bil(0, (1, 1)), (1 - _s) / RationalFunction(Poly([0, 0, 2])), ""),
    ("4.10", _bil(1, (0, 1)), RationalFunction(Poly([0, F(1, 4)])) / (_s * RationalFunction(S2)), ""),
    (
        "4.14",
        _bil(2),
        RationalFunction(Poly([0, 0, F(1, 4), 0, F(1, 16)])) / (_s * RationalFunction(_pow(S2, 3))),
        "",
    ),
    (
        "4.15",
        _bil(3, (0, 1), scale=2),
        RationalFunction(Poly([0, F(1, 2), 0, F(3, 2), 0, F(3, 16)])) / (_s * RationalFunction(_pow(S2, 4))),
        "",
    ),
]


def _build(entries) -> dict:
    out = {}
    for eid, spec, expr, note in entries:
        out[eid] = ClosedFormEntry(eid, spec, expr, (0.0, 1.0), "transcribed", note)
    return out


REGISTRY: dict = _build(_TRANSCRIBED)

# combinations that appear only inside identities -------------------------------
# Bessel-equation identities relate these right-hand sides to registry entries
IDENTITY_RHS = {
    "4.13": RationalFunction(Poly([2, 0, 1])) / (RationalFunction(Poly.const(4)) * _s * RationalFunction(_pow(S2, 2))),
    "4.16": RationalFunction(Poly([F(1, 2), 0, F(19, 4), 0, F(69, 16), 0, F(9, 32)]))
    / (_s * RationalFunction(_pow(S2, 5))),
    "2.11": _rf([1, 0, 3], _pow(S2, 3).c),
}


def registry_ids() -> list:
    return list(REGISTRY)


def get_entry(eid: str) -> ClosedFormEntry:
    try:
        return REGISTRY[eid]
    except KeyError:
        raise UnknownIdError(f"unknown closed-form id {eid!r}; known ids: {', '.join(REGISTRY)}") from None


def eval_entry(entry: ClosedFormEntry, z: float) -> float:
    lo, hi = entry.validity
    z = float(z)
    if not lo <= z < hi:
        raise DomainError(f"z={z!r} outside the validity interval [{lo}, {hi}) of entry {entry.id}")
    if z == 0.0 and entry.expression.d(Fraction(0)) == 0:
        return float(_limit_at_zero(entry.expression))
    return entry.expression(z)


def eval_closed(eid: str, z: float) -> float:
    """Evaluate registry entry ``eid`` at ``z`` in binary64."""
    return eval_entry(get_entry(eid), z)


def _limit_at_zero(f: RationalFunction) -> Fraction:
    """Limit of ``f`` at ``z = 0`` by Taylor expansion of the square root."""
    series = taylor(f, 0)
    return series[0]


# ---------------------------------------------------------------------------
# exact operators


def apply_kapteyn_operator(rf: RationalFunction) -> RationalFunction:
    """Map the closed form of weight ``nu`` to weight ``nu + 2``.

    Returns ``(z d/dz)^2 rf / (1 - z^2)``.
    """
    if rf.has_pole_in(0.0, 1.0):
        raise DomainError("the Kapteyn operator needs a form without poles in (0, 1)")
    return rf.euler().euler() / RationalFunction(S2)


def integrate_weight_down(h: RationalFunction) -> RationalFunction:
    """Solve ``(z d/dz)^2 G = h`` for ``G`` with ``G(0) = G'(0) = 0``.

    ``h`` is the right-hand side ``(1 - z^2) F`` built from the weight-``nu``
    closed form ``F``; the result is the weight ``nu - 2`` form.

    Raises
    ------
    DomainError
        If ``h`` is not in the image of the operator, i.e. ``h(0) != 0`` or
        an antiderivative would need logarithms.
    """
    if h.is_zero():
        return h
    if not h.is_rational:
        raise DomainError("integration is implemented for rational right-hand sides only")
    if h.d(Fraction(0)) == 0 or h.p(Fraction(0)) != 0:
        raise DomainError("right-hand side must vanish at z = 0 (non-zero residue obstruction)")
    try:
        inner = definite_from_zero(h / RationalFunction(Z))
        if inner.d(Fraction(0)) == 0 or inner.p(Fraction(0)) != 0:
            raise DomainError("inner integral does not vanish at z = 0 (residue obstruction)")
        return definite_from_zero(inner / RationalFunction(Z))
    except ArithmeticError as exc:
        raise DomainError(f"not in the image of the Kapteyn operator: {exc}") from None


def lower_weight(rf: RationalFunction) -> RationalFunction:
    """Closed form of weight ``nu - 2`` from that of weight ``nu``."""
    return integrate_weight_down(rf * RationalFunction(S2))


def parity_combine(s_plus: RationalFunction, s_minus: RationalFunction):
    """Split a plain and an alternating sum into even and odd parts.

    With ``S+ = sum c_m X_m`` and ``S- = sum (-1)^m c_m X_m`` the even-order
    part is ``(S+ + S-)/2`` and the odd part ``(S+ - S-)/2``.
    """
    half = Fraction(1, 2)
    return (s_plus + s_minus) * half, (s_plus - s_minus) * half


def derive_prime_relation(entry: ClosedFormEntry, registry: dict | None = None) -> ClosedFormEntry:
    """Closed form of ``sum n^nu J_n'(n x)^2`` from ``sum n^nu J_n(n x)^2``.

    Uses the second-derivative identity

        sum n^nu J'^2 = 1/2 (1/x d/dx + d^2/dx^2) sum n^(nu-2) J^2
                        + (1 - 1/x^2) sum n^nu J^2

    when the weight ``nu - 2`` entry is registered, and otherwise the
    first-order relation ``(1 - x^2) d/dx E = d/dx [x^2 E']`` integrated
    from 0 (``E`` the J^2 sum, ``E'`` the J'^2 sum).
    """
    reg = REGISTRY if registry is None else registry
    spec = entry.spec
    if spec.family != "bilinear" or spec.deriv != (0, 0):
        raise DomainError("derive_prime_relation needs a bilinear J^2 entry")
    E = entry.expression / spec.scale
    lower = next(
        (
            e
            for e in reg.values()
            if e.spec.family == "bilinear" and e.spec.deriv == (0, 0) and e.spec.nu == spec.nu - 2
        ),
        None,
    )
    xrf = RationalFunction(Z)
    if lower is not None:
        L = lower.expression / lower.spec.scale
        out = (L.deriv() / xrf + L.deriv().deriv()) * Fraction(1, 2) + E * (ONE - RationalFunction(Poly([0, 0, 1])).inverse())
        route = f"second-derivative identity from entry {lower.id}"
    else:
        if not E.is_rational:
            raise DomainError("first-order route needs a rational J^2 form")
        integrand = E.deriv() * RationalFunction(S2)
        try:
            prim = definite_from_zero(integrand)
        except ArithmeticError as exc:
            raise DomainError(f"cannot integrate exactly: {exc}") from None
        out = prim / RationalFunction(Poly([0, 0, 1]))
        route = "first-order relation integrated from 0"
    new_spec = spec.with_(deriv=(1, 1), scale=Fraction(1))
    return ClosedFormEntry(
        f"{entry.id}'", new_spec, out, entry.validity, "operator-derived", route, derivation=entry.id
    )


# ---------------------------------------------------------------------------
# derivation of the higher-weight entries


def derived_entries() -> dict:
    """Rebuild selected entries from lower ones with the exact operators.

    Returns a dict id -> RationalFunction.  Like the registry expressions,
    the forms are values of the full sums, ``scale`` included.
    """
    out = {}
    s203 = REGISTRY["2.03"].expression
    s204 = REGISTRY["2.04"].expression
    out["2.17"] = apply_kapteyn_operator(s203)
    out["2.18"] = apply_kapteyn_operator(s204)
    out["2.20"] = apply_kapteyn_operator(out["2.17"])
    out["2.22"] = apply_kapteyn_operator(out["2.18"])
    even4, odd4 = parity_combine(out["2.20"], out["2.22"])
    out["2.23"] = even4 * REGISTRY["2.23"].spec.scale
    out["2.24"] = odd4
    e05, e06 = parity_combine(s203, s204)
    out["2.05"], out["2.06"] = e05, e06
    out["2.13"] = lower_weight(s203)
    out["2.14"] = lower_weight(s204)
    out["4.06"] = derive_prime_relation(REGISTRY["4.04"]).expression
    out["4.08"] = derive_prime_relation(REGISTRY["4.07"]).expression
    out["4.10"] = REGISTRY["4.07"].expression.deriv() * Fraction(1, 2)
    out["4.15"] = REGISTRY["4.14"].expression.deriv()
    return out


def derivation_closure() -> dict:
    """Compare derived forms with transcriptions; id -> bool (exact equality)."""
    return {k: v == REGISTRY[k].expression for k, v in derived_entries().items()}


def identity_checks() -> dict:
    """Exact checks of the Bessel-equation and derivative identities.

    Keys name the identity; values are booleans.
    """
    xr = RationalFunction(Z)
    inv_x2 = RationalFunction(Poly([0, 0, 1])).inverse()
    r = {}
    # sum (2n)^2 J_2n(2n z) is the even part of the weight-2 pair
    even2, _ = parity_combine(REGISTRY["2.17"].expression, REGISTRY["2.18"].expression)
    lhs = (inv_x2 - 1) * even2 - REGISTRY["2.07"].expression / xr
    r["2.11"] = lhs == IDENTITY_RHS["2.11"]
    s07 = REGISTRY["4.07"].expression
    s08 = REGISTRY["4.08"].expression
    r["4.09"] = _s * s07 * inv_x2 == s08
    s10 = REGISTRY["4.10"].expression
    s14 = REGISTRY["4.14"].expression
    s15 = REGISTRY["4.15"].expression
    r["4.10 = d/dx 4.07 / 2"] = s07.deriv() * Fraction(1, 2) == s10
    r["4.13"] = s10.deriv() + s10 / xr == IDENTITY_RHS["4.13"]
    r["4.15 = d/dx 4.14"] = s14.deriv() == s15
    r["4.16"] = (s15.deriv() + s15 / xr) * Fraction(1, 2) == IDENTITY_RHS["4.16"]
    return r


def prime_sum_4_13(x: float) -> float:
    """``sum n^2 J_n'(n x)^2`` from the identity combining 4.13 and 4.14."""
    rhs = IDENTITY_RHS["4.13"](x)
    return rhs - (1.0 / (x * x) - 1.0) * REGISTRY["4.14"].expression(x)


# ---------------------------------------------------------------------------
# Taylor expansion of registry expressions


def _sqrt_series(order: int) -> list:
    """Taylor coefficients of sqrt(1 - z^2) up to ``z**order``."""
    out = [Fraction(0)] * (order + 1)
    c = Fraction(1)
    for k in range(order // 2 + 1):
        out[2 * k] = c * (-1) ** k
        # binomial(1/2, k+1) from binomial(1/2, k)
        c = c * (Fraction(1, 2) - k) / (k + 1)
    return out


def _series_mul(a, b, order):
    out = [Fraction(0)] * (order + 1)
    for i, x in enumerate(a[: order + 1]):
        if x == 0:
            continue
        for j, y in enumerate(b[: order + 1 - i]):
            out[i + j] += x * y
    return out


def _series_div(a, b, order):
    if b[0] == 0:
        raise ZeroDivisionError("series division needs a non-zero constant term")
    out = [Fraction(0)] * (order + 1)
    for k in range(order + 1):
        acc = a[k] if k < len(a) else Fraction(0)
        for j in range(1, k + 1):
            if j < len(b):
                acc -= b[j] * out[k - j]
        out[k] = acc / b[0]
    return out


def taylor(f: RationalFunction, order: int) -> list:
    """Exact Taylor coefficients of ``f`` at ``z = 0`` through ``z**order``.

    Handles denominators vanishing at 0 when the numerator cancels them.
    """
    val = f.d.valuation()
    work = order + val
    sq = _sqrt_series(work)
    num = list(f.p.c) + [Fraction(0)] * (work + 1)
    qs = _series_mul(list(f.q.c) + [Fraction(0)] * (work + 1), sq, work)
    num = [num[k] + qs[k] for k in range(work + 1)]
    if any(num[k] != 0 for k in range(val)):
        raise ZeroDivisionError("expression has a pole at z = 0")
    num = num[val:]
    den = list(f.d.c[val:])
    return _series_div(num, den + [Fraction(0)] * (order + 1), order)
