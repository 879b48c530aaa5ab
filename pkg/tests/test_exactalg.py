from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from thompoly.exactalg import (LinearForm, Monomial, Polynomial, TruncatedLaurent, VarSet, expand_inverse_linear,
                               parse_polynomial, poly_arith, residue_varset, substitute)

CHART = VarSet(["t", "b12", "b13", "b22", "b23", "b33"])
RV2 = VarSet(["z1", "z2"])


def P(s, v=CHART):
    return Polynomial.parse(s, v)


def test_additive_identity():
    assert poly_arith(P("b22*b33"), Polynomial.zero(CHART), "add") == P("b22*b33")


def test_difference_of_squares():
    a, b = P("z1-z2", RV2), P("z1+z2", RV2)
    assert poly_arith(a, b, "mul") == P("z1^2-z2^2", RV2)


def test_wedge_coefficient_product():
    assert P("t") * P("b23-b12*b22") == P("t*b23-t*b12*b22")


def test_substitute_chart_map():
    assert substitute(P("b33"), {"b33": P("t*b33")}) == P("t*b33")
    assert substitute(P("t^3"), {"t": P("t*b22")}) == P("t^3*b22^3")


def test_substitute_identity():
    p = P("t^2*b12 - 3*b23 + 1/2")
    assert substitute(p, {}) == p
    assert substitute(p, {n: P(n) for n in CHART.names}) == p


def test_parse_round_trip():
    p = P("2*t^2*b12 - b23*b33 + 5/3")
    assert P(p.to_text()) == p
    assert parse_polynomial(p.to_text(), CHART) == p


def test_rational_coefficients_stay_exact():
    p = P("1/3*t") * P("3/2*t")
    assert p == P("1/2*t^2")
    assert p.terms[(2, 0, 0, 0, 0, 0)] == Fraction(1, 2)


def test_varset_mismatch_rejected():
    with pytest.raises(ValueError):
        P("t") + P("z1", RV2)


def test_monomial_divides():
    a = Monomial.from_dict(CHART, {"t": 1})
    b = Monomial.from_dict(CHART, {"t": 2, "b22": 1})
    assert a.divides(b) and not b.divides(a)


def test_linear_form_parse():
    rv = residue_varset(3)
    L = LinearForm.parse("z+z3-2z1", rv)
    assert L.coefficient("z") == 1 and L.coefficient("z1") == -2 and L.coefficient("z3") == 1
    assert LinearForm.parse(L.to_text(), rv) == L


def _times_back(L, series, order, bound):
    """(L * series) restricted to the window where the truncation is exact."""
    prod = series * L.to_polynomial(order)
    q = L.head_index()
    return {e: c for e, c in prod.terms.items() if e[q] >= bound + 1}


def test_inverse_of_head_variable():
    rv = residue_varset(3)
    s = expand_inverse_linear(LinearForm.var(rv, "z"), rv, -6)
    assert s.terms == {(0, 0, 0, -1): 1}


def test_inverse_first_terms():
    # 1/(2z1 - z2) = -1/z2 - 2z1/z2^2 - 4z1^2/z2^3 - ...
    L = LinearForm.parse("2z1-z2", RV2)
    s = expand_inverse_linear(L, RV2, -3)
    assert s.coefficient((0, -1)) == -1
    assert s.coefficient((1, -2)) == -2
    assert s.coefficient((2, -3)) == -4
    assert _times_back(L, s, RV2, -3) == {(0, 0): 1}


def test_inverse_expansion_term():
    # 1/(z + z3 - 2z1) = 1/z + (2z1 - z3)/z^2 + ...
    rv = residue_varset(3)
    s = expand_inverse_linear(LinearForm.parse("z+z3-2z1", rv), rv, -2)
    assert s.coefficient((0, 0, 0, -1)) == 1
    assert s.coefficient((1, 0, 0, -2)) == 2
    assert s.coefficient((0, 0, 1, -2)) == -1


def test_inverse_of_zero_rejected():
    with pytest.raises(ValueError):
        expand_inverse_linear(LinearForm(RV2, (0, 0)), RV2, -3)


forms = st.lists(st.integers(-4, 4), min_size=4, max_size=4).filter(lambda c: any(c))


@settings(max_examples=50, deadline=None, derandomize=True)
@given(forms, st.integers(-6, -1))
def test_inverse_multiplied_back_is_one(coeffs, bound):
    rv = residue_varset(3)
    L = LinearForm(rv, coeffs)
    s = expand_inverse_linear(L, rv, bound)
    assert isinstance(s, TruncatedLaurent)
    assert _times_back(L, s, rv, bound) == {rv.zero(): 1}
