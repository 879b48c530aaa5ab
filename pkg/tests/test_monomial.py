import itertools

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from thompoly.exactalg import LinearForm, Monomial, Polynomial, VarSet
from thompoly.monomial import (MonomialIdeal, codimension, irreducible_decomposition, minimal_primes, minimalize,
                               multidegree, multiplicity)

CHART = VarSet(["t", "b12", "b13", "b22", "b23", "b33"])
XYZ = VarSet(["x", "y", "z"])


def ideal(text, v=CHART):
    return MonomialIdeal.of_polynomials([Polynomial.parse(s, v) for s in text.split()])


def test_minimalize_keeps_minimal_set():
    I = ideal("t^3 t^2*b22 t*b22^2")
    assert I.to_text() == ideal("t^3 t^2*b22 t*b22^2").to_text()
    assert len(I.gens) == 3


def test_minimalize_drops_multiples():
    gens = [Monomial.from_dict(CHART, {"t": 1}), Monomial.from_dict(CHART, {"t": 2})]
    assert minimalize(gens).gens == ideal("t").gens


def test_k3_first_chart_after_dividing_by_t():
    before = ideal("t*b22*b33 t^2*b33 t*b22^2 t*b23 t*b12*b22 t^2*b22 t^3")
    after = ideal("b22*b33 t*b33 b22^2 b23 b12*b22 t*b22 t^2")
    shifted = MonomialIdeal(CHART, [(e[0] - 1,) + e[1:] for e in before.gens])
    assert shifted.gens == after.gens


def test_k3_root_decomposition():
    I = ideal("b22*b33 b33*t b22^2*t b23*t b12*b22*t b22*t^2 t^3")
    comps = irreducible_decomposition(I)
    assert [c.to_text() for c in comps] == ["(t,b22)", "(t,b33)", "(t^3,b22,b23,b33)", "(t^2,b12,b22^2,b23,b33)"]
    assert [c.minimal for c in comps] == [True, True, False, False]
    assert minimal_primes(I) == [("t", "b22"), ("t", "b33")]
    assert codimension(I) == 2


def test_single_variable_decomposition():
    comps = irreducible_decomposition(ideal("x", XYZ))
    assert [c.to_text() for c in comps] == ["(x)"]


def test_unit_ideal_rejected():
    with pytest.raises(ValueError):
        irreducible_decomposition(MonomialIdeal(XYZ, [(0, 0, 0)]))


def test_multiplicity_small_cases():
    assert multiplicity(["x"], ideal("x^2", XYZ)) == 2
    assert multiplicity(["x"], ideal("x*y", XYZ)) == 1


def _lattice_multiplicity(gens, cluster, width, top=12):
    """Standard monomials in the cluster variables, the other variables inverted."""
    big = [top] * width
    count = 0
    for a in itertools.product(range(top), repeat=len(cluster)):
        p = list(big)
        for i, x in zip(cluster, a):
            p[i] = x
        count += not oracles.in_ideal(gens, p)
    return count


def test_multiplicity_against_lattice_count():
    I = ideal("x^2 x*y y^3", XYZ)
    assert multiplicity(["x", "y"], I) == _lattice_multiplicity(I.gens, [0, 1], 3) == 4


def test_multidegree():
    rv = VarSet(["e1", "e2", "e3"])
    w = {n: LinearForm.var(rv, e) for n, e in zip("xyz", rv.names)}
    assert multidegree(ideal("x", XYZ), w) == Polynomial.parse("e1", rv)
    assert multidegree(ideal("x^2", XYZ), w) == Polynomial.parse("2*e1", rv)
    assert multidegree(ideal("x*y x*z", XYZ), w) == Polynomial.parse("e1", rv)


def random_ideals():
    """(width, generators): at most 5 variables, 6 generators, exponents at most 3."""
    row = st.lists(st.integers(0, 3), min_size=5, max_size=5).filter(any)
    return st.integers(1, 5).flatmap(
        lambda w: st.lists(row.map(lambda r: tuple(r[:w])).filter(any), min_size=1, max_size=6).map(
            lambda gens: (w, gens)))


@settings(max_examples=30, deadline=None, derandomize=True)
@given(random_ideals())
def test_decomposition_matches_lattice_oracle(case):
    width, gens = case
    names = VarSet([f"x{i}" for i in range(width)])
    I = MonomialIdeal(names, gens)
    comps = irreducible_decomposition(I)
    index = {n: i for i, n in enumerate(names.names)}
    parts = [{index[n]: a for n, a in c.exponents} for c in comps]
    # the box must reach past every generator exponent so that membership is decided inside it
    assert oracles.ideal_equal_on_box(I.gens, parts, width, 4)
    # irredundant: dropping any component changes the intersection
    for j in range(len(parts)):
        rest = parts[:j] + parts[j + 1:]
        assert not oracles.ideal_equal_on_box(I.gens, rest, width, 4)
    assert sorted(tuple(index[n] for n in p) for p in minimal_primes(I)) == oracles.brute_minimal_primes(I.gens, width)
