"""Independent reference computations, sharing no code with the engine.

Residues expand at infinity by geometric series in w = 1/v; monomial decomposition uses an
exhaustive lattice scan; Laurent expansion of 1/L is checked by multiplying
back.
"""

from __future__ import annotations

import itertools
from functools import reduce

import sympy as sp


def residue_at_infinity(numer, factors, v):
    """Res_{v=oo} numer / prod(factors) dv by the substitution w = 1/v.

    numer is a Laurent polynomial in v (sympy expression); factors are sympy
    linear expressions.  F(1/w) w^-2 is expanded as a power series in w with
    truncated products, and minus its w^-1 coefficient is returned together
    with the factors free of v.
    """
    w = sp.Dummy("w")
    inside = [f for f in factors if sp.diff(f, v) != 0]
    rest = [f for f in factors if sp.diff(f, v) == 0]
    num = sp.expand(numer)
    pv = sp.Poly(sp.expand(num * v ** _neg_degree(num, v)), v)
    shift = _neg_degree(num, v)
    M = pv.degree()
    m = len(inside)
    # F(1/w) w^-2 = w^(m - M - 2) * Ptilde(w) * prod 1/(a + r w), with Ptilde(w) = w^M P(1/w)
    need = M + 1 - m - shift
    if need < 0:
        return sp.Integer(0), rest
    ptilde = sum(c * w ** (M - e[0]) for e, c in pv.terms())
    series = sp.expand(ptilde)
    for f in inside:
        a = sp.diff(f, v)
        r = sp.expand(f - a * v)
        inv = sum((-r) ** j * w ** j / a ** (j + 1) for j in range(need + 1))
        series = _truncate(sp.expand(series * inv), w, need)
    coeff = sp.expand(series).coeff(w, need)
    return sp.expand(-coeff), rest


def _neg_degree(expr, v):
    """Largest power of 1/v in a Laurent polynomial."""
    low = 0
    for term in sp.Add.make_args(sp.expand(expr)):
        e = sp.degree(term * v ** 1000, v) - 1000 if term.has(v) else 0
        low = min(low, e)
    return -low


def _truncate(expr, w, n):
    return sum(expr.coeff(w, j) * w ** j for j in range(n + 1))


def iterated_residue(numer, factors, order):
    """Residues over ``order``, innermost (last) variable first."""
    for v in reversed(order):
        numer, factors = residue_at_infinity(numer, factors, v)
        if numer == 0:
            return sp.Integer(0)
    assert not factors
    return sp.expand(numer)


def chern_product(zs, D: int):
    cs = sp.symbols(f"c1:{D + 1}")
    return sp.Mul(*[1 + sum(c / z**j for j, c in enumerate(cs, 1)) for z in zs]), cs


def orientation_sign() -> int:
    """Sign making the one-variable formula Res z1^0 c(1/z1) equal to +c1 (Porteous at k=1)."""
    z1 = sp.Symbol("z1")
    chern, cs = chern_product((z1,), 1)
    val = iterated_residue(chern, [], [z1])
    return 1 if val == cs[0] else -1


def printed_k3(codim: int):
    """Tp_3 from the printed one-term k=3 formula at codim d, with (z1 z2 z3)^d inserted."""
    z1, z2, z3 = sp.symbols("z1 z2 z3")
    num = (z1 - z2) * (z1 - z3) * (z2 - z3) * (z1 * z2 * z3) ** codim
    den = [2 * z1 - z2, 2 * z1 - z3, z1 + z2 - z3]
    chern, cs = chern_product((z1, z2, z3), 3 * (codim + 1))
    out = orientation_sign() * iterated_residue(num * chern, den, [z1, z2, z3])
    return sp.Poly(out, *cs), cs


def tp_to_dict(poly, cs):
    """{sorted index tuple: coefficient} from a sympy Poly in c1.. cD."""
    out = {}
    for monom, coeff in poly.terms():
        key = tuple(sorted(i + 1 for i, e in enumerate(monom) for _ in range(e)))
        out[key] = int(coeff) if coeff == int(coeff) else sp.Rational(coeff)
    return out


# ---------------------------------------------------------------------------
# monomial ideals


def lattice_points(width: int, top: int):
    return itertools.product(range(top + 1), repeat=width)


def in_ideal(gens, point) -> bool:
    return any(all(p >= g for p, g in zip(point, gen)) for gen in gens)


def in_irreducible(component, point) -> bool:
    """component: {index: exponent}, the ideal generated by x_i^a_i."""
    return any(point[i] >= a for i, a in component.items())


def ideal_equal_on_box(gens, components, width: int, top: int) -> bool:
    """I equals the intersection of the components at every lattice point of the box [0, top]^width."""
    return all(in_ideal(gens, p) == all(in_irreducible(c, p) for c in components)
               for p in lattice_points(width, top))


def brute_minimal_primes(gens, width: int):
    """Minimal sets of variables meeting every generator's support."""
    supports = [frozenset(i for i, e in enumerate(g) if e) for g in gens]
    covers = [frozenset(s) for r in range(width + 1) for s in itertools.combinations(range(width), r)
              if all(sup & frozenset(s) for sup in supports)]
    return sorted(tuple(sorted(c)) for c in covers if not any(o < c for o in covers))


def lcm_exponents(gens):
    return reduce(lambda a, b: tuple(max(x, y) for x, y in zip(a, b)), gens)
