"""Iterated residues at infinity and Thom polynomials in Chern symbols.

A residue term is a numerator polynomial in z1..zk, z over a product of
linear forms, times prod_i c(1/z_i) with c(u) = 1 + c1 u + c2 u^2 + ...
Residues are taken one variable at a time from the outermost (z) inwards.
For a variable v, every factor still containing v has v as its head, and

    Res_{v=oo} N(v) / prod_i (a_i v + h_i) dv
        = - (1/prod a_i) sum_e N_e (-1)^J h_J(h_1/a_1, ..., h_m/a_m),   J = e - m + 1,

where N_e is the coefficient of v^e and h_J the complete homogeneous
symmetric polynomial.  The leading minus sign is the orientation
Res_{v=oo} dv/v = -1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial, gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .exactalg import LinearForm, Polynomial, VarSet, normalize_scalar, residue_varset


class ResidueError(Exception):
    """A residue cannot be evaluated (zero factor, truncation too small, ...)."""


def chern_names(D: int) -> List[str]:
    return [f"c{j}" for j in range(1, D + 1)]


# ---------------------------------------------------------------------------
# Thom polynomials


class ThomPolynomial:
    """Integer (or rational) combination of Chern monomials c_{j1} ... c_{jr}.

    Monomials are stored as sorted tuples of indices, e.g. (1, 1, 2) for c1^2*c2.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[Tuple[int, ...], object]] = None):
        clean = {}
        for m, c in (terms or {}).items():
            c = normalize_scalar(c)
            if c:
                clean[tuple(sorted(m))] = clean.get(tuple(sorted(m)), 0) + c
        self.terms = {m: c for m, c in clean.items() if c}

    @classmethod
    def from_polynomial(cls, p: Polynomial) -> "ThomPolynomial":
        names = p.vars.names
        out: Dict[Tuple[int, ...], object] = {}
        for e, c in p.terms.items():
            mono = []
            for n, x in zip(names, e):
                if not x:
                    continue
                if not n.startswith("c"):
                    raise ResidueError(f"residue variable {n} survived the residue")
                mono.extend([int(n[1:])] * x)
            key = tuple(sorted(mono))
            out[key] = out.get(key, 0) + c
        return cls(out)

    def __add__(self, other: "ThomPolynomial") -> "ThomPolynomial":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return ThomPolynomial(out)

    def __neg__(self) -> "ThomPolynomial":
        return ThomPolynomial({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "ThomPolynomial") -> "ThomPolynomial":
        return self + (-other)

    def scale(self, s) -> "ThomPolynomial":
        return ThomPolynomial({m: c * s for m, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, ThomPolynomial) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def weights(self) -> set:
        return {sum(m) for m in self.terms}

    def is_homogeneous(self, weight: Optional[int] = None) -> bool:
        w = self.weights()
        if not w:
            return True
        return len(w) == 1 and (weight is None or w == {weight})

    def coefficient(self, monomial: Sequence[int]):
        return self.terms.get(tuple(sorted(monomial)), 0)

    def _sorted(self):
        # c1-power first, then c2, ...: c1^3, c1*c2, c3
        top = max((max(m) for m in self.terms if m), default=0)

        def key(m):
            return tuple(-m.count(j) for j in range(1, top + 1))
        return sorted(self.terms.items(), key=lambda kv: key(kv[0]))

    @staticmethod
    def _mono_text(m: Tuple[int, ...], latex: bool = False) -> str:
        parts = []
        for j in sorted(set(m)):
            e = m.count(j)
            if latex:
                parts.append(f"c_{{{j}}}" + (f"^{{{e}}}" if e > 1 else ""))
            else:
                parts.append(f"c{j}" + (f"^{e}" if e > 1 else ""))
        return ("" if latex else "*").join(parts) if parts else "1"

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for m, c in self._sorted():
            s = f"{c}*{self._mono_text(m)}" if m else f"{c}"
            out.append(s)
        return " + ".join(out).replace("+ -", "- ")

    def to_latex(self) -> str:
        if not self.terms:
            return "0"
        out = ""
        for m, c in self._sorted():
            mag = abs(c)
            body = self._mono_text(m, latex=True)
            if m and mag == 1:
                piece = body
            elif isinstance(mag, Fraction):
                piece = f"\\frac{{{mag.numerator}}}{{{mag.denominator}}}" + (body if m else "")
            else:
                piece = f"{mag}" + (body if m else "")
            if not out:
                out = ("-" if c < 0 else "") + piece
            else:
                out += (" - " if c < 0 else " + ") + piece
        return out

    def to_dict(self) -> dict:
        return {"terms": [{"monomial": self._mono_text(m), "coefficient": str(c)} for m, c in self._sorted()]}

    def to_json(self, **extra) -> str:
        d = dict(extra)
        d.update(self.to_dict())
        return json.dumps(d, indent=2)

    def __repr__(self) -> str:
        return self.to_text()


# ---------------------------------------------------------------------------
# Chern series and residue terms


@dataclass(frozen=True)
class ChernSeries:
    """1 + c1 u + ... + cD u^D with u = 1/v, as a Laurent polynomial in v."""

    D: int

    def in_variable(self, ring: VarSet, v: str) -> Polynomial:
        terms = {ring.zero(): 1}
        for j in range(1, self.D + 1):
            e = list(ring.unit(f"c{j}"))
            e[ring.index(v)] = -j
            terms[tuple(e)] = 1
        return Polynomial(ring, terms)


@dataclass
class ResidueTerm:
    """numerator / prod(denominators), optionally times prod_i c(1/z_i)."""

    numerator: Polynomial
    denominators: List[LinearForm]
    chern: bool = True
    label: str = ""

    @property
    def vars(self) -> VarSet:
        return self.numerator.vars

    def chern_weight(self) -> int:
        """Chern weight forced by homogeneity when the numerator is homogeneous."""
        degs = {sum(e) for e in self.numerator.terms}
        if len(degs) != 1:
            raise ResidueError("numerator is not homogeneous")
        return degs.pop() - len(self.denominators) + len(self.vars)

    def to_latex(self) -> str:
        num = _latex_factor_text(self.numerator.pretty())
        den = "".join(f"({_latex_form(L)})" for L in self.denominators)
        return f"\\frac{{{num}}}{{{den}}}"


def _latex_form(L: LinearForm) -> str:
    s = L.to_text()
    out = ""
    i = 0
    while i < len(s):
        ch = s[i]
        if ch == "z":
            j = i + 1
            while j < len(s) and s[j].isdigit():
                j += 1
            idx = s[i + 1:j]
            out += f"z_{{{idx}}}" if idx else "z"
            i = j
        else:
            out += ch
            i += 1
    return out


def _latex_factor_text(text: str) -> str:
    return text.replace("*", " ").replace("^", "^")


def leaf_term(k: int, euler: Sequence[LinearForm], codim: int) -> ResidueTerm:
    """(k-1)! z^(k-1) (z1...zk)^codim prod_{i<j}(z_i - z_j) / prod(euler)."""
    rv = residue_varset(k)
    num = Polynomial.constant(rv, factorial(k - 1)) * Polynomial.var(rv, "z", k - 1)
    num = num * vandermonde(rv, k)
    if codim:
        num = num * Polynomial.monomial(rv, [codim] * k + [0])
    return ResidueTerm(num, list(euler))


def vandermonde(rv: VarSet, k: int) -> Polynomial:
    out = Polynomial.constant(rv, 1)
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            out = out * (Polynomial.var(rv, f"z{i}") - Polynomial.var(rv, f"z{j}"))
    return out


# ---------------------------------------------------------------------------
# one residue step


def _complete_homogeneous(us: Sequence[Polynomial], top: int, one: Polynomial) -> List[Polynomial]:
    """h_0..h_top of the given polynomials."""
    h = [one] + [one * 0 for _ in range(top)]
    for u in us:
        for j in range(1, top + 1):
            h[j] = h[j] + u * h[j - 1]
    return h


def residue_at_infinity(numer: Polynomial, factors: Sequence[LinearForm], var: str,
                        oriented: bool = True) -> Tuple[Polynomial, List[LinearForm]]:
    """Res_{var=oo} of numer / prod(factors) d var, for var the outermost variable left.

    Returns the new numerator and the factors not containing ``var``.  With
    ``oriented=False`` the plain coefficient of var^-1 is returned instead.
    """
    ring = numer.vars
    vi = ring.index(var)
    inside, rest = [], []
    for L in factors:
        if L.is_zero():
            raise ResidueError("a denominator factor is identically zero")
        if L.coefficient(var) if var in L.vars else 0:
            if L.head() != var:
                raise ResidueError(f"factor {L.to_text()} contains {var} below its head")
            inside.append(L)
        else:
            rest.append(L)
    m = len(inside)
    scale = Fraction(1)
    us = []
    for L in inside:
        a = L.coefficient(var)
        scale /= a
        h = L.to_polynomial(ring) - Polynomial.var(ring, var) * a
        us.append(h * Fraction(1, a))
    by_exp: Dict[int, Dict[tuple, object]] = {}
    for e, c in numer.terms.items():
        x = e[vi]
        if x - m + 1 < 0:
            continue
        ee = e[:vi] + (0,) + e[vi + 1:]
        by_exp.setdefault(x, {})[ee] = c
    if not by_exp:
        return Polynomial.zero(ring), rest
    top = max(by_exp) - m + 1
    one = Polynomial.constant(ring, 1)
    h = _complete_homogeneous(us, top, one)
    out = Polynomial.zero(ring)
    for x, terms in sorted(by_exp.items()):
        J = x - m + 1
        part = Polynomial(ring, terms, _trusted=True) * h[J]
        out = out + (part if J % 2 == 0 else -part)
    out = out * (scale if not oriented else -scale)
    return out, rest


def _prune_chern(p: Polynomial, cidx: Sequence[Tuple[int, int]], budget: int) -> Polynomial:
    if budget is None:
        return p
    keep = {}
    for e, c in p.terms.items():
        if sum(e[i] * w for i, w in cidx) <= budget:
            keep[e] = c
    return Polynomial(p.vars, keep, _trusted=True)


def iterated_residue(term: ResidueTerm, D: Optional[int] = None, order: Optional[Sequence[str]] = None) -> ThomPolynomial:
    """Res_{z1=oo} ... Res_{zk=oo} Res_{z=oo} of the term, outermost variable first.

    ``order`` lists the variables from innermost to outermost (default: the
    term's VarSet order z1 < ... < zk < z).  ``D`` is the Chern truncation;
    by default the weight forced by homogeneity.
    """
    rv = term.vars
    order = list(order or rv.names)
    if sorted(order) != sorted(rv.names):
        raise ResidueError("order must list every residue variable once")
    if term.chern:
        need = term.chern_weight() if term.numerator else 0
        if D is None:
            D = max(need, 0)
        elif D < need:
            raise ResidueError(f"Chern truncation {D} is below the required weight {need}")
    else:
        D = 0
        need = None
    # reorder the ring so that the elimination order matches the VarSet order
    ring = VarSet(order + chern_names(D))
    numer = term.numerator.reembed(ring)
    factors = [LinearForm.from_dict(ring, {n: a for n, a in zip(rv.names, L.coeffs) if a}) for L in term.denominators]
    cidx = [(ring.index(f"c{j}"), j) for j in range(1, D + 1)]
    series = ChernSeries(D)
    for v in reversed(order):
        if term.chern and v != "z":
            numer = _prune_chern(numer * series.in_variable(ring, v), cidx, need)
        numer, factors = residue_at_infinity(numer, factors, v)
        if not numer:
            return ThomPolynomial()
    if factors:
        raise ResidueError("factors left after the last residue")
    return ThomPolynomial.from_polynomial(numer)


# ---------------------------------------------------------------------------
# vanishing by degree


def _cancel_single_variable(p: Polynomial, q: Sequence[LinearForm]) -> Tuple[Polynomial, List[LinearForm]]:
    """Cancel factors a*v of q against powers of v dividing p."""
    content = list(p.content_exponents()) if p else [0] * len(p.vars)
    out = []
    scale = Fraction(1)
    for L in q:
        nz = [i for i, a in enumerate(L.coeffs) if a]
        if len(nz) == 1 and content[nz[0]] > 0:
            content[nz[0]] -= 1
            scale /= L.coeffs[nz[0]]
            continue
        out.append(L)
    used = [a - b for a, b in zip(p.content_exponents(), content)] if p else [0] * len(p.vars)
    return p.shift(tuple(-x for x in used)) * scale, out


def vanishing_test(p: Polynomial, q: Sequence[LinearForm], suffix: int) -> bool:
    """True when the degree count certifies that the iterated residue of p/prod(q) is zero.

    The last ``suffix`` variables of the order are the outermost ones.  After
    cancelling monomial factors, the residue in them vanishes if no factor
    involves them (a polynomial has no residue at infinity) or if the joint
    degree of p in them plus ``suffix`` is smaller than the number of factors
    involving them.  False means "not certified".
    """
    if not p:
        return True
    p, q = _cancel_single_variable(p, q)
    names = p.vars.names
    outer = set(range(len(names) - suffix, len(names)))
    q_out = [L for L in q if any(L.coeffs[i] for i in outer)]
    if not q_out:
        return all(all(e[i] >= 0 for i in outer) for e in p.terms)
    deg = max(sum(e[i] for i in outer) for e in p.terms)
    return deg + suffix < len(q_out)


def vanishes_by_degree(p: Polynomial, q: Sequence[LinearForm]) -> bool:
    return any(vanishing_test(p, q, l) for l in range(1, len(p.vars) + 1))


# ---------------------------------------------------------------------------
# rational identities


def primitive_form(L: LinearForm) -> Tuple[int, LinearForm]:
    """L = scalar * primitive form, the primitive form having coprime coefficients and positive head."""
    g = 0
    for a in L.coeffs:
        g = gcd(g, abs(a))
    g = gcd(g, abs(L.constant)) if L.constant else g
    if g == 0:
        raise ResidueError("zero linear form")
    sign, M = L.canonical()
    return sign * g, LinearForm(L.vars, [a // g for a in M.coeffs], M.constant // g)


RationalTerm = Tuple[Polynomial, Sequence[LinearForm]]


_PACK = 1 << 12


def _pack(e) -> int:
    return sum(x * _PACK ** i for i, x in enumerate(e))


def _unpack(key: int, n: int) -> tuple:
    out = []
    for _ in range(n):
        key, r = divmod(key, _PACK)
        out.append(r)
    return tuple(out)


def _times_linear(terms: Dict[int, int], shifts: Sequence[Tuple[int, int]]) -> Dict[int, int]:
    out: Dict[int, int] = {}
    get = out.get
    for key, c in terms.items():
        for sh, a in shifts:
            k2 = key + sh
            out[k2] = get(k2, 0) + a * c
    return {key: c for key, c in out.items() if c}


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def clear_denominators(terms: Iterable[RationalTerm]) -> Tuple[Polynomial, Dict[LinearForm, int]]:
    """Sum of the terms as numerator / lcm, returning (numerator, lcm multiplicities).

    The numerator is scaled by a positive integer so that it has integer
    coefficients; that does not change whether it vanishes.
    """
    terms = [(p, [primitive_form(L) for L in q]) for p, q in terms]
    if not terms:
        raise ValueError("no terms")
    ring = terms[0][0].vars
    lcm: Dict[LinearForm, int] = {}
    for p, q in terms:
        if p.vars != ring:
            raise ValueError("terms live over different variable sets")
        if any(x < 0 for e in p.terms for x in e):
            raise ValueError("numerators must be polynomials")
        mult: Dict[LinearForm, int] = {}
        for _, M in q:
            if M.constant:
                raise ValueError("affine forms are not supported here")
            mult[M] = mult.get(M, 0) + 1
        for M, n in mult.items():
            lcm[M] = max(lcm.get(M, 0), n)
    scaled = []
    common = 1
    for p, q in terms:
        s = 1
        for a, _ in q:
            s *= a
        coeffs = {e: Fraction(c) / s for e, c in p.terms.items()}
        for c in coeffs.values():
            common = _lcm(common, c.denominator)
        scaled.append((coeffs, q))
    total: Dict[int, int] = {}
    for coeffs, q in scaled:
        acc = {_pack(e): int(c * common) for e, c in coeffs.items()}
        mult = {}
        for _, M in q:
            mult[M] = mult.get(M, 0) + 1
        for M, n in lcm.items():
            shifts = [(_PACK ** i, a) for i, a in enumerate(M.coeffs) if a]
            for _ in range(n - mult.get(M, 0)):
                acc = _times_linear(acc, shifts)
        for key, c in acc.items():
            v = total.get(key, 0) + c
            if v:
                total[key] = v
            else:
                total.pop(key, None)
    n = len(ring)
    return Polynomial(ring, {_unpack(key, n): c for key, c in total.items()}), lcm


def rational_identity_check(lhs: Sequence[RationalTerm], rhs: Sequence[RationalTerm]) -> bool:
    """Exact equality of two sums of polynomial / product-of-linear-forms terms."""
    neg = [(-p, q) for p, q in rhs]
    total, _ = clear_denominators(list(lhs) + neg)
    return not total


def z_residue(term: RationalTerm, oriented: bool = False) -> RationalTerm:
    """The residue in the outermost variable z (plain z^-1 coefficient by default)."""
    p, q = term
    return residue_at_infinity(p, q, "z", oriented=oriented)


# ---------------------------------------------------------------------------
# Thom polynomials from trees


def parity_sign(k: int) -> int:
    """(-1)^k: negating every Euler factor and reversing the Vandermonde order together."""
    return -1 if k % 2 else 1


@lru_cache(maxsize=None)
def calibration_sign() -> int:
    """Global sign making the one-leaf k=1 computation equal to +c1."""
    from .blowup import build_tree
    tree = build_tree(1, "guided", [])
    leaf = tree.contributing_leaves()[0]
    tp = iterated_residue(leaf_term(1, leaf.euler, 0)).scale(parity_sign(1))
    if tp == ThomPolynomial({(1,): 1}):
        return 1
    if tp == ThomPolynomial({(1,): -1}):
        return -1
    raise ResidueError(f"k=1 calibration produced {tp}")


def result_sign(k: int) -> int:
    return parity_sign(k) * calibration_sign()


def leaf_terms(tree, codim: int) -> List[ResidueTerm]:
    out = []
    for i, leaf in enumerate(tree.contributing_leaves(), 1):
        t = leaf_term(tree.k, leaf.euler, codim)
        t.label = f"leaf {i}"
        out.append(t)
    return out


def thom_polynomial(k: int, codim: int, mode: str = "guided", path=None, D: Optional[int] = None,
                    tree=None) -> ThomPolynomial:
    """Sum of the iterated residues of all contributing leaves, with the calibrated sign."""
    if codim < 0:
        raise ValueError("codim must be non-negative")
    if tree is None:
        from .blowup import build_tree
        from .paths import golden_path
        if mode == "guided" and path is None:
            path = golden_path(k)
            if path is None:
                raise ResidueError(f"no packaged blow-up path for k={k}; pass one or use mode='auto'")
        tree = build_tree(k, mode, path if path != "" else [])
    total = ThomPolynomial()
    for t in leaf_terms(tree, codim):
        if vanishes_by_degree(t.numerator, t.denominators):
            continue
        total = total + iterated_residue(t, D)
    total = total.scale(result_sign(tree.k))
    if not total.is_homogeneous(k * (codim + 1)):
        raise ResidueError(f"result is not homogeneous of weight {k * (codim + 1)}")
    return total


def closed_formula_term(numerator: Polynomial, denominators: Sequence[LinearForm]) -> ResidueTerm:
    """A formula already reduced in z, lifted back as (numerator / z): Res_z then gives it back."""
    rv = numerator.vars
    return ResidueTerm(numerator, list(denominators) + [LinearForm.var(rv, "z")])


def evaluate_closed_formula(numerator: Polynomial, denominators: Sequence[LinearForm],
                            D: Optional[int] = None) -> ThomPolynomial:
    """Thom polynomial of a formula already reduced in z, with the same sign as thom_polynomial."""
    k = len(numerator.vars) - 1
    return iterated_residue(closed_formula_term(numerator, denominators), D).scale(result_sign(k))
