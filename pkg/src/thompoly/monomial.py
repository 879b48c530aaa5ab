"""Monomial ideals: minimal generators, irreducible decomposition, multidegrees."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from . import kernels
from .exactalg import Exps, LinearForm, Monomial, Polynomial, VarSet, grlex_key

WeightAssignment = Dict[str, LinearForm]


def _minimal_exps(rows: Iterable[Exps], width: int) -> Tuple[Exps, ...]:
    rows = list(dict.fromkeys(tuple(r) for r in rows))
    if not rows:
        return ()
    mat = kernels.as_matrix(rows, width)
    keep = kernels.minimal_mask(mat)
    out = [rows[i] for i in range(len(rows)) if keep[i]]
    return tuple(sorted(out, key=grlex_key))


class MonomialIdeal:
    """Ideal generated by monomials, stored by its minimal generators."""

    __slots__ = ("vars", "gens")

    def __init__(self, vars: VarSet, gens: Iterable[Sequence[int]]):
        self.vars = vars
        rows = []
        for g in gens:
            e = g.exps if isinstance(g, Monomial) else tuple(int(x) for x in g)
            if any(x < 0 for x in e):
                raise ValueError("monomial ideal generators need non-negative exponents")
            rows.append(e)
        self.gens = _minimal_exps(rows, len(vars))

    @classmethod
    def of_polynomials(cls, polys: Iterable[Polynomial]) -> "MonomialIdeal":
        polys = list(polys)
        vars = polys[0].vars
        return cls(vars, [e for p in polys for e in p.terms])

    def generators(self) -> List[Monomial]:
        return [Monomial(self.vars, g) for g in self.gens]

    def is_unit(self) -> bool:
        return any(not any(g) for g in self.gens)

    def is_zero(self) -> bool:
        return not self.gens

    def contains(self, exps: Sequence[int]) -> bool:
        e = tuple(exps)
        return any(all(a <= b for a, b in zip(g, e)) for g in self.gens)

    def contains_many(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=np.int64).reshape(-1, len(self.vars))
        return kernels.divisible_by_any(kernels.as_matrix(list(self.gens), len(self.vars)), pts)

    def __eq__(self, other) -> bool:
        return isinstance(other, MonomialIdeal) and self.vars == other.vars and self.gens == other.gens

    def __hash__(self) -> int:
        return hash((self.vars, self.gens))

    def to_text(self) -> str:
        return "(" + ", ".join(str(m) for m in self.generators()) + ")"

    __repr__ = to_text


def minimalize(gens: Iterable[Monomial], vars: Optional[VarSet] = None) -> MonomialIdeal:
    gens = list(gens)
    if vars is None:
        if not gens:
            raise ValueError("need a VarSet for an empty generator list")
        vars = gens[0].vars
    return MonomialIdeal(vars, gens)


@dataclass(frozen=True)
class PrimaryComponent:
    """Irreducible component (x_i^{a_i} : i in cluster)."""

    cluster: Tuple[str, ...]
    exponents: Tuple[Tuple[str, int], ...]
    multiplicity: Optional[int] = None
    minimal: bool = True

    @property
    def reduced(self) -> bool:
        return all(a == 1 for _, a in self.exponents)

    @property
    def codim(self) -> int:
        return len(self.cluster)

    def exponent(self, name: str) -> int:
        return dict(self.exponents)[name]

    def to_text(self) -> str:
        return "(" + ",".join(n if a == 1 else f"{n}^{a}" for n, a in self.exponents) + ")"

    def __repr__(self) -> str:
        return self.to_text()


def _split(gens: Tuple[Exps, ...], width: int, memo: dict) -> Tuple[Tuple[Tuple[int, int], ...], ...]:
    """Irreducible components of a minimal generator set, as ((var, exp), ...) tuples."""
    key = gens
    hit = memo.get(key)
    if hit is not None:
        return hit
    pivot = None
    best = -1
    for g in gens:
        supp = [i for i in range(width) if g[i]]
        if len(supp) > 1:
            # split on the variable shared with most other generators
            for i in supp:
                score = sum(1 for h in gens if h[i])
                if score > best:
                    best, pivot = score, (g, i)
    if pivot is None:
        comp = tuple(sorted((i for g in gens for i in range(width) if g[i]), key=int))
        result = (tuple((i, next(g[i] for g in gens if g[i])) for i in comp),)
        memo[key] = result
        return result
    g, i = pivot
    rest = [h for h in gens if h != g]
    power = tuple(g[i] if j == i else 0 for j in range(width))
    cofactor = tuple(0 if j == i else g[j] for j in range(width))
    parts = []
    for extra in (power, cofactor):
        parts.extend(_split(_minimal_exps(rest + [extra], width), width, memo))
    result = _irredundant(parts)
    memo[key] = result
    return result


def _contained(a, b) -> bool:
    """Irreducible ideal a is inside irreducible ideal b."""
    db = dict(b)
    return all(i in db and db[i] <= e for i, e in a)


def _irredundant(parts):
    parts = list(dict.fromkeys(parts))
    keep = []
    for p in parts:
        if any(q != p and _contained(q, p) for q in parts):
            continue
        keep.append(p)
    return tuple(sorted(keep, key=lambda p: (len(p), tuple(i for i, _ in p), tuple(e for _, e in p))))


def irreducible_decomposition(I: MonomialIdeal, with_multiplicity: bool = True) -> List[PrimaryComponent]:
    """Irredundant decomposition into ideals generated by pure powers.

    Components are ordered by (size, variable order, exponents).  Minimal
    primes are flagged and, when requested, carry their multiplicity.
    """
    if I.is_unit():
        raise ValueError("the unit ideal has no irreducible decomposition")
    if I.is_zero():
        return []
    width = len(I.vars)
    raw = _split(I.gens, width, {})
    clusters = {tuple(i for i, _ in p) for p in raw}
    out = []
    names = I.vars.names
    for p in raw:
        cl = tuple(i for i, _ in p)
        is_min = not any(set(o) < set(cl) for o in clusters)
        mult = multiplicity([names[i] for i in cl], I) if (with_multiplicity and is_min) else None
        out.append(PrimaryComponent(tuple(names[i] for i in cl), tuple((names[i], e) for i, e in p), mult, is_min))
    return out


def intersect_components(vars: VarSet, comps: Sequence[PrimaryComponent]) -> MonomialIdeal:
    """Intersection of irreducible ideals (lcm of one generator from each)."""
    if not comps:
        return MonomialIdeal(vars, [vars.zero()])
    gens = [vars.zero()]
    for c in comps:
        new = []
        for g in gens:
            for n, a in c.exponents:
                i = vars.index(n)
                e = list(g)
                e[i] = max(e[i], a)
                new.append(tuple(e))
        gens = list(MonomialIdeal(vars, new).gens)
    return MonomialIdeal(vars, gens)


def multiplicity(cluster: Sequence[str], I: MonomialIdeal) -> int:
    """Number of monomials a on the cluster with y^(a+b) outside I for every b off the cluster."""
    idx = [I.vars.index(n) for n in cluster]
    if any(all(g[i] == 0 for i in idx) for g in I.gens):
        raise ValueError(f"cluster {tuple(cluster)} does not contain the ideal {I}")
    # y^(a+b) in I for some b off the cluster  <=>  a lies in the projected ideal
    proj = [tuple(g[i] for i in idx) for g in I.gens]
    for pos in range(len(idx)):
        if not any(p[pos] and all(p[j] == 0 for j in range(len(idx)) if j != pos) for p in proj):
            raise ValueError(f"cluster {tuple(cluster)} is not a minimal prime of {I}")
    box = [max(p[pos] for p in proj) for pos in range(len(idx))]
    proj_ideal = MonomialIdeal(VarSet(cluster), proj)
    count = 0
    for a in itertools.product(*(range(b) for b in box)):
        if not proj_ideal.contains(a):
            count += 1
    return count


def codimension(I: MonomialIdeal) -> int:
    comps = irreducible_decomposition(I, with_multiplicity=False)
    return min(c.codim for c in comps if c.minimal)


def multidegree(I: MonomialIdeal, w: Mapping[str, LinearForm]) -> Polynomial:
    """Sum over codimension-s minimal primes of multiplicity times the product of weights."""
    if I.is_unit():
        raise ValueError("unit ideal has no multidegree")
    comps = [c for c in irreducible_decomposition(I) if c.minimal]
    s = min(c.codim for c in comps)
    rvars = next(iter(w.values())).vars
    total = Polynomial.zero(rvars)
    for c in comps:
        if c.codim != s:
            continue
        term = Polynomial.constant(rvars, c.multiplicity)
        for n in c.cluster:
            term = term * w[n].to_polynomial()
        total = total + term
    return total


def minimal_primes(I: MonomialIdeal) -> List[Tuple[str, ...]]:
    """Minimal primes as variable clusters: the minimal vertex covers of the generator supports."""
    if I.is_unit():
        raise ValueError("the unit ideal has no minimal primes")
    width = len(I.vars)
    supports = {frozenset(i for i in range(width) if g[i]) for g in I.gens}
    supports = [s for s in supports if not any(o < s for o in supports)]
    supports.sort(key=len)
    found: List[frozenset] = []

    def grow(chosen: frozenset, banned: frozenset):
        if any(f <= chosen for f in found):
            return
        open_sets = [s for s in supports if not (s & chosen)]
        if not open_sets:
            found.append(chosen)
            return
        pick = min(open_sets, key=lambda s: len(s - banned))
        later = set(banned)
        for i in sorted(pick - banned):
            grow(chosen | {i}, frozenset(later))
            later.add(i)

    grow(frozenset(), frozenset())
    minimal = [f for f in found if not any(o < f for o in found)]
    names = I.vars.names
    out = {tuple(names[i] for i in sorted(f)) for f in minimal}
    return sorted(out, key=lambda c: (len(c), [I.vars.index(n) for n in c]))


def reduced_minimal_components(I: MonomialIdeal) -> List[PrimaryComponent]:
    """Minimal primes whose primary component is the prime itself (every variable occurs to power one)."""
    out = []
    for cl in minimal_primes(I):
        idx = [I.vars.index(n) for n in cl]
        proj = [tuple(g[i] for i in idx) for g in I.gens]
        ok = all(any(p[pos] == 1 and all(p[j] == 0 for j in range(len(idx)) if j != pos) for p in proj)
                 for pos in range(len(idx)))
        if ok:
            out.append(PrimaryComponent(cl, tuple((n, 1) for n in cl), None, True))
    return out
