"""The test-curve map into the Grassmannian, written in Pluecker coordinates.

Chart coordinates are ``t`` and ``b_ij`` (1 <= i <= j <= k, (i, j) != (1, 1)).
With w_1 = e_1 and w_j = sum_{i<=j} b_ij e_i the map sends a point to

    e_1 ^ u_2 ^ ... ^ u_k,    u_r = sum_{partitions l of r} t^(len l - 1) w_l,

expanded in the basis of wedge products of monomials of Sym^{<=k} C^k.  A
monomial e_{p_1} ... e_{p_s} is stored as the partition (p_1 >= ... >= p_s),
and a basis vector as the sorted tuple of its k monomials.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from math import factorial
from typing import Dict, Iterator, List, Sequence, Tuple

from .exactalg import LinearForm, Polynomial, VarSet, residue_varset

Partition = Tuple[int, ...]
SemiPartition = Tuple[Partition, ...]

MAX_K = 7


def partitions(n: int, largest: int = None) -> Iterator[Partition]:
    """Partitions of n with parts in descending order."""
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for p in range(min(n, largest), 0, -1):
        for rest in partitions(n - p, p):
            yield (p,) + rest


def partition_key(p: Partition):
    """Basis order: by weighted degree, then more factors first, then lexicographic."""
    return (sum(p), -len(p), p)


def canonical_semipartition(monos: Sequence[Partition]) -> SemiPartition:
    return tuple(sorted((tuple(sorted(m, reverse=True)) for m in monos), key=partition_key))


def distinguished(k: int) -> SemiPartition:
    return tuple((r,) for r in range(1, k + 1))


def chart_variable_names(k: int) -> List[str]:
    names = ["t"]
    for i in range(1, k + 1):
        for j in range(i, k + 1):
            if (i, j) != (1, 1):
                names.append(f"b{i}{j}")
    return names


def beta_name(i: int, j: int) -> str:
    return "t" if (i, j) == (1, 1) else f"b{i}{j}"


def chart_varset(k: int) -> VarSet:
    return VarSet(chart_variable_names(k))


def _orderings(p: Partition) -> int:
    n = factorial(len(p))
    for m in Counter(p).values():
        n //= factorial(m)
    return n


def _sym_mul(a: Dict[Partition, Polynomial], b: Dict[Partition, Polynomial]) -> Dict[Partition, Polynomial]:
    out: Dict[Partition, Polynomial] = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = tuple(sorted(ma + mb, reverse=True))
            v = ca * cb
            out[m] = out[m] + v if m in out else v
    return {m: c for m, c in out.items() if c}


def curve_vectors(k: int, vars: VarSet, coefficients: str = "partition") -> List[Dict[Partition, Polynomial]]:
    """u_1..u_k as maps Sym-monomial -> coefficient polynomial.

    ``coefficients="partition"`` gives each partition weight 1; ``"composition"``
    counts its distinct orderings (the reparametrisation-invariant variant).
    """
    one = Polynomial.constant(vars, 1)
    t = Polynomial.var(vars, "t")
    w = {1: {(1,): one}}
    for j in range(2, k + 1):
        w[j] = {(i,): Polynomial.var(vars, beta_name(i, j)) for i in range(1, j + 1)}
    us = []
    for r in range(1, k + 1):
        u: Dict[Partition, Polynomial] = {}
        for lam in partitions(r):
            prod = {(): one}
            for p in lam:
                prod = _sym_mul(prod, w[p])
            mult = 1 if coefficients == "partition" else _orderings(lam)
            scale = t ** (len(lam) - 1) * mult
            for m, c in prod.items():
                v = c * scale
                u[m] = u[m] + v if m in u else v
        us.append({m: c for m, c in u.items() if c})
    return us


def wedge(vectors: Sequence[Dict[Partition, Polynomial]], vars: VarSet) -> Dict[SemiPartition, Polynomial]:
    acc: Dict[SemiPartition, Polynomial] = {(): Polynomial.constant(vars, 1)}
    for vec in vectors:
        new: Dict[SemiPartition, Polynomial] = {}
        for basis, coef in acc.items():
            for m, c in vec.items():
                if m in basis:
                    continue
                key = partition_key(m)
                larger = sum(1 for b in basis if partition_key(b) > key)
                merged = canonical_semipartition(basis + (m,))
                v = coef * c
                if larger % 2:
                    v = -v
                new[merged] = new[merged] + v if merged in new else v
        acc = {b: c for b, c in new.items() if c}
    return acc


def semipartition_text(pi: SemiPartition) -> str:
    return "^".join("e" + ".".join(str(p) for p in m) for m in pi)


def semipartition_parse(text: str) -> SemiPartition:
    return tuple(tuple(int(x) for x in part[1:].split(".")) for part in text.split("^"))


@dataclass
class PlueckerMap:
    k: int
    vars: VarSet
    coords: Dict[SemiPartition, Polynomial]

    @property
    def dst(self) -> SemiPartition:
        return distinguished(self.k)

    def keys(self) -> List[SemiPartition]:
        return sorted(self.coords, key=lambda s: tuple(partition_key(m) for m in s))

    def __getitem__(self, pi: SemiPartition) -> Polynomial:
        return self.coords[pi]

    def __len__(self) -> int:
        return len(self.coords)

    def monomial_set(self):
        return {e for p in self.coords.values() for e in p.terms}

    def to_json(self) -> str:
        rvars = residue_varset(self.k)
        rows = [{"semipartition": semipartition_text(pi),
                 "polynomial": self.coords[pi].to_text(),
                 "weight": weight_of_coordinate(pi, rvars).to_text()} for pi in self.keys()]
        return json.dumps({"k": self.k, "variables": list(self.vars.names), "coordinates": rows}, indent=2)


def build_phi(k: int, coefficients: str = "partition") -> PlueckerMap:
    if not isinstance(k, int) or k < 1 or k > MAX_K:
        raise ValueError(f"k must be an integer in 1..{MAX_K}, got {k!r}")
    if coefficients not in ("partition", "composition"):
        raise ValueError("coefficients must be 'partition' or 'composition'")
    vars = chart_varset(k)
    return PlueckerMap(k, vars, wedge(curve_vectors(k, vars, coefficients), vars))


def initial_weights(k: int) -> Dict[str, LinearForm]:
    rv = residue_varset(k)
    out = {"t": LinearForm.from_dict(rv, {"z": 1, "z1": 1})}
    for i in range(1, k + 1):
        for j in range(i, k + 1):
            if (i, j) == (1, 1):
                continue
            c = {"z": j - 1}
            c[f"z{i}"] = c.get(f"z{i}", 0) + 1
            c["z1"] = c.get("z1", 0) - 1
            out[beta_name(i, j)] = LinearForm.from_dict(rv, c)
    return out


def weight_of_coordinate(pi: SemiPartition, rvars: VarSet = None) -> LinearForm:
    """T-weight of the basis vector e_pi: the sum of z_p over all parts p."""
    k = len(pi)
    rvars = rvars or residue_varset(k)
    c: Dict[str, int] = {}
    for m in pi:
        for p in m:
            c[f"z{p}"] = c.get(f"z{p}", 0) + 1
    return LinearForm.from_dict(rvars, c)


def monomial_weight(exps: Sequence[int], names: Sequence[str], weights: Dict[str, LinearForm]) -> LinearForm:
    total = None
    for n, e in zip(names, exps):
        if e:
            w = weights[n].scale(e)
            total = w if total is None else total + w
    if total is None:
        some = next(iter(weights.values()))
        return LinearForm(some.vars, [0] * len(some.vars))
    return total


def normalization(k: int) -> LinearForm:
    """Weight(monomial of p_pi) - weight(e_pi): k(k-1)/2 * z - k * z1."""
    return LinearForm.from_dict(residue_varset(k), {"z": k * (k - 1) // 2, "z1": -k})
