"""Blow-up tree over the test-curve chart.

Each node is a ``ChartState``: the Pluecker coordinates written in the chart
coordinates, the torus weight of every coordinate, the history of steps, and
(optionally) the infinitesimal reparametrisation fields pushed to the chart.
Blowing up the coordinate subspace of a cluster C in the chart of c in C is
the substitution x -> x * c for x in C \\ {c}, followed by dividing every
coordinate by the common monomial factor; the weight of x drops by that of c.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import kernels
from .exactalg import LinearForm, Polynomial, VarSet, residue_varset
from .jetmap import (PlueckerMap, SemiPartition, beta_name, build_phi, chart_varset, distinguished,
                     initial_weights, monomial_weight, semipartition_text)
from .monomial import (MonomialIdeal, PrimaryComponent, irreducible_decomposition, minimal_primes,
                       reduced_minimal_components)


class BlowupError(Exception):
    """Tree construction failed (no admissible centre, bad chart, ...)."""


class GuidedMismatch(BlowupError):
    """A guided path names something the computation does not produce."""


# ---------------------------------------------------------------------------
# chart states


@dataclass(frozen=True)
class ChartState:
    k: int
    vars: VarSet
    weights: Dict[str, LinearForm]
    coords: Dict[SemiPartition, Polynomial]
    path: Tuple[tuple, ...] = ()
    fields: Optional[Dict[int, Dict[str, Polynomial]]] = None

    @property
    def dst(self) -> SemiPartition:
        return distinguished(self.k)

    def cstar_weight(self, name: str) -> int:
        if name in self.weights:
            return self.weights[name].coefficient("z")
        return self.generator_weight(name).coefficient("z")

    def generator_exponents(self, g: str) -> Tuple[int, ...]:
        """Exponents of a centre generator: a chart variable or a monomial such as b22^2*b33*b44."""
        if g in self.vars:
            return self.vars.unit(g)
        p = Polynomial.parse(g, self.vars)
        if len(p.terms) != 1 or next(iter(p.terms.values())) != 1 or min(next(iter(p.terms))) < 0:
            raise BlowupError(f"centre generator {g!r} is not a monomial")
        return next(iter(p.terms))

    def generator_weight(self, g: str) -> LinearForm:
        return monomial_weight(self.generator_exponents(g), self.vars.names, self.weights)

    def ideal(self) -> MonomialIdeal:
        return MonomialIdeal(self.vars, [e for p in self.coords.values() for e in p.terms])

    def plucker(self) -> PlueckerMap:
        return PlueckerMap(self.k, self.vars, dict(self.coords))

    def euler_factors(self) -> List[LinearForm]:
        return [self.weights[n] for n in self.vars.names]

    def coordinate_weight(self, pi: SemiPartition) -> Optional[LinearForm]:
        """Weight shared by all monomials of p_pi (None if not homogeneous)."""
        p = self.coords[pi]
        ws = {monomial_weight(e, self.vars.names, self.weights) for e in p.terms}
        return ws.pop() if len(ws) == 1 else None


def root_state(k: int, with_fields: bool = False, coefficients: str = "partition") -> ChartState:
    phi = build_phi(k, coefficients)
    fields = reparametrisation_fields(k, phi.vars) if with_fields else None
    return ChartState(k, phi.vars, initial_weights(k), dict(phi.coords), (), fields)


def reparametrisation_fields(k: int, vars: VarSet) -> Dict[int, Dict[str, Polynomial]]:
    """Infinitesimal generators of the unipotent reparametrisations.

    Differentiating v_j -> sum_l p_{l,j}(alpha) v_l at alpha = (1, 0, ...) in
    the direction alpha_a gives w_j -> l * w_l with l = j - a + 1, hence
    X_a(b_ij) = l * b_il (b_11 = 1, b_il = 0 for i > l) and X_a(t) = 0.
    """
    out = {}
    for a in range(2, k + 1):
        f = {}
        for n in vars.names:
            f[n] = Polynomial.zero(vars)
        for i in range(1, k + 1):
            for j in range(max(i, 2), k + 1):
                l = j - a + 1
                if l < i or l < 1:
                    continue
                if (i, l) == (1, 1):
                    img = Polynomial.constant(vars, l)
                else:
                    img = Polynomial.var(vars, beta_name(i, l)) * l
                f[beta_name(i, j)] = img
        out[a] = f
    return out


def _poly_from_matrix(vars: VarSet, mat: np.ndarray, coeffs: Sequence) -> Polynomial:
    return Polynomial(vars, {tuple(int(x) for x in row): c for row, c in zip(mat, coeffs)}, _trusted=True)


def _chart_substitute(p: Polynomial, chart_i: int, cluster_i: Sequence[int]) -> Polynomial:
    if not p.terms:
        return p
    rows = list(p.terms)
    mat = kernels.chart_map(kernels.as_matrix(rows, len(p.vars)), chart_i, tuple(cluster_i))
    return _poly_from_matrix(p.vars, mat, [p.terms[r] for r in rows])


def _monomial_chart_substitute(p: Polynomial, mono: Sequence[int], cluster_i: Sequence[int]) -> Polynomial:
    if not p.terms:
        return p
    rows = list(p.terms)
    mat = kernels.monomial_chart_map(kernels.as_matrix(rows, len(p.vars)), mono, tuple(cluster_i))
    return _poly_from_matrix(p.vars, mat, [p.terms[r] for r in rows])


def content_of(coords: Dict[SemiPartition, Polynomial], width: int) -> Tuple[int, ...]:
    rows = [e for p in coords.values() for e in p.terms]
    return tuple(int(x) for x in kernels.column_min(kernels.as_matrix(rows, width)))


def generator_order(s: ChartState, g: str):
    """Sort key for centre generators: variables in chart order, then monomials."""
    return (0, s.vars.index(g), "") if g in s.vars else (1, 0, g)


def blow_up_chart(s: ChartState, cluster: Sequence[str], chart: str) -> ChartState:
    """Chart ``chart`` of the blow-up along the centre generated by ``cluster``.

    Generators are chart variables, plus at most one monomial m in variables
    outside the cluster; a centre with a monomial is only opened in the chart
    of m, where x -> x * m for every cluster variable x.
    """
    cluster = tuple(cluster)
    if chart not in cluster:
        raise BlowupError(f"chart variable {chart} is not in cluster {cluster}")
    monos = [g for g in cluster if g not in s.vars]
    if monos and (len(monos) > 1 or chart != monos[0]):
        raise BlowupError(f"centre {cluster} has a monomial generator; only its chart is a coordinate chart")
    gens = kernels.as_matrix([s.generator_exponents(g) for g in cluster], len(s.vars))
    ideal = s.ideal()
    if not kernels.divisible_by_any(gens, kernels.as_matrix(list(ideal.gens), len(s.vars))).all():
        raise BlowupError(f"cluster {cluster} does not contain the indeterminacy ideal")
    weights = dict(s.weights)
    if monos:
        mono = s.generator_exponents(chart)
        idx = [s.vars.index(n) for n in cluster if n != chart]
        if any(mono[i] for i in idx):
            raise BlowupError(f"monomial {chart} involves a cluster variable")
        new = {pi: _monomial_chart_substitute(p, mono, idx) for pi, p in s.coords.items()}
        wc = s.generator_weight(chart)
    else:
        idx = [s.vars.index(n) for n in cluster]
        ci = s.vars.index(chart)
        new = {pi: _chart_substitute(p, ci, idx) for pi, p in s.coords.items()}
        wc = s.weights[chart]
    g = content_of(new, len(s.vars))
    if any(g):
        neg = tuple(-x for x in g)
        new = {pi: p.shift(neg) for pi, p in new.items()}
    for n in cluster:
        if n != chart:
            weights[n] = weights[n] - wc
    fields = None
    if s.fields is not None and not monos:
        fields = {}
        for a, f in s.fields.items():
            sub = {n: _chart_substitute(p, ci, idx) for n, p in f.items()}
            fc = sub[chart]
            out = {}
            for n in s.vars.names:
                if n in cluster and n != chart:
                    xn = Polynomial.var(s.vars, n)
                    out[n] = (sub[n] - xn * fc).shift(s.vars.unit(chart, -1))
                else:
                    out[n] = sub[n]
            fields[a] = out
    step = ("blowup", cluster, chart, g)
    return ChartState(s.k, s.vars, weights, new, s.path + (step,), fields)


# ---------------------------------------------------------------------------
# smoothening


def bare_variables(s: ChartState) -> List[str]:
    out = set()
    for p in s.coords.values():
        if len(p.terms) == 1:
            (e, _), = p.terms.items()
            if sum(e) == 1 and min(e) >= 0:
                out.add(s.vars.names[e.index(1)])
    return sorted(out, key=s.vars.index)


def linear_headed(s: ChartState) -> List[Tuple[SemiPartition, str]]:
    """Coordinates with a linear term in a variable that is not itself a coordinate."""
    bare = set(bare_variables(s))
    out = []
    for pi, p in s.coords.items():
        if p.constant_term():
            continue
        lin = [s.vars.names[e.index(1)] for e in p.terms if sum(e) == 1 and min(e) >= 0]
        # x * unit needs no straightening
        cand = [n for n in lin if n not in bare
                and any(e[s.vars.index(n)] == 0 for e in p.terms)]
        if cand:
            head = max(cand, key=s.vars.index)
            out.append((pi, head))
    return out


def linear_headed_factors(s: ChartState) -> List[Tuple[str, Polynomial]]:
    """Primitive parts (coordinate / monomial content) with a linear head, e.g. b44*(b23 - b12).

    Parts are normalised to head coefficient 1 and ordered by how many
    coordinates they divide (most first), then by head position (outer first).
    """
    bare = set(bare_variables(s))
    count: Dict[Tuple[str, str], int] = {}
    found: Dict[Tuple[str, str], Tuple[str, Polynomial]] = {}
    for p in s.coords.values():
        if len(p.terms) < 2:
            continue
        g = p.content_exponents()
        prim = p.shift(tuple(-x for x in g)) if any(g) else p
        lin = [s.vars.names[e.index(1)] for e in prim.terms if sum(e) == 1 and min(e) >= 0]
        cand = [n for n in lin if n not in bare and any(e[s.vars.index(n)] == 0 for e in prim.terms)]
        if cand:
            head = max(cand, key=s.vars.index)
            prim = prim * (Fraction(1) / prim.terms[s.vars.unit(head)])
            key = (head, prim.to_text())
            count[key] = count.get(key, 0) + 1
            found[key] = (head, prim)
    order = sorted(found, key=lambda k: (-count[k], -s.vars.index(k[0]), k[1]))
    return [found[k] for k in order]


def _inverse_substitution(vars: VarSet, head: str, xi: Polynomial, degree: int) -> Tuple[Polynomial, bool]:
    """Solve xi(x) = y for x_head as a polynomial in y (named ``head``) and the other variables.

    Returns (image of x_head, exact?).  ``xi`` is normalised so that its
    coefficient of x_head is 1.
    """
    x = Polynomial.var(vars, head)
    rest = xi - x
    if head not in rest.used_variables():
        return x - rest, True
    # fixed point x = y - rest(x), truncated at the given total degree
    cur = x
    for _ in range(degree + 1):
        nxt = (x - rest.substitute({head: cur})).truncate(degree)
        if nxt == cur:
            break
        cur = nxt
    return cur, False


def apply_substitution(s: ChartState, head: str, new_coord: Polynomial, degree: int = None) -> ChartState:
    """Change coordinates so that ``new_coord`` (linear in ``head``) becomes the coordinate ``head``."""
    c = new_coord.terms.get(s.vars.unit(head))
    if not c:
        raise BlowupError(f"substitution for {head} has no linear {head} term")
    xi = new_coord * (Fraction(1) / c)
    wts = {monomial_weight(e, s.vars.names, s.weights) for e in xi.terms}
    if len(wts) != 1:
        raise BlowupError(f"substitution {head} = {new_coord} is not weight-homogeneous")
    if degree is None:
        degree = smoothening_start_degree(s.k)
    image, exact = _inverse_substitution(s.vars, head, xi, degree)
    sigma = {head: image}
    coords = {}
    for pi, p in s.coords.items():
        q = p.substitute(sigma)
        coords[pi] = q if exact else q.truncate(degree)
    fields = None
    if s.fields is not None and exact:
        fields = {}
        ok = True
        for a, f in s.fields.items():
            if any(p.min_degree_in(head) < 0 for p in f.values()):
                ok = False
                break
            # X(xi) = sum_j d(xi)/dx_j X(x_j), then rewrite everything in the new chart
            xdot = Polynomial.zero(s.vars)
            for n in xi.used_variables():
                xdot = xdot + xi.derivative(n) * f[n]
            out = {}
            for n in s.vars.names:
                src = xdot if n == head else f[n]
                out[n] = src.substitute(sigma)
            fields[a] = out
        if not ok:
            fields = None
    step = ("sub", head, new_coord.to_text(), exact, degree)
    g = content_of(coords, len(s.vars))
    if any(g):
        neg = tuple(-x for x in g)
        coords = {pi: p.shift(neg) for pi, p in coords.items()}
    return ChartState(s.k, s.vars, dict(s.weights), coords, s.path + (step,), fields)


def smoothening_start_degree(k: int) -> int:
    return k * (k - 1) // 2 + 2


def smoothen(s: ChartState, degree: int = None, max_rounds: int = 50) -> ChartState:
    """Repeatedly straighten linear-headed coordinates until every linear monomial is a coordinate."""
    if degree is None:
        degree = smoothening_start_degree(s.k)
    cap = 4 * degree
    for _ in range(max_rounds):
        todo = linear_headed(s)
        if not todo:
            return s
        pi, head = todo[0]
        s2 = apply_substitution(s, head, s.coords[pi], degree)
        if not s2.path[-1][3]:
            # truncated inverse: raise the degree until the monomial ideal stabilises
            d = degree
            prev = s2.ideal()
            while True:
                d *= 2
                if d > cap:
                    raise BlowupError("smoothening did not stabilise within the degree cap")
                s3 = apply_substitution(s, head, s.coords[pi], d)
                if s3.ideal() == prev:
                    break
                prev = s3.ideal()
                s2 = s3
        s = s2
    raise BlowupError("smoothening did not terminate")


# ---------------------------------------------------------------------------
# classification


INTERIOR = "interior"
CONTRIBUTING = "contributing"
NON_CONTRIBUTING = "non-contributing"
PRUNED = "branch-noncontributing"
SEMILINEAR = "terminal-semilinear"


def _divides(m: Tuple[int, ...], p: Polynomial) -> bool:
    return all(all(a <= b for a, b in zip(m, e)) for e in p.terms)


def classify_chart(s: ChartState) -> str:
    dst = s.coords.get(s.dst)
    if dst is None or not dst:
        return NON_CONTRIBUTING
    consts = {pi: p.constant_term() for pi, p in s.coords.items()}
    if any(consts.values()):
        if consts[s.dst] and not any(v for pi, v in consts.items() if pi != s.dst):
            return CONTRIBUTING
        return NON_CONTRIBUTING
    for pi, p in s.coords.items():
        if pi == s.dst:
            continue
        for e in p.terms:
            if _divides(e, dst):
                quotient = dst.shift(tuple(-x for x in e))
                if not quotient.is_constant():
                    return PRUNED
    if linear_headed(s):
        return SEMILINEAR
    return INTERIOR


# ---------------------------------------------------------------------------
# invariance and candidates


@dataclass(frozen=True)
class ClusterChoice:
    cluster: Tuple[str, ...]
    charts: Tuple[str, ...]
    evidence: str = "verified"
    component: Optional[PrimaryComponent] = None

    def cstar_text(self, s: ChartState) -> str:
        return ",".join(f"{n}:{s.cstar_weight(n)}" for n in self.cluster)


def is_invariant(s: ChartState, cluster: Sequence[str]) -> Optional[bool]:
    """Whether every reparametrisation field maps the cluster ideal into itself (None: unknown)."""
    if s.fields is None:
        return None
    idx = [s.vars.index(n) for n in cluster]
    for f in s.fields.values():
        for n in cluster:
            for e in f[n].terms:
                if min(e) < 0 and not any(e[i] > 0 for i in idx):
                    return False
                if not any(e[i] > 0 for i in idx):
                    return False
    return True


def minimal_weight_charts(s: ChartState, cluster: Sequence[str]) -> Tuple[str, ...]:
    w = {n: s.cstar_weight(n) for n in cluster}
    m = min(w.values())
    return tuple(n for n in cluster if w[n] == m)


def candidate_clusters(s: ChartState, require_invariance: bool = True) -> List[ClusterChoice]:
    ideal = s.ideal()
    if ideal.is_unit():
        raise BlowupError("unit ideal: the chart map is already a morphism")
    comps = reduced_minimal_components(ideal)
    admissible = []
    for c in comps:
        inv = is_invariant(s, c.cluster) if require_invariance else None
        if inv is not False:
            admissible.append((c, inv))
    if not admissible:
        return []
    codim = min(c.codim for c, _ in admissible)
    out = []
    for c, inv in admissible:
        if c.codim != codim:
            continue
        cl = tuple(sorted(c.cluster, key=s.vars.index))
        out.append(ClusterChoice(cl, minimal_weight_charts(s, cl),
                                 "verified" if inv else "unchecked", c))
    return out


# ---------------------------------------------------------------------------
# guided path files
#
#   NODE b22:1,b23:1,b33:1 CHART b33 SUB b23=b23-b12 EXPECT contributing
#
# One line per edge.  NODE names the cluster blown up at the current chart
# (optionally with the expected C*-weight of each variable), CHART the chart
# variable taken.  SUB directives are coordinate changes applied before the
# blow-up; ``SUB x`` without a polynomial straightens the linear-headed
# coordinate whose head is x.  Lines indented below an edge describe the chart
# it leads to, so all of them name the same cluster.  Minimal-weight charts
# that are not listed are classified and, if interior, continued in auto mode.
# A cluster entry may be a monomial (b22^2*b33*b44); its chart is named the
# same way.  An optional header line ``COEFFICIENTS composition`` selects the
# coefficients of the chart map the path was written for (default partition).

_KEYWORDS = re.compile(r"\b(NODE|CHART|SUB|EXPECT)\b")
_EXPECT = {"contributing": CONTRIBUTING, "noncontributing": NON_CONTRIBUTING,
           "non-contributing": NON_CONTRIBUTING, "pruned": PRUNED, "interior": INTERIOR,
           "nocontr": "nocontr"}


def _meets(cls: str, expect: Optional[str]) -> bool:
    if expect is None or cls == expect:
        return True
    if expect == "nocontr":
        return cls in (NON_CONTRIBUTING, PRUNED)
    return expect == INTERIOR and cls == SEMILINEAR


@dataclass
class GuidedStep:
    cluster: Tuple[str, ...]
    weights: Dict[str, int]
    chart: str
    subs: Tuple[Tuple[str, Optional[str]], ...]
    expect: Optional[str]
    line: int
    children: List["GuidedStep"] = field(default_factory=list)


_COEFFICIENTS = re.compile(r"^\s*COEFFICIENTS\s+(\w+)\s*$")


def guided_coefficients(text: str) -> Optional[str]:
    """The coefficient variant named by a COEFFICIENTS header, if any."""
    for raw in text.splitlines():
        m = _COEFFICIENTS.match(raw.split("#", 1)[0])
        if m:
            return m.group(1)
    return None


def parse_guided(text: str) -> List[GuidedStep]:
    """Parse a guided path file into the list of root edges."""
    roots: List[GuidedStep] = []
    stack: List[Tuple[int, GuidedStep]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].rstrip()
        if not body.strip() or _COEFFICIENTS.match(body):
            continue
        indent = len(body) - len(body.lstrip(" "))
        parts = _KEYWORDS.split(body.strip())
        if parts[0].strip() or len(parts) < 3:
            raise ValueError(f"line {lineno}: expected 'NODE ... CHART ...'")
        items = [(parts[i], parts[i + 1].strip()) for i in range(1, len(parts), 2)]
        if items[0][0] != "NODE":
            raise ValueError(f"line {lineno}: a line must start with NODE")
        cluster, weights, chart, subs, expect = [], {}, None, [], None
        for key, val in items:
            if key == "NODE":
                for tok in val.replace(" ", "").split(","):
                    if not tok:
                        continue
                    name, _, w = tok.partition(":")
                    cluster.append(name)
                    if w:
                        weights[name] = int(w)
            elif key == "CHART":
                chart = val
            elif key == "SUB":
                head, _, poly = val.partition("=")
                subs.append((head.strip(), poly.strip() or None))
            elif key == "EXPECT":
                if val not in _EXPECT:
                    raise ValueError(f"line {lineno}: unknown expectation {val!r}")
                expect = _EXPECT[val]
        if not cluster or chart is None:
            raise ValueError(f"line {lineno}: NODE needs a cluster and a CHART")
        step = GuidedStep(tuple(cluster), weights, chart, tuple(subs), expect, lineno)
        while stack and stack[-1][0] >= indent:
            stack.pop()
        (stack[-1][1].children if stack else roots).append(step)
        stack.append((indent, step))
    return roots


def load_guided(path) -> List[GuidedStep]:
    with open(path, encoding="utf-8") as fh:
        return parse_guided(fh.read())


def _group(steps: Sequence[GuidedStep]) -> Optional[Tuple[Tuple[str, ...], Tuple, Dict[str, int], Dict[str, GuidedStep]]]:
    """The single node described by sibling edges: (cluster, subs, weights, chart -> step)."""
    if not steps:
        return None
    first = steps[0]
    key = frozenset(first.cluster)
    subs = first.subs
    weights = dict(first.weights)
    charts: Dict[str, GuidedStep] = {}
    for st in steps:
        if frozenset(st.cluster) != key:
            raise GuidedMismatch(f"line {st.line}: sibling edges name different clusters")
        if st.subs and subs and st.subs != subs:
            raise GuidedMismatch(f"line {st.line}: sibling edges give different substitutions")
        subs = subs or st.subs
        weights.update(st.weights)
        if st.chart in charts:
            raise GuidedMismatch(f"line {st.line}: chart {st.chart} listed twice")
        charts[st.chart] = st
    return first.cluster, subs, weights, charts


# ---------------------------------------------------------------------------
# the tree


@dataclass
class LeafRecord:
    chart: ChartState
    classification: str
    euler: List[LinearForm]

    @property
    def contributing(self) -> bool:
        return self.classification == CONTRIBUTING


@dataclass
class TreeNode:
    id: int
    state: ChartState
    edge: Optional[str]
    classification: str
    center: Optional[ChartState] = None
    choice: Optional[ClusterChoice] = None
    decision: str = ""
    children: List["TreeNode"] = field(default_factory=list)
    leaf: Optional[LeafRecord] = None

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()


@dataclass
class BlowupTree:
    k: int
    mode: str
    root: TreeNode

    def nodes(self) -> List[TreeNode]:
        return list(self.root.walk())

    def internal(self) -> List[TreeNode]:
        return [n for n in self.nodes() if n.choice is not None]

    def leaves(self) -> List[LeafRecord]:
        return [n.leaf for n in self.nodes() if n.leaf is not None]

    def contributing_leaves(self) -> List[LeafRecord]:
        return [l for l in self.leaves() if l.contributing]

    def count(self, classification: str) -> int:
        return sum(1 for l in self.leaves() if l.classification == classification)

    def decisions(self) -> Dict[str, int]:
        out: Dict[str, int] = {}
        for n in self.internal():
            out[n.decision] = out.get(n.decision, 0) + 1
        return out

    def to_dict(self) -> dict:
        nodes = []
        for n in self.nodes():
            rec = {"id": n.id, "edge": n.edge, "classification": n.classification,
                   "children": [c.id for c in n.children]}
            if n.choice is not None:
                rec["cluster"] = [{"var": v, "cstar": n.center.cstar_weight(v)} for v in n.choice.cluster]
                rec["charts"] = list(n.choice.charts)
                rec["decision"] = n.decision
                rec["evidence"] = n.choice.evidence
                subs = [st for st in n.center.path[len(n.state.path):] if st[0] == "sub"]
                rec["substitutions"] = [f"{st[1]}={st[2]}" for st in subs]
            if n.leaf is not None:
                rec["euler"] = [f.to_text() for f in n.leaf.euler]
            nodes.append(rec)
        return {"k": self.k, "mode": self.mode, "variables": list(self.root.state.vars.names),
                "summary": {"internal": len(self.internal()),
                            "contributing": self.count(CONTRIBUTING),
                            "non-contributing": self.count(NON_CONTRIBUTING),
                            "pruned": self.count(PRUNED)},
                "nodes": nodes}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_dot(self) -> str:
        lines = [f"digraph blowup_k{self.k} {{", "  node [fontname=\"Helvetica\"];"]
        for n in self.nodes():
            if n.choice is not None:
                label = "(" + ",".join(f"{v}^{n.center.cstar_weight(v)}" for v in n.choice.cluster) + ")"
                lines.append(f"  n{n.id} [shape=box, label=\"{label}\"];")
            elif n.classification == CONTRIBUTING:
                lines.append(f"  n{n.id} [shape=box, style=filled, fillcolor=\"#f4a6a6\", label=\"Contr.\"];")
            elif n.classification == PRUNED:
                lines.append(f"  n{n.id} [shape=box, style=dashed, label=\"No contr. (pruned)\"];")
            else:
                lines.append(f"  n{n.id} [shape=box, label=\"No contr.\"];")
        for n in self.nodes():
            for c in n.children:
                lines.append(f"  n{n.id} -> n{c.id} [label=\"{c.edge}^{n.center.cstar_weight(c.edge)}\"];")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def summary_text(self) -> str:
        d = self.to_dict()["summary"]
        lines = [f"k={self.k} mode={self.mode}: {d['internal']} blow-ups, {d['contributing']} contributing, "
                 f"{d['non-contributing']} non-contributing, {d['pruned']} pruned"]
        for i, leaf in enumerate(self.contributing_leaves(), 1):
            lines.append(f"  leaf {i}: " + " ".join(f"{n}={w.to_text()}"
                                                    for n, w in zip(leaf.chart.vars.names, leaf.euler)))
        return "\n".join(lines) + "\n"


def leaf_euler(leaf: LeafRecord) -> List[LinearForm]:
    """The final weights of every chart coordinate at a contributing leaf."""
    if not isinstance(leaf, LeafRecord) or not leaf.contributing:
        raise BlowupError("Euler data is only defined for contributing leaves")
    return list(leaf.euler)


def _straighten(s: ChartState, head: str, poly: Optional[str]) -> ChartState:
    if poly is not None:
        return apply_substitution(s, head, Polynomial.parse(poly, s.vars))
    for pi, h in linear_headed(s):
        if h == head:
            return apply_substitution(s, head, s.coords[pi])
    for h, prim in linear_headed_factors(s):
        if h == head:
            return apply_substitution(s, head, prim)
    raise GuidedMismatch(f"no linear-headed coordinate or factor with head {head}")


def _auto_choice(s: ChartState, max_rounds: int = 12) -> Tuple[ChartState, ClusterChoice, str]:
    """First admissible centre; straighten linear heads (coordinates, then factors) until one exists."""
    straightened = set()
    for _ in range(max_rounds):
        cands = candidate_clusters(s)
        if cands:
            break
        if linear_headed(s):
            s = smoothen(s)
            continue
        factors = [f for f in linear_headed_factors(s) if f[0] not in straightened]
        if not factors:
            break
        head, prim = factors[0]
        straightened.add(head)
        s = apply_substitution(s, head, prim)
    decision = None
    if not cands:
        # last resort: the radical of a non-reduced invariant minimal component
        prims = [cl for cl in minimal_primes(s.ideal()) if is_invariant(s, cl) is not False]
        if prims:
            codim = min(len(cl) for cl in prims)
            cands = [ClusterChoice(tuple(sorted(cl, key=s.vars.index)), (), "radical")
                     for cl in prims if len(cl) == codim]
            cands = [ClusterChoice(c.cluster, minimal_weight_charts(s, c.cluster), "radical") for c in cands]
            decision = "radical"
    if not cands:
        raise BlowupError("no invariant centre of maximal dimension")
    cands.sort(key=lambda c: [s.vars.index(n) for n in c.cluster])
    return s, cands[0], decision or ("forced" if len(cands) == 1 else "elective")


def build_tree(k: int, mode: str = "auto", path=None, coefficients: Optional[str] = None,
               max_depth: int = 40) -> BlowupTree:
    """Explore every minimal-weight chart down to a leaf or a pruned branch.

    ``mode="guided"`` reads the cluster choices from ``path`` (a file name, the
    file text, or a parsed list of steps); ``mode="auto"`` picks the first
    admissible centre in coordinate order and smoothens when none exists.
    The invariance test needs the reparametrisation-invariant map, so auto
    mode defaults to ``coefficients="composition"``; guided mode uses the
    path's COEFFICIENTS header, else ``"partition"``.
    """
    if mode not in ("auto", "guided"):
        raise ValueError("mode must be 'auto' or 'guided'")
    guided: List[GuidedStep] = []
    declared = None
    if mode == "guided":
        if path is None:
            raise ValueError("guided mode needs a path file")
        if isinstance(path, list):
            guided = path
        else:
            text = path if isinstance(path, str) and "NODE" in path else open(path, encoding="utf-8").read()
            declared = guided_coefficients(text)
            guided = parse_guided(text)
    if coefficients is None:
        coefficients = "composition" if mode == "auto" else (declared or "partition")
    root_s = root_state(k, with_fields=(mode == "auto"), coefficients=coefficients)
    counter = [0]

    def visit(s: ChartState, edge: Optional[str], steps: List[GuidedStep], expect: Optional[str],
              depth: int) -> TreeNode:
        nid = counter[0]
        counter[0] += 1
        cls = classify_chart(s)
        if not _meets(cls, expect):
            raise GuidedMismatch(f"chart {edge} at depth {depth} is {cls}, expected {expect}")
        if cls in (CONTRIBUTING, NON_CONTRIBUTING, PRUNED):
            if steps:
                raise GuidedMismatch(f"line {steps[0].line}: chart is already a leaf ({cls})")
            return TreeNode(nid, s, edge, cls, leaf=LeafRecord(s, cls, s.euler_factors()))
        if depth >= max_depth:
            raise BlowupError(f"depth limit {max_depth} reached")
        node = TreeNode(nid, s, edge, cls)
        group = _group(steps)
        if group is not None:
            cluster, subs, weights, listed = group
            c = s
            for head, poly in subs:
                c = _straighten(c, head, poly)
            cluster = tuple(sorted(cluster, key=lambda g: generator_order(c, g)))
            for v, w in weights.items():
                if c.cstar_weight(v) != w:
                    raise GuidedMismatch(f"line {steps[0].line}: weight of {v} is {c.cstar_weight(v)}, not {w}")
            charts = minimal_weight_charts(c, cluster)
            for ch in listed:
                if ch not in charts:
                    raise GuidedMismatch(f"line {listed[ch].line}: {ch} is not a minimal-weight chart of {cluster}")
            choice = ClusterChoice(cluster, charts, "asserted-from-golden-path")
            decision = "guided"
        else:
            listed = {}
            c, choice, decision = _auto_choice(s)
        node.center, node.choice, node.decision = c, choice, decision
        for ch in choice.charts:
            try:
                child = blow_up_chart(c, choice.cluster, ch)
            except BlowupError as exc:
                raise GuidedMismatch(str(exc)) if group is not None else exc
            st = listed.get(ch)
            node.children.append(visit(child, ch, st.children if st else [],
                                       st.expect if st else None, depth + 1))
        return node

    root = visit(root_s, None, guided, None, 0)
    return BlowupTree(k, mode, root)


def replay(k: int, path: Sequence[tuple], coefficients: str = "partition") -> ChartState:
    """Rebuild a chart from the recorded steps of its path."""
    s = root_state(k, coefficients=coefficients)
    for st in path:
        if st[0] == "blowup":
            s = blow_up_chart(s, st[1], st[2])
        elif st[0] == "sub":
            s = apply_substitution(s, st[1], Polynomial.parse(st[2], s.vars), st[4])
        else:
            raise ValueError(f"unknown step {st[0]!r}")
    return s
