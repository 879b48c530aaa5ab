"""Identity checks for the k = 3, 4, 5 trees against the one-term closed formulas."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, List, Sequence

from .blowup import BlowupTree, LeafRecord, build_tree
from .exactalg import LinearForm
from .formulas import (K3_LEAF, K4_LEAVES, closed_formula, closed_formula_tp, k4_partial_fraction_identity,
                       leaf_forms)
from .paths import golden_path
from .residue import leaf_terms, rational_identity_check, thom_polynomial, z_residue

REGISTERED = (3, 4, 5)
LEAF_COUNT = {3: 1, 4: 4, 5: 15}
VANISHING = {3: 0, 4: 2, 5: 2}
CODIMS = {3: (0, 1, 2), 4: (0, 1), 5: (0,)}


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        tail = f" ({self.detail})" if self.detail else ""
        return f"{'PASS' if self.ok else 'FAIL'} {self.name}{tail}"


def weights_match(leaf: LeafRecord, table: Dict[str, LinearForm]) -> bool:
    """Leaf weights equal the table, up to one global sign."""
    w = dict(zip(leaf.chart.vars.names, leaf.euler))
    if set(w) != set(table):
        return False
    return all(w[n] == table[n] for n in table) or all(w[n] == -table[n] for n in table)


def z_residues(tree: BlowupTree, codim: int = 0):
    return [z_residue((t.numerator, t.denominators)) for t in leaf_terms(tree, codim)]


def _leaf_count(tree: BlowupTree) -> Check:
    n = len(tree.contributing_leaves())
    want = LEAF_COUNT[tree.k]
    return Check(f"{want} contributing leaves", n == want, f"tree has {n}")


def _vanishing(tree: BlowupTree) -> Check:
    zs = z_residues(tree)
    zero = [i + 1 for i, (p, _) in enumerate(zs) if not p]
    want = VANISHING[tree.k]
    return Check(f"{want} leaves with vanishing z-residue", len(zero) == want,
                 f"leaves {zero}" if zero else "none vanish")


def _leaf_sum_identity(tree: BlowupTree) -> Check:
    num, den = closed_formula(tree.k)
    ok = rational_identity_check(z_residues(tree), [(num, den)])
    return Check("sum of leaf z-residues equals the one-term formula", ok)


def _tp_equal(tree: BlowupTree) -> List[Check]:
    out = []
    for d in CODIMS[tree.k]:
        tp = thom_polynomial(tree.k, d, tree=tree)
        ref = closed_formula_tp(tree.k, d)
        out.append(Check(f"Tp{tree.k} equals the one-term formula at codim {d}", tp == ref,
                         "" if tp == ref else f"tree {tp.to_text()} vs formula {ref.to_text()}"))
    return out


def _k3(tree: BlowupTree) -> List[Check]:
    leaves = tree.contributing_leaves()
    table = leaf_forms(3, K3_LEAF)
    ok = len(leaves) == 1 and weights_match(leaves[0], table)
    return [_leaf_count(tree), Check("leaf weight row", ok)]


def _k4(tree: BlowupTree) -> List[Check]:
    leaves = tree.contributing_leaves()
    tables = [leaf_forms(4, K4_LEAVES[i]) for i in sorted(K4_LEAVES)]
    unmatched = [i + 1 for i, t in enumerate(tables) if not any(weights_match(l, t) for l in leaves)]
    lhs, rhs = k4_partial_fraction_identity()
    return [_leaf_count(tree),
            Check("leaf weight columns", not unmatched, f"unmatched columns {unmatched}" if unmatched else ""),
            _vanishing(tree),
            Check("partial fraction identity", rational_identity_check(lhs, rhs))]


def _k5(tree: BlowupTree) -> List[Check]:
    return [_leaf_count(tree), _vanishing(tree)]


_SPECIFIC: Dict[int, Callable[[BlowupTree], List[Check]]] = {3: _k3, 4: _k4, 5: _k5}


def run_checks(k: int, tree: BlowupTree = None) -> List[Check]:
    """Every registered identity for k, in a fixed order."""
    if k not in REGISTERED:
        raise KeyError(k)
    if tree is None:
        tree = build_tree(k, "guided", golden_path(k))
    return _SPECIFIC[k](tree) + [_leaf_sum_identity(tree)] + _tp_equal(tree)


def report(checks: Sequence[Check]) -> str:
    return "".join(c.line() + "\n" for c in checks)
