"""Reference data: one-term closed formulas and transcribed leaf weights for k = 3, 4, 5.

Closed formulas are z-free: numerator * prod_{i<j}(z_i - z_j) * (z_1...z_k)^d
over a product of linear forms in z_1..z_k; see residue.evaluate_closed_formula.
"""

from __future__ import annotations

from typing import Dict, List, Tuple

from .exactalg import LinearForm, Polynomial, residue_varset
from .residue import RationalTerm, evaluate_closed_formula, vandermonde, ThomPolynomial


def _forms(k: int, texts) -> List[LinearForm]:
    rv = residue_varset(k)
    return [LinearForm.parse(s, rv) for s in texts]


def triangle_forms(k: int) -> List[LinearForm]:
    """z_i + z_j - z_l for i <= j and i + j <= l <= k."""
    rv = residue_varset(k)
    out = []
    for i in range(1, k + 1):
        for j in range(i, k + 1):
            for l in range(i + j, k + 1):
                c: Dict[str, int] = {}
                for n, a in ((f"z{i}", 1), (f"z{j}", 1), (f"z{l}", -1)):
                    c[n] = c.get(n, 0) + a
                out.append(LinearForm.from_dict(rv, c))
    return out


CLOSED_NUMERATORS = {
    3: "1",
    4: "2*z1+z2-z4",
    5: "(2*z1+z2-z5)*(2*z1^2+3*z1*z2-2*z1*z5+2*z2*z3-z2*z4-z2*z5-z3*z4+z4*z5)",
}

# the reference k=4 formula carries z4-z1-z3 where the triangle product has z1+z3-z4
K4_PRINTED_DENOMINATOR = ["2z1-z2", "z1+z2-z3", "z4-z1-z3", "2z2-z4", "z1+z2-z4", "2z1-z3", "2z1-z4"]


def closed_numerator(k: int) -> Polynomial:
    return Polynomial.parse(CLOSED_NUMERATORS[k], residue_varset(k))


def closed_formula(k: int, codim: int = 0) -> RationalTerm:
    """(Q_k * prod_{i<j}(z_i - z_j) * (z_1...z_k)^codim, triangle forms)."""
    rv = residue_varset(k)
    num = closed_numerator(k) * vandermonde(rv, k)
    if codim:
        num = num * Polynomial.monomial(rv, [codim] * k + [0])
    return num, triangle_forms(k)


def closed_formula_tp(k: int, codim: int = 0) -> ThomPolynomial:
    num, den = closed_formula(k, codim)
    return evaluate_closed_formula(num, den)


def k4_printed_formula(codim: int = 0) -> RationalTerm:
    num, _ = closed_formula(4, codim)
    return num, _forms(4, K4_PRINTED_DENOMINATOR)


def k4_partial_fraction_identity() -> Tuple[List[RationalTerm], List[RationalTerm]]:
    rv = residue_varset(4)
    one = Polynomial.constant(rv, 1)
    lhs = [(one, _forms(4, ["z2+z3-z1-z4", "2z1-z2", "z1+z2-z3"])),
           (one, _forms(4, ["z2+z3-z1-z4", "z4-z1-z3", "2z2-z4"]))]
    rhs = [(closed_numerator(4), _forms(4, ["2z1-z2", "z1+z2-z3", "z1+z3-z4", "2z2-z4"]))]
    return lhs, rhs


# weight tables of the contributing leaves, variable -> weight
K3_LEAF = {"t": "2z1-z2", "b12": "z", "b13": "2z", "b22": "z1+z2-z3", "b23": "2z1-z3", "b33": "z+z3-2z1"}

K4_LEAVES = {
    1: {"t": "2z1-z2", "b12": "z1+z2-z4", "b13": "2z", "b14": "3z", "b22": "z1+z2-z3", "b23": "2z1-z3",
        "b24": "2z1-z4", "b33": "z2+z3-z4-z1", "b34": "z1+z2-z4", "b44": "z+z4-z2-z1"},
    2: {"t": "z1-z4+z3", "b12": "2z1-z3", "b13": "2z", "b14": "3z", "b22": "2z2-z4", "b23": "2z1-z3",
        "b24": "2z1-z4", "b33": "z+z3-2z1", "b34": "z1+z2-z4", "b44": "z1+z4-z2-z3"},
    3: {"t": "3z1-z4", "b12": "z", "b13": "2z", "b14": "3z", "b22": "2z2+2z1-z4-z3", "b23": "2z1-z3",
        "b24": "2z1-z4", "b33": "z3-2z1", "b34": "z1+z2-z4", "b44": "z4-z2-z1"},
    # the t entry follows the weight table of the blow-up steps (the leaf column prints 2z1-z4)
    4: {"t": "3z1-z4", "b12": "z", "b13": "2z", "b14": "3z", "b22": "z1+z2-z3", "b23": "2z1-z3",
        "b24": "2z1-z4", "b33": "2z2-z4", "b34": "z1+z2-z4", "b44": "z3+z4-2z2-2z1"},
}


def leaf_forms(k: int, table: Dict[str, str]) -> Dict[str, LinearForm]:
    rv = residue_varset(k)
    return {n: LinearForm.parse(s, rv) for n, s in table.items()}
