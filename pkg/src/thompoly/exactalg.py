"""Exact arithmetic: rationals, sparse polynomials, linear forms, Laurent series.

Polynomials are dictionaries from exponent tuples (dense, aligned with a
``VarSet``) to ``int`` or ``Fraction`` coefficients.  Exponents may be
negative, so the same class doubles as a Laurent polynomial ring; the
monomial-ideal code only ever feeds it non-negative exponents.
"""

from __future__ import annotations

import ast
import re
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Optional, Sequence, Tuple, Union

Rational = Fraction
Scalar = Union[int, Fraction]
Exps = Tuple[int, ...]


def normalize_scalar(c):
    """Collapse integral ``Fraction`` values to ``int`` (keeps arithmetic fast)."""
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def _fmt_scalar(c) -> str:
    c = normalize_scalar(c)
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    return str(c)


class VarSet:
    """Ordered, immutable list of distinct variable names."""

    __slots__ = ("names", "_index", "_hash")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(names)})
        object.__setattr__(self, "_hash", hash(names))

    def __setattr__(self, key, value):
        raise AttributeError("VarSet is immutable")

    def __reduce__(self):
        return (VarSet, (self.names,))

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __contains__(self, name) -> bool:
        return name in self._index

    def __eq__(self, other) -> bool:
        return isinstance(other, VarSet) and self.names == other.names

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"VarSet({list(self.names)})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r} (have {self.names})") from None

    def extend(self, more: Iterable[str]) -> "VarSet":
        return VarSet(self.names + tuple(n for n in more if n not in self._index))

    def zero(self) -> Exps:
        return (0,) * len(self.names)

    def unit(self, name: str, power: int = 1) -> Exps:
        e = [0] * len(self.names)
        e[self.index(name)] = power
        return tuple(e)


def _monomial_text(vars: VarSet, exps: Exps) -> str:
    parts = []
    for name, e in zip(vars.names, exps):
        if e == 1:
            parts.append(name)
        elif e != 0:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def grlex_key(exps: Exps):
    """Sort key; ascending order of this key is descending graded-lex order."""
    return (-sum(exps), tuple(-e for e in exps))


class Monomial:
    """A power product over a ``VarSet`` (exponents non-negative)."""

    __slots__ = ("vars", "exps")

    def __init__(self, vars: VarSet, exps: Sequence[int]):
        exps = tuple(int(e) for e in exps)
        if len(exps) != len(vars):
            raise ValueError("exponent vector length does not match VarSet")
        if any(e < 0 for e in exps):
            raise ValueError("monomial exponents must be non-negative")
        self.vars = vars
        self.exps = exps

    @classmethod
    def from_dict(cls, vars: VarSet, powers: Mapping[str, int]) -> "Monomial":
        e = [0] * len(vars)
        for n, p in powers.items():
            e[vars.index(n)] += p
        return cls(vars, e)

    def as_dict(self) -> Dict[str, int]:
        return {n: e for n, e in zip(self.vars.names, self.exps) if e}

    @property
    def degree(self) -> int:
        return sum(self.exps)

    def divides(self, other: "Monomial") -> bool:
        return all(a <= b for a, b in zip(self.exps, other.exps))

    def __mul__(self, other: "Monomial") -> "Monomial":
        return Monomial(self.vars, [a + b for a, b in zip(self.exps, other.exps)])

    def __eq__(self, other) -> bool:
        return isinstance(other, Monomial) and self.vars == other.vars and self.exps == other.exps

    def __hash__(self) -> int:
        return hash((self.vars, self.exps))

    def __lt__(self, other: "Monomial") -> bool:
        return grlex_key(self.exps) < grlex_key(other.exps)

    def __repr__(self) -> str:
        return _monomial_text(self.vars, self.exps) or "1"

    def to_polynomial(self) -> "Polynomial":
        return Polynomial(self.vars, {self.exps: 1})


class Polynomial:
    """Sparse multivariate (Laurent) polynomial with exact coefficients."""

    __slots__ = ("vars", "terms")

    def __init__(self, vars: VarSet, terms: Optional[Mapping[Exps, Scalar]] = None, _trusted=False):
        self.vars = vars
        if _trusted:
            self.terms = terms
            return
        clean: Dict[Exps, Scalar] = {}
        n = len(vars)
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != n:
                raise ValueError("exponent vector length does not match VarSet")
            if c:
                clean[e] = normalize_scalar(c)
        self.terms = clean

    # construction -------------------------------------------------------
    @classmethod
    def zero(cls, vars: VarSet) -> "Polynomial":
        return cls(vars, {}, _trusted=True)

    @classmethod
    def constant(cls, vars: VarSet, c: Scalar) -> "Polynomial":
        c = normalize_scalar(c)
        return cls(vars, {vars.zero(): c} if c else {}, _trusted=True)

    @classmethod
    def var(cls, vars: VarSet, name: str, power: int = 1) -> "Polynomial":
        return cls(vars, {vars.unit(name, power): 1}, _trusted=True)

    @classmethod
    def monomial(cls, vars: VarSet, exps: Sequence[int], coeff: Scalar = 1) -> "Polynomial":
        return cls(vars, {tuple(exps): coeff})

    # basic predicates ---------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.vars == other.vars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            other = normalize_scalar(other)
            if other == 0:
                return not self.terms
            return self.terms == {self.vars.zero(): other}
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.vars, frozenset(self.terms.items())))

    def is_constant(self) -> bool:
        z = self.vars.zero()
        return all(e == z for e in self.terms)

    def constant_term(self) -> Scalar:
        return self.terms.get(self.vars.zero(), 0)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    # arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.vars != self.vars:
                raise ValueError(f"variable-set mismatch: {self.vars} vs {other.vars}")
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.vars, other)
        raise TypeError(f"cannot combine Polynomial with {type(other).__name__}")

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = normalize_scalar(v)
            else:
                out.pop(e, None)
        return Polynomial(self.vars, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.vars, {e: -c for e, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            if not other:
                return Polynomial.zero(self.vars)
            return Polynomial(self.vars, {e: normalize_scalar(c * other) for e, c in self.terms.items()},
                              _trusted=True)
        other = self._coerce(other)
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out: Dict[Exps, Scalar] = {}
        get = out.get
        for e2, c2 in b.items():
            for e1, c1 in a.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = get(e, 0) + c1 * c2
        return Polynomial(self.vars, {e: normalize_scalar(c) for e, c in out.items() if c}, _trusted=True)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("polynomial division by zero")
            return self * (Fraction(1) / other)
        raise TypeError("only division by scalars is supported")

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            if self.is_monomial():
                (e, c), = self.terms.items()
                return Polynomial(self.vars, {tuple(x * n for x in e): Fraction(1) / c ** (-n)})
            raise ValueError("negative powers only for monomials")
        result = Polynomial.constant(self.vars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # structure ----------------------------------------------------------
    def degree(self) -> int:
        """Total degree (max over terms); -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, name: str) -> int:
        i = self.vars.index(name)
        return max((e[i] for e in self.terms), default=-1)

    def min_degree_in(self, name: str) -> int:
        i = self.vars.index(name)
        return min((e[i] for e in self.terms), default=0)

    def support(self) -> list:
        return sorted(self.terms, key=grlex_key)

    def items(self):
        """Terms in descending graded-lex order."""
        return [(e, self.terms[e]) for e in self.support()]

    def monomials(self) -> list:
        return [Monomial(self.vars, e) for e in self.support()]

    def used_variables(self) -> list:
        used = set()
        for e in self.terms:
            used.update(i for i, x in enumerate(e) if x)
        return [self.vars.names[i] for i in sorted(used)]

    def content_exponents(self) -> Exps:
        """Exponents of the monomial GCD of all terms."""
        if not self.terms:
            return self.vars.zero()
        it = iter(self.terms)
        m = list(next(it))
        for e in it:
            for i, x in enumerate(e):
                if x < m[i]:
                    m[i] = x
        return tuple(m)

    def shift(self, exps: Sequence[int]) -> "Polynomial":
        """Multiply by the monomial with the given (possibly negative) exponents."""
        return Polynomial(self.vars, {tuple(x + y for x, y in zip(e, exps)): c for e, c in self.terms.items()},
                          _trusted=True)

    def coefficients_in(self, name: str) -> Dict[int, "Polynomial"]:
        """Split as sum_e P_e * name^e; the P_e do not involve ``name``."""
        i = self.vars.index(name)
        out: Dict[int, Dict[Exps, Scalar]] = {}
        for e, c in self.terms.items():
            k = e[i]
            out.setdefault(k, {})[e[:i] + (0,) + e[i + 1:]] = c
        return {k: Polynomial(self.vars, v, _trusted=True) for k, v in out.items()}

    def truncate(self, max_degree: int) -> "Polynomial":
        return Polynomial(self.vars, {e: c for e, c in self.terms.items() if sum(e) <= max_degree}, _trusted=True)

    def homogeneous_part(self, degree: int) -> "Polynomial":
        return Polynomial(self.vars, {e: c for e, c in self.terms.items() if sum(e) == degree}, _trusted=True)

    def reembed(self, vars: VarSet) -> "Polynomial":
        """Same polynomial viewed over another VarSet that contains its variables."""
        if vars == self.vars:
            return self
        pos = [vars.index(n) for n in self.vars.names]
        out = {}
        for e, c in self.terms.items():
            ne = [0] * len(vars)
            for i, x in zip(pos, e):
                ne[i] = x
            out[tuple(ne)] = c
        return Polynomial(vars, out, _trusted=True)

    def derivative(self, name: str) -> "Polynomial":
        i = self.vars.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                out[e[:i] + (e[i] - 1,) + e[i + 1:]] = c * e[i]
        return Polynomial(self.vars, out, _trusted=True)

    def evaluate(self, values: Mapping[str, Scalar]):
        total = 0
        for e, c in self.terms.items():
            v = c
            for n, x in zip(self.vars.names, e):
                if x:
                    v = v * Fraction(values[n]) ** x
            total += v
        return normalize_scalar(Fraction(total))

    # substitution -------------------------------------------------------
    def substitute(self, sigma: Mapping[str, "Polynomial"], target: Optional[VarSet] = None) -> "Polynomial":
        """Ring homomorphism sending each variable to its image (identity by default).

        Images must live over ``target`` (defaults to ``self.vars``).  Negative
        exponents are allowed only for variables whose image is a monomial.
        """
        target = target or self.vars
        images = []
        for n in self.vars.names:
            img = sigma.get(n)
            if img is None:
                img = Polynomial.var(target, n) if n in target else None
            elif img.vars != target:
                raise ValueError("substitution images must share the target VarSet")
            images.append(img)
        cache: Dict[Tuple[int, int], Polynomial] = {}

        def power(i, x):
            key = (i, x)
            if key not in cache:
                if images[i] is None:
                    raise ValueError(f"no image for variable {self.vars.names[i]}")
                cache[key] = images[i] ** x
            return cache[key]

        acc: Dict[Exps, Scalar] = {}
        for e, c in self.terms.items():
            term = None
            for i, x in enumerate(e):
                if x:
                    f = power(i, x)
                    term = f if term is None else term * f
            if term is None:
                z = target.zero()
                acc[z] = acc.get(z, 0) + c
            else:
                for te, tc in term.terms.items():
                    acc[te] = acc.get(te, 0) + c * tc
        return Polynomial(target, {e: c for e, c in acc.items() if c})

    # text ---------------------------------------------------------------
    def to_text(self) -> str:
        """Canonical serialization, e.g. ``-1*t*b12*b22 + 1*t*b23``."""
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.items():
            m = _monomial_text(self.vars, e)
            parts.append(f"{_fmt_scalar(c)}*{m}" if m else _fmt_scalar(c))
        return " + ".join(parts)

    def __repr__(self) -> str:
        return self.to_text()

    def pretty(self) -> str:
        """Human-oriented text: unit coefficients dropped, minus signs folded."""
        if not self.terms:
            return "0"
        out = ""
        for idx, (e, c) in enumerate(self.items()):
            m = _monomial_text(self.vars, e)
            neg = c < 0
            a = -c if neg else c
            body = (m if a == 1 else f"{_fmt_scalar(a)}*{m}") if m else _fmt_scalar(a)
            if idx == 0:
                out = ("-" if neg else "") + body
            else:
                out += (" - " if neg else " + ") + body
        return out

    @classmethod
    def parse(cls, text: str, vars: VarSet) -> "Polynomial":
        """Parse an arithmetic expression over ``vars`` (``^`` or ``**`` for powers)."""
        return parse_polynomial(text, vars)


ExactPolynomial = Polynomial


def poly_arith(a: Polynomial, b: Polynomial, op: str) -> Polynomial:
    if a.vars != b.vars:
        raise ValueError("variable-set mismatch")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def substitute(p: Polynomial, sigma: Mapping[str, Polynomial], target: Optional[VarSet] = None) -> Polynomial:
    return p.substitute(sigma, target)


_TOKEN_FIX = re.compile(r"(?<=\d)(?=[A-Za-z_])")


def parse_polynomial(text: str, vars: VarSet) -> Polynomial:
    """Evaluate a restricted Python-syntax expression into a Polynomial."""
    src = _TOKEN_FIX.sub("*", text.replace("^", "**").replace("−", "-"))
    tree = ast.parse(src.strip(), mode="eval")

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return Polynomial.constant(vars, node.value)
        if isinstance(node, ast.Name):
            return Polynomial.var(vars, node.id)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                exp = node.right
                sign = 1
                if isinstance(exp, ast.UnaryOp) and isinstance(exp.op, ast.USub):
                    sign, exp = -1, exp.operand
                if not (isinstance(exp, ast.Constant) and isinstance(exp.value, int)):
                    raise ValueError("exponents must be integer literals")
                return ev(node.left) ** (sign * exp.value)
            left, right = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                if not right.is_constant() or not right:
                    raise ValueError("division only by nonzero constants")
                return left * (Fraction(1) / Fraction(right.constant_term()))
        raise ValueError(f"unsupported expression element: {ast.dump(node)}")

    return ev(tree)


# ---------------------------------------------------------------------------
# linear forms


_LIN_TERM = re.compile(r"([+-]?)\s*(\d*)\s*\*?\s*([A-Za-z_]\w*)?")


class LinearForm:
    """Integer linear form over residue variables; the constant is kept for generality."""

    __slots__ = ("vars", "coeffs", "constant")

    def __init__(self, vars: VarSet, coeffs: Sequence[int], constant: int = 0):
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) != len(vars):
            raise ValueError("coefficient vector length does not match VarSet")
        self.vars = vars
        self.coeffs = coeffs
        self.constant = int(constant)

    @classmethod
    def from_dict(cls, vars: VarSet, coeffs: Mapping[str, int], constant: int = 0) -> "LinearForm":
        c = [0] * len(vars)
        for n, a in coeffs.items():
            c[vars.index(n)] += a
        return cls(vars, c, constant)

    @classmethod
    def var(cls, vars: VarSet, name: str) -> "LinearForm":
        return cls.from_dict(vars, {name: 1})

    @classmethod
    def parse(cls, text: str, vars: VarSet) -> "LinearForm":
        """Parse forms such as ``z+z3-2z1`` or ``2*z1 - z2``."""
        s = text.replace(" ", "").replace("−", "-")
        if not s:
            raise ValueError("empty linear form")
        c = [0] * len(vars)
        const = 0
        pos = 0
        while pos < len(s):
            m = _LIN_TERM.match(s, pos)
            if not m or m.end() == pos:
                raise ValueError(f"cannot parse linear form {text!r}")
            sign = -1 if m.group(1) == "-" else 1
            num = int(m.group(2)) if m.group(2) else 1
            if m.group(3):
                c[vars.index(m.group(3))] += sign * num
            elif m.group(2):
                const += sign * num
            else:
                raise ValueError(f"cannot parse linear form {text!r}")
            pos = m.end()
        return cls(vars, c, const)

    def is_zero(self) -> bool:
        return not any(self.coeffs) and not self.constant

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        return (isinstance(other, LinearForm) and self.vars == other.vars
                and self.coeffs == other.coeffs and self.constant == other.constant)

    def __hash__(self) -> int:
        return hash((self.vars, self.coeffs, self.constant))

    def __add__(self, other: "LinearForm") -> "LinearForm":
        return LinearForm(self.vars, [a + b for a, b in zip(self.coeffs, other.coeffs)],
                          self.constant + other.constant)

    def __sub__(self, other: "LinearForm") -> "LinearForm":
        return LinearForm(self.vars, [a - b for a, b in zip(self.coeffs, other.coeffs)],
                          self.constant - other.constant)

    def __neg__(self) -> "LinearForm":
        return LinearForm(self.vars, [-a for a in self.coeffs], -self.constant)

    def scale(self, m: int) -> "LinearForm":
        return LinearForm(self.vars, [a * m for a in self.coeffs], self.constant * m)

    def coefficient(self, name: str) -> int:
        return self.coeffs[self.vars.index(name)]

    def head_index(self) -> int:
        """Index of the highest variable (in VarSet order) with nonzero coefficient."""
        for i in range(len(self.coeffs) - 1, -1, -1):
            if self.coeffs[i]:
                return i
        return -1

    def head(self) -> Optional[str]:
        i = self.head_index()
        return None if i < 0 else self.vars.names[i]

    def to_polynomial(self, vars: Optional[VarSet] = None) -> Polynomial:
        vars = vars or self.vars
        terms = {}
        for n, a in zip(self.vars.names, self.coeffs):
            if a:
                terms[vars.unit(n)] = a
        if self.constant:
            terms[vars.zero()] = self.constant
        return Polynomial(vars, terms)

    def evaluate(self, values: Mapping[str, Scalar]):
        return normalize_scalar(self.constant + sum(Fraction(a) * Fraction(values[n])
                                                    for n, a in zip(self.vars.names, self.coeffs) if a))

    def canonical(self) -> Tuple[int, "LinearForm"]:
        """Return (sign, form) with the head coefficient made positive: self = sign * form."""
        i = self.head_index()
        if i >= 0 and self.coeffs[i] < 0:
            return -1, -self
        return 1, self

    def to_text(self) -> str:
        """Compact text with the outer variable first, e.g. ``z+z3-2z1``."""
        out = ""
        items = [(n, a) for n, a in zip(self.vars.names, self.coeffs) if a]
        items.reverse()
        if self.constant:
            items.append(("", self.constant))
        for n, a in items:
            sign = "-" if a < 0 else "+"
            mag = abs(a)
            body = (f"{mag}{n}" if mag != 1 else n) if n else str(mag)
            out += (("-" if sign == "-" else "") + body) if not out else sign + body
        return out or "0"

    def __repr__(self) -> str:
        return self.to_text()


def residue_varset(k: int) -> VarSet:
    """z1 < z2 < ... < zk < z (ascending radius order)."""
    return VarSet([f"z{i}" for i in range(1, k + 1)] + ["z"])


# ---------------------------------------------------------------------------
# truncated Laurent series


class TruncatedLaurent:
    """Finite window of a multivariate Laurent series.

    ``bound[i]`` is the smallest exponent kept for variable ``i`` (``None``
    means unbounded).  Coefficients are scalars or Polynomials over a
    coefficient ring (e.g. Chern symbols).
    """

    __slots__ = ("vars", "terms", "bound")

    def __init__(self, vars: VarSet, terms: Mapping[Exps, object], bound: Sequence[Optional[int]]):
        self.vars = vars
        self.bound = tuple(bound)
        self.terms = {e: c for e, c in terms.items() if c and self._inside(e)}

    def _inside(self, e: Exps) -> bool:
        return all(b is None or x >= b for x, b in zip(e, self.bound))

    @classmethod
    def from_polynomial(cls, p: Polynomial, bound: Sequence[Optional[int]]) -> "TruncatedLaurent":
        return cls(p.vars, dict(p.terms), bound)

    def with_bound(self, bound: Sequence[Optional[int]]) -> "TruncatedLaurent":
        return TruncatedLaurent(self.vars, self.terms, bound)

    def __mul__(self, other) -> "TruncatedLaurent":
        if isinstance(other, Polynomial):
            other = TruncatedLaurent.from_polynomial(other, self.bound)
        bound = tuple(b1 if b2 is None else (b2 if b1 is None else max(b1, b2))
                      for b1, b2 in zip(self.bound, other.bound))
        out: Dict[Exps, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                if all(b is None or x >= b for x, b in zip(e, bound)):
                    v = out.get(e)
                    out[e] = c1 * c2 if v is None else v + c1 * c2
        return TruncatedLaurent(self.vars, out, bound)

    def coefficient(self, exps: Sequence[int]):
        return self.terms.get(tuple(exps), 0)

    def __eq__(self, other) -> bool:
        return isinstance(other, TruncatedLaurent) and self.vars == other.vars and self.terms == other.terms

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        items = sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]))
        return " + ".join(f"({c})*{_monomial_text(self.vars, e) or '1'}" for e, c in items) or "0"


def expand_inverse_linear(L: LinearForm, order: VarSet, bound: int) -> TruncatedLaurent:
    """Series of 1/L expanded in its highest variable, keeping head exponents >= bound.

    1/(a*zq + h) = sum_j (-h)^j / (a*zq)^(j+1).
    """
    if L.is_zero():
        raise ValueError("cannot invert the zero form")
    if L.vars != order:
        raise ValueError("linear form must be over the given order")
    q = L.head_index()
    if q < 0:
        return TruncatedLaurent(order, {order.zero(): Fraction(1, L.constant)}, [None] * len(order))
    a = L.coeffs[q]
    rest = LinearForm(order, L.coeffs[:q] + (0,) + L.coeffs[q + 1:], L.constant)
    minus_h = -rest.to_polynomial(order)
    terms: Dict[Exps, Scalar] = {}
    power = Polynomial.constant(order, 1)
    j = 0
    while -(j + 1) >= bound:
        scale = Fraction(1, a ** (j + 1))
        for e, c in power.terms.items():
            ne = list(e)
            ne[q] -= j + 1
            ne = tuple(ne)
            terms[ne] = normalize_scalar(terms.get(ne, 0) + c * scale)
        power = power * minus_h
        j += 1
    b = [None] * len(order)
    b[q] = bound
    return TruncatedLaurent(order, terms, b)
