"""Exact arithmetic: rationals, polynomials in Hodge variables, truncated series.

Everything here is immutable and exact. Coefficients are :class:`fractions.Fraction`.
"""

from __future__ import annotations

import ast
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterable, Mapping, NamedTuple, Sequence, Union

Rational = Fraction


class HodgeVar(NamedTuple):
    """The symbol h^{p,j}. ``HodgeVar(0, 1)`` doubles as the irregularity ``q``."""

    p: int
    j: int

    def __str__(self) -> str:
        if (self.p, self.j) == (0, 1):
            return "q"
        return f"h[{self.p},{self.j}]"

    def __repr__(self) -> str:
        return f"HodgeVar({self.p}, {self.j})"

    def latex(self) -> str:
        if (self.p, self.j) == (0, 1):
            return "q"
        return f"h^{{{self.p},{self.j}}}"


Q = HodgeVar(0, 1)

# A monomial is a sorted tuple of (variable, exponent) pairs with exponent >= 1.
Monomial = tuple
Scalar = Union[int, Fraction]


@lru_cache(maxsize=1 << 18)
def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for v, e in b:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


def _norm(c):
    # integral coefficients are kept as int: far cheaper than Fraction arithmetic
    if isinstance(c, int):
        return int(c)
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


def _accumulate_product(out: dict, a: dict, b: dict) -> None:
    get = out.get
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = _mono_mul(m1, m2)
            out[m] = get(m, 0) + c1 * c2


def _mono_key(m: Monomial):
    # total degree descending, then higher-indexed variables first
    return (-sum(e for _, e in m), sorted(((-v.p, -v.j, -e) for v, e in m)))


class MultiPoly:
    """Polynomial over Q in :class:`HodgeVar` symbols.

    Stored as a mapping monomial -> nonzero Fraction; equality and hashing are
    structural.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        clean = {}
        for m, c in (terms or {}).items():
            c = _norm(c)
            if c:
                clean[m] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "MultiPoly":
        # caller guarantees normalized nonzero coefficients
        out = cls.__new__(cls)
        out._terms = terms
        out._hash = None
        return out

    # constructors
    @classmethod
    def const(cls, c: Scalar) -> "MultiPoly":
        return cls({(): c})

    @classmethod
    def var(cls, v: HodgeVar) -> "MultiPoly":
        return cls({((v, 1),): 1})

    @classmethod
    def h(cls, p: int, j: int) -> "MultiPoly":
        return cls.var(HodgeVar(p, j))

    @staticmethod
    def coerce(x) -> "MultiPoly":
        if isinstance(x, MultiPoly):
            return x
        if isinstance(x, HodgeVar):
            return MultiPoly.var(x)
        if isinstance(x, (int, Fraction)):
            return MultiPoly.const(x)
        raise TypeError(f"cannot convert {type(x).__name__} to MultiPoly")

    # inspection
    @property
    def terms(self) -> dict:
        return {m: Fraction(c) for m, c in self._terms.items()}

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(m == () for m in self._terms)

    def constant_term(self) -> Fraction:
        return Fraction(self._terms.get((), 0))

    def variables(self) -> frozenset:
        return frozenset(v for m in self._terms for v, _ in m)

    def degree(self, v: HodgeVar | None = None) -> int:
        if not self._terms:
            return -1
        if v is None:
            return max(sum(e for _, e in m) for m in self._terms)
        return max(dict(m).get(v, 0) for m in self._terms)

    def coefficient_in(self, v: HodgeVar, k: int) -> "MultiPoly":
        """Coefficient of ``v**k`` viewing self as a polynomial in ``v``."""
        out = {}
        for m, c in self._terms.items():
            d = dict(m)
            if d.get(v, 0) == k:
                d.pop(v, None)
                out[tuple(sorted(d.items()))] = c
        return MultiPoly(out)

    # arithmetic
    def __add__(self, other):
        other = MultiPoly.coerce(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = _norm(v) if isinstance(v, Fraction) else v
            else:
                out.pop(m, None)
        return MultiPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-MultiPoly.coerce(other))

    def __rsub__(self, other):
        return MultiPoly.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return MultiPoly({m: c * other for m, c in self._terms.items()})
        other = MultiPoly.coerce(other)
        out: dict = {}
        _accumulate_product(out, self._terms, other._terms)
        return MultiPoly(out)

    __rmul__ = __mul__

    def __truediv__(self, other: Scalar):
        return self * (1 / Fraction(other))

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not polynomials")
        result, base = MultiPoly.const(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, HodgeVar)):
            other = MultiPoly.coerce(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # evaluation / substitution
    def evaluate(self, assignment: Mapping[HodgeVar, Scalar]) -> Fraction:
        total = Fraction(0)
        for m, c in self._terms.items():
            val = c
            for v, e in m:
                try:
                    val *= assignment[v] ** e
                except KeyError:
                    raise KeyError(f"no value for variable {v}") from None
            total += val
        return total

    def substitute(self, mapping: Mapping[HodgeVar, "MultiPoly | Scalar"]) -> "MultiPoly":
        """Replace variables by polynomials; unmapped variables stay."""
        out = MultiPoly()
        cache: dict = {}
        for m, c in self._terms.items():
            term = MultiPoly.const(c)
            for v, e in m:
                if v in mapping:
                    key = (v, e)
                    if key not in cache:
                        cache[key] = MultiPoly.coerce(mapping[v]) ** e
                    term = term * cache[key]
                else:
                    term = term * MultiPoly({((v, e),): 1})
            out = out + term
        return out

    def rename(self, mapping) -> "MultiPoly":
        """Apply a variable -> (variable | scalar) map, e.g. symmetry canonicalization."""
        out: dict = {}
        for m, c in self._terms.items():
            coef = c
            exps: dict = {}
            for v, e in m:
                w = mapping(v)
                if isinstance(w, HodgeVar):
                    exps[w] = exps.get(w, 0) + e
                else:
                    coef *= Fraction(w) ** e
            key = tuple(sorted(exps.items()))
            out[key] = out.get(key, 0) + coef
        return MultiPoly(out)

    def content(self) -> Fraction:
        """Positive rational c with self / c having coprime integer coefficients."""
        from math import gcd, lcm

        if not self._terms:
            return Fraction(1)
        num = 0
        den = 1
        for c in self._terms.values():
            num = gcd(num, c.numerator)
            den = lcm(den, c.denominator)
        return Fraction(num, den)

    # printing / parsing
    def sorted_terms(self):
        return sorted(self._terms.items(), key=lambda mc: _mono_key(mc[0]))

    def _render(self, var_fmt, pow_fmt, mul: str, coef_fmt=str) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for m, c in self.sorted_terms():
            factors = [var_fmt(v) if e == 1 else pow_fmt(v, e) for v, e in m]
            mag = abs(c)
            if not factors:
                body = coef_fmt(mag)
            elif mag == 1:
                body = mul.join(factors)
            else:
                body = mul.join([coef_fmt(mag)] + factors)
            pieces.append(("-" if c < 0 else "+", body))
        sign, first = pieces[0]
        out = ("-" if sign == "-" else "") + first
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self) -> str:
        return self._render(str, lambda v, e: f"{v}^{e}", "*")

    def __repr__(self) -> str:
        return f"MultiPoly({str(self)!r})"

    def latex(self) -> str:
        return self._render(HodgeVar.latex, _latex_pow, "", _latex_coef)

    @classmethod
    def parse(cls, text: str) -> "MultiPoly":
        """Parse the format produced by ``str``: ``h[1,2] - 2*q + 1/2``.

        ``^`` and ``**`` both denote powers; ``h[p,j]`` and ``q`` are variables.
        """
        try:
            tree = ast.parse(text.replace("^", "**"), mode="eval")
        except SyntaxError as exc:
            raise ValueError(f"cannot parse polynomial {text!r}") from exc
        return _eval_ast(tree.body)


def _latex_pow(v: HodgeVar, e: int) -> str:
    base = v.latex()
    return f"{base}^{{{e}}}" if v == Q else f"({base})^{{{e}}}"


def _latex_coef(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"\\frac{{{c.numerator}}}{{{c.denominator}}}"


def _eval_ast(node) -> MultiPoly:
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return MultiPoly.const(node.value)
    if isinstance(node, ast.Name) and node.id == "q":
        return MultiPoly.var(Q)
    if isinstance(node, ast.Subscript) and isinstance(node.value, ast.Name) and node.value.id == "h":
        idx = node.slice
        if isinstance(idx, ast.Tuple) and len(idx.elts) == 2:
            p, j = (_eval_ast(e) for e in idx.elts)
            if p.is_constant() and j.is_constant():
                return MultiPoly.h(int(p.constant_term()), int(j.constant_term()))
    if isinstance(node, ast.UnaryOp):
        val = _eval_ast(node.operand)
        if isinstance(node.op, ast.USub):
            return -val
        if isinstance(node.op, ast.UAdd):
            return val
    if isinstance(node, ast.BinOp):
        left, right = _eval_ast(node.left), _eval_ast(node.right)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div) and right.is_constant() and not right.is_zero():
            return left / right.constant_term()
        if isinstance(node.op, ast.Pow) and right.is_constant():
            e = right.constant_term()
            if e.denominator == 1 and e >= 0:
                return left ** int(e)
    raise ValueError(f"unsupported polynomial syntax: {ast.dump(node)}")


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class TruncatedSeries:
    """Element of R[t]/(t^N) with MultiPoly coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable):
        coeffs = tuple(MultiPoly.coerce(c) for c in coeffs)
        if not coeffs:
            raise ValueError("truncation order must be at least 1")
        self.coeffs = coeffs

    @property
    def order(self) -> int:
        return len(self.coeffs)

    @classmethod
    def one(cls, n: int) -> "TruncatedSeries":
        return cls([1] + [0] * (n - 1))

    def __getitem__(self, i: int) -> MultiPoly:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else MultiPoly()

    def __eq__(self, other):
        return isinstance(other, TruncatedSeries) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        if other.order != self.order:
            raise ValueError(f"truncation mismatch: {self.order} vs {other.order}")
        n = self.order
        acc = [{} for _ in range(n)]
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for k in range(n - i):
                b = other.coeffs[k]
                if not b.is_zero():
                    _accumulate_product(acc[i + k], a._terms, b._terms)
        return TruncatedSeries([MultiPoly(d) for d in acc])

    def inverse(self) -> "TruncatedSeries":
        """Multiplicative inverse; requires constant term 1."""
        if self.coeffs[0] != MultiPoly.const(1):
            raise ValueError("inverse needs constant term 1")
        n = self.order
        inv = [MultiPoly.const(1)]
        for i in range(1, n):
            acc = MultiPoly()
            for k in range(1, i + 1):
                acc = acc + self.coeffs[k] * inv[i - k]
            inv.append(-acc)
        return TruncatedSeries(inv)

    def evaluate(self, assignment: Mapping[HodgeVar, Scalar]) -> list:
        return [c.evaluate(assignment) for c in self.coeffs]

    def substitute(self, mapping) -> "TruncatedSeries":
        return TruncatedSeries(c.substitute(mapping) for c in self.coeffs)

    def rename(self, mapping) -> "TruncatedSeries":
        return TruncatedSeries(c.rename(mapping) for c in self.coeffs)

    def __repr__(self) -> str:
        return "TruncatedSeries([" + ", ".join(str(c) for c in self.coeffs) + "])"


def generalized_binomial(e: MultiPoly, i: int) -> MultiPoly:
    """C(e, i) = e(e-1)...(e-i+1)/i! as a polynomial in the variables of ``e``."""
    out = MultiPoly.const(1)
    for k in range(i):
        out = out * (e - k)
    return out / factorial(i)


def expand_binomial_power(j: int, e, n: int) -> TruncatedSeries:
    """(1 - j t)^e mod t^n, for any polynomial exponent ``e``."""
    if n < 1:
        raise ValueError("truncation order must be at least 1")
    if j < 1:
        raise ValueError("j must be a positive integer")
    e = MultiPoly.coerce(e)
    if e.is_constant():
        # integer exponents: exact numeric binomials are much cheaper
        val = e.constant_term()
        coeffs = []
        c = Fraction(1)
        for i in range(n):
            coeffs.append(c)
            c = c * (val - i) / (i + 1) * (-j)
        return TruncatedSeries(coeffs)
    coeffs = []
    falling = MultiPoly.const(1)
    for i in range(n):
        coeffs.append(falling * Fraction((-j) ** i, factorial(i)))
        falling = falling * (e - i)
    return TruncatedSeries(coeffs)


def series_product(factors: Sequence[TruncatedSeries]) -> TruncatedSeries:
    """Exact truncated product of a non-empty list of series of equal order."""
    if not factors:
        raise ValueError("series_product needs at least one factor")
    n = factors[0].order
    for f in factors:
        if f.order != n:
            raise ValueError(f"truncation mismatch: {f.order} vs {n}")
    acc = factors[0]
    for f in factors[1:]:
        acc = acc * f
    return acc


def evaluate_poly(p: MultiPoly, assignment: Mapping[HodgeVar, Scalar]) -> Fraction:
    return MultiPoly.coerce(p).evaluate(assignment)


def numeric_binomial_series(j: int, e: int, n: int) -> list:
    """Integer coefficients of (1 - j t)^e mod t^n."""
    out = []
    c = 1
    # c_i = C(e, i) (-j)^i, updated with exact integer division
    for i in range(n):
        out.append(c)
        c = c * (e - i) * (-j)
        c //= (i + 1)
    return out


def numeric_series_product(factors: Sequence[Sequence[int]], n: int) -> list:
    acc = [1] + [0] * (n - 1)
    for f in factors:
        new = [0] * n
        for i, a in enumerate(acc):
            if a:
                for k in range(n - i):
                    b = f[k]
                    if b:
                        new[i + k] += a * b
        acc = new
    return acc
