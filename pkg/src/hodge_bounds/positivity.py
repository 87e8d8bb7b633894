"""Partitions, Schur determinants and the constraint catalog.

Every inequality the engine knows about is a :class:`Constraint`: a polynomial in
canonical Hodge variables, a relation, hypotheses decidable from the profile,
and provenance tags naming the mechanism that produced it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .algebra import HodgeVar, MultiPoly, Q, numeric_binomial_series, numeric_series_product
from .derivative import (
    ChernSeries, EulerKind, SeriesKind, chern_series, euler_characteristic, numeric_coefficients,
    partial_euler, series_applies,
)
from .diamond import INFINITY, ManifoldProfile, canonicalize

NONNEG = "NONNEG"
ZERO = "ZERO"

DEFAULT_WEIGHT_CEILING = 12
# symbolic Schur expansion cost grows fast with weight; heavier partitions are checked numerically
SYMBOLIC_SCHUR_CAP = 6

_SERIES_SYMBOL = {SeriesKind.GAMMA: "gamma", SeriesKind.DELTA: "delta", SeriesKind.EPSILON: "epsilon"}


# --- partitions -------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Partition:
    parts: tuple

    def __post_init__(self):
        parts = tuple(self.parts)
        if any(x <= 0 for x in parts) or any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"not a partition: {parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def weight(self) -> int:
        return sum(self.parts)

    def conjugate(self) -> "Partition":
        if not self.parts:
            return self
        return Partition(tuple(sum(1 for x in self.parts if x > i) for i in range(self.parts[0])))

    def is_column(self) -> bool:
        return all(x == 1 for x in self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.parts)) + ")"


def partitions_of(n: int, largest: Optional[int] = None) -> list:
    """Partitions of n in lexicographically descending order."""
    if n == 0:
        return [()]
    largest = n if largest is None else min(largest, n)
    out = []
    for first in range(largest, 0, -1):
        for rest in partitions_of(n - first, first):
            out.append((first,) + rest)
    return out


def partitions_up_to_weight(w: int) -> list:
    """All partitions of weight 1..w, by weight, then lexicographically descending."""
    if w < 0:
        raise ValueError("weight must be non-negative")
    return [Partition(p) for n in range(1, w + 1) for p in partitions_of(n)]


# --- determinants -----------------------------------------------------------


def _det_numeric(rows: list) -> Fraction:
    a = [[Fraction(x) for x in r] for r in rows]
    n = len(a)
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det *= a[col][col]
        for r in range(col + 1, n):
            if a[r][col]:
                f = a[r][col] / a[col][col]
                for k in range(col, n):
                    a[r][k] -= f * a[col][k]
    return det


def _det_symbolic(rows: list) -> MultiPoly:
    # Laplace expansion along rows, memoized on the set of used columns
    n = len(rows)
    memo: dict = {}

    def minor(r: int, used: int) -> MultiPoly:
        if r == n:
            return MultiPoly.const(1)
        key = used
        if key in memo:
            return memo[key]
        total = MultiPoly()
        sign = 1
        for c in range(n):
            if used >> c & 1:
                continue
            entry = rows[r][c]
            if not entry.is_zero():
                term = entry * minor(r + 1, used | (1 << c))
                total = total + (term if sign > 0 else -term)
            sign = -sign
        memo[key] = total
        return total

    return minor(0, 0)


def complete_from_elementary(c: Sequence) -> list:
    """h_0..h_{n-1} from c_0..c_{n-1}, using sum_k (-1)^k c_k h_{n-k} = 0."""
    symbolic = any(isinstance(x, MultiPoly) for x in c)
    zero = MultiPoly() if symbolic else Fraction(0)
    h = [MultiPoly.const(1) if symbolic else Fraction(1)]
    for n in range(1, len(c)):
        acc = zero
        for k in range(1, n + 1):
            term = c[k] * h[n - k]
            acc = acc + term if k % 2 else acc - term
        h.append(acc)
    return h


def _jacobi_trudi(parts: tuple, seq: Sequence, symbolic: bool):
    n = len(parts)
    if n == 0:
        return MultiPoly.const(1) if symbolic else Fraction(1)

    def entry(k):
        if k < 0 or k >= len(seq):
            return MultiPoly() if symbolic else 0
        return seq[k]

    rows = [[entry(parts[i] - i + j) for j in range(n)] for i in range(n)]
    return _det_symbolic(rows) if symbolic else _det_numeric(rows)


def schur_of_chern(lam: Partition, c: Sequence, method: str = "elementary"):
    """Schur function of the Chern roots.

    ``method="elementary"`` is the Giambelli form det(c_{lam'_i - i + j}) with the
    conjugate partition; ``"complete"`` is det(h_{lam_i - i + j}) where h_k are
    the complete homogeneous functions recovered from ``c``. Both give the same
    value. ``c[0]`` must be 1; missing indices are 0.
    """
    symbolic = any(isinstance(x, MultiPoly) for x in c)
    c = [MultiPoly.coerce(x) for x in c] if symbolic else [Fraction(x) for x in c]
    if method == "elementary":
        return _jacobi_trudi(lam.conjugate().parts, c, symbolic)
    if method == "complete":
        need = lam.weight + 1
        padded = list(c[:need]) + [MultiPoly() if symbolic else Fraction(0)] * max(0, need - len(c))
        return _jacobi_trudi(lam.parts, complete_from_elementary(padded), symbolic)
    raise ValueError(f"unknown method {method!r}")


# --- constraints --------------------------------------------------------------

_HYP_RE = re.compile(r"^\s*([qdm])\s*(>=|<=|>|<|=)\s*(-?\d+|inf)\s*$")


@dataclass(frozen=True, order=True)
class Hypothesis:
    """A comparison of one profile field against an integer, e.g. ``q > 3``."""

    name: str
    op: str
    value: object

    def __str__(self) -> str:
        return f"{self.name} {self.op} {self.value}"

    @classmethod
    def parse(cls, text: str) -> "Hypothesis":
        m = _HYP_RE.match(text)
        if not m:
            raise ValueError(f"cannot parse hypothesis {text!r}")
        name, op, val = m.groups()
        return cls(name, op, val if val == "inf" else int(val))

    def holds(self, pf: ManifoldProfile) -> Optional[bool]:
        """Truth value on the profile; None if q is symbolic."""
        lhs = {"q": pf.q, "d": pf.d, "m": pf.m}[self.name]
        if lhs is None:
            return None
        if self.value == "inf" or lhs is INFINITY:
            same = (self.value == "inf") == (lhs is INFINITY)
            if self.op == "=":
                return same
            return False
        rhs = self.value
        return {">": lhs > rhs, ">=": lhs >= rhs, "<": lhs < rhs, "<=": lhs <= rhs, "=": lhs == rhs}[self.op]


def hyp(text: str) -> Hypothesis:
    return Hypothesis.parse(text)


@dataclass(frozen=True)
class Guard:
    """Constraint only applies while ``rank < below``."""

    rank: MultiPoly
    below: int

    def active(self, assignment) -> bool:
        return self.rank.evaluate(assignment) < self.below


@dataclass(frozen=True)
class Constraint:
    expr: MultiPoly
    relation: str
    hypotheses: tuple = ()
    provenance: tuple = ()
    p: Optional[int] = None
    guard: Optional[Guard] = None

    def key(self):
        return (self.expr / self.expr.content() if not self.expr.is_zero() else self.expr,
                self.relation, self.hypotheses, self.guard)

    def applies(self, pf: ManifoldProfile) -> bool:
        return all(h.holds(pf) is not False for h in self.hypotheses)

    def value(self, assignment) -> Fraction:
        return self.expr.evaluate(assignment)

    def satisfied(self, assignment) -> bool:
        if self.guard is not None and not self.guard.active(assignment):
            return True
        v = self.value(assignment)
        return v >= 0 if self.relation == NONNEG else v == 0

    def to_json(self) -> dict:
        out = {
            "expr": str(self.expr),
            "relation": self.relation,
            "hypotheses": [str(h) for h in self.hypotheses],
            "provenance": list(self.provenance),
            "p": self.p,
        }
        if self.guard is not None:
            out["guard"] = {"rank": str(self.guard.rank), "below": self.guard.below}
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "Constraint":
        guard = None
        if obj.get("guard") is not None:
            guard = Guard(MultiPoly.parse(obj["guard"]["rank"]), int(obj["guard"]["below"]))
        return cls(
            MultiPoly.parse(obj["expr"]), obj["relation"],
            tuple(Hypothesis.parse(h) for h in obj["hypotheses"]),
            tuple(obj["provenance"]), obj["p"], guard,
        )

    def describe(self) -> str:
        rel = ">= 0" if self.relation == NONNEG else "= 0"
        text = f"{self.expr} {rel}"
        if self.guard is not None:
            text += f"  when {self.guard.rank} < {self.guard.below}"
        return text

    def latex(self) -> str:
        """Leading term on the left, e.g. ``h^{1,1} \\geq 2q``."""
        rel = r"\geq" if self.relation == NONNEG else "="
        terms = self.expr.sorted_terms()
        if terms and terms[0][1] > 0 and terms[0][0]:
            mono, coef = terms[0]
            lead = MultiPoly({mono: coef})
            text = f"{lead.latex()} {rel} {(lead - self.expr).latex()}"
        else:
            text = f"{self.expr.latex()} {rel} 0"
        if self.guard is not None:
            text += rf" \text{{ if }} {self.guard.rank.latex()} < {self.guard.below}"
        return text


def dedupe(constraints: Iterable[Constraint]) -> list:
    """Merge constraints with equal canonical content; provenance accumulates."""
    merged: dict = {}
    for c in constraints:
        k = c.key()
        if k in merged:
            old = merged[k]
            prov = old.provenance + tuple(t for t in c.provenance if t not in old.provenance)
            merged[k] = replace(old, provenance=prov)
        else:
            merged[k] = c
    return sort_constraints(merged.values())


def sort_constraints(constraints: Iterable[Constraint]) -> list:
    return sorted(constraints, key=lambda c: (
        -1 if c.p is None else c.p, c.provenance, str(c.expr), c.relation,
        [str(h) for h in c.hypotheses], "" if c.guard is None else str(c.guard.rank)))


def _omega(p: int) -> str:
    return f"Omega^{p}"


def _is_tautology(expr: MultiPoly) -> bool:
    return expr.is_constant() and expr.constant_term() >= 0


# --- extraction ----------------------------------------------------------------


def _weight_hyp(i: int) -> Hypothesis:
    return hyp(f"q > {i}")


def extract_positivity_constraints(cs: ChernSeries, pf: ManifoldProfile,
                                   weight_cap: Optional[int] = None,
                                   schur_cap: Optional[int] = None) -> list:
    """Nonnegativity, Schur-positivity and vanishing statements for one series.

    ``weight_cap`` bounds coefficient indices and defaults to the truncation
    order of the series minus one. ``schur_cap`` bounds partition weights and
    defaults to ``weight_cap``.
    """
    if cs.kind is SeriesKind.EPSILON and pf.m is not INFINITY:
        raise ValueError("epsilon series only arise for m = INFINITY")
    if cs.kind is not SeriesKind.EPSILON and pf.m is INFINITY:
        raise ValueError(f"{cs.kind.value} series need finite m")
    top = cs.series.order - 1
    cap = top if weight_cap is None else min(weight_cap, top)
    if pf.q is not None:
        cap = min(cap, pf.q - 1)
    name = _SERIES_SYMBOL[cs.kind]
    out = []
    if cs.vacuous:
        return out
    c = [cs.series[i] for i in range(cap + 1)]
    if cs.kind is SeriesKind.EPSILON:
        for i in range(1, cap + 1):
            out.append(Constraint(c[i], ZERO, (_weight_hyp(i),),
                                  (f"epsilon-vanishing {name}_{i}({_omega(cs.p)})",), cs.p))
        return out
    for i in range(1, cap + 1):
        out.append(Constraint(c[i], NONNEG, (_weight_hyp(i),),
                              (f"chern-coefficient {name}_{i}({_omega(cs.p)})",), cs.p))
    scap = cap if schur_cap is None else min(schur_cap, cap)
    for lam in partitions_up_to_weight(scap):
        expr = schur_of_chern(lam, c)
        tag = f"schur {name}({_omega(cs.p)}) s_{lam}"
        if lam.is_column():
            tag += " [coefficient]"
        out.append(Constraint(expr, NONNEG, (_weight_hyp(lam.weight),), (tag,), cs.p))
    for i in range(1, cap + 1):
        if c[i].is_zero():
            continue
        out.append(Constraint(c[i], ZERO, (_weight_hyp(i),),
                              (f"rank-vanishing {name}_{i}({_omega(cs.p)})",), cs.p,
                              Guard(cs.rank, i)))
    return [x for x in out if not (x.guard is None and x.relation == NONNEG and _is_tautology(x.expr))]


def extract_rank_constraints(pf: ManifoldProfile, p: int) -> list:
    """Lower bounds on the ranks of the kernel/cokernel sheaves and on h^{p,1}."""
    if pf.m is INFINITY:
        return []
    d, m = pf.d, pf.m
    out = []
    if d - p < m <= d:
        hyps = (hyp(f"q > {max(m - d + p, d - p - 1)}"),)
        rank = partial_euler(pf, p, EulerKind.GEQ)
        out.append(Constraint(rank - (MultiPoly.var(Q) + (d - m - p)), NONNEG, hyps,
                              (f"rank-bound gamma({_omega(p)})",), p))
        h = canonicalize(MultiPoly.h(d - p, 1) - MultiPoly.h(d - p, 0) - MultiPoly.var(Q) + 1, d)
        out.append(Constraint(h, NONNEG, hyps, (f"surjection-bound h^{{{d - p},1}}",), p))
    if p < m <= d:
        hyps = (hyp(f"q > {max(m - p, p - 1)}"),)
        rank = partial_euler(pf, p, EulerKind.LEQ)
        out.append(Constraint(rank - (MultiPoly.var(Q) - m + p), NONNEG, hyps,
                              (f"rank-bound delta({_omega(p)})",), p))
        h = canonicalize(MultiPoly.h(p, 1) - MultiPoly.h(p, 0) - MultiPoly.var(Q) + 1, d)
        out.append(Constraint(h, NONNEG, hyps, (f"surjection-bound h^{{{p},1}}",), p))
    return [c for c in out if not _is_tautology(c.expr)]


def extract_euler_constraints(pf: ManifoldProfile) -> list:
    """Signed Euler characteristic bounds for m = d, q > d."""
    d = pf.d
    if d < 2:
        return []
    hyps = (hyp(f"m = {d}"), hyp(f"q > {d}"), hyp("d >= 2"))
    out = [Constraint(euler_characteristic(d, 1) * (-1) ** (d - 1) - 2, NONNEG, hyps,
                      (f"euler-sign chi({_omega(1)})",), 1)]
    for p in range(2, d - 1):
        out.append(Constraint(euler_characteristic(d, p) * (-1) ** (d - p) - 1, NONNEG, hyps,
                              (f"euler-sign chi({_omega(p)})",), p))
    return out


def chi_omega(d: int) -> MultiPoly:
    """chi(omega_X) = (-1)^d chi(O_X)."""
    return euler_characteristic(d, 0) * (-1) ** d


def extract_md_extras(pf: ManifoldProfile) -> list:
    """Bounds valid when m = d: wedge injectivity, the 4q-10 bound, chi(omega) >= q-d."""
    d = pf.d
    base = hyp(f"m = {d}")
    qv = MultiPoly.var(Q)
    out = []
    for k in range(0, d + 1):
        expr = canonicalize(MultiPoly.h(0, k), d) - (qv - k) * k - 1
        if not expr.is_zero():
            out.append(Constraint(expr, NONNEG, (base,), (f"wedge-injectivity h^{{0,{k}}}",), 0))
    if d >= 3:
        out.append(Constraint(canonicalize(MultiPoly.h(0, 2), d) - qv * 4 + 10, NONNEG,
                              (base, hyp("d >= 3")), ("linear-h02-bound",), 0))
    out.append(Constraint(chi_omega(d) - qv + d, NONNEG, (base, hyp(f"q >= {d}")),
                          ("chi-omega-bound",), 0))
    return [c for c in out if not _is_tautology(c.expr)]


# --- rank derivation from the vanishing clause ----------------------------------


def _q_only_factors(kind: SeriesKind, pf: ManifoldProfile, p: int) -> Optional[list]:
    from .derivative import _exponents

    factors = []
    for j, col, sign in _exponents(kind, pf, p):
        e = canonicalize(MultiPoly.h(p, col), pf.d) * sign
        if not e.variables() <= {Q}:
            return None
        factors.append((j, e))
    return factors


def minimal_admissible_rank(kind: SeriesKind, pf: ManifoldProfile, p: int, q: int) -> int:
    """Largest i < q whose coefficient is nonzero (0 if none).

    Only defined when the series depends on q alone. The vanishing clause then
    forces rank >= this value.
    """
    factors = _q_only_factors(kind, pf, p)
    if factors is None:
        raise ValueError("series depends on Hodge numbers other than q")
    series = numeric_series_product(
        [numeric_binomial_series(j, int(e.evaluate({Q: q})), q) for j, e in factors], q)
    nonzero = [i for i in range(1, q) if series[i] != 0]
    return max(nonzero, default=0)


def derive_rank_bounds(pf: ManifoldProfile, p: int, fit_range: int = 24) -> list:
    """Rank lower bounds forced by the vanishing clause.

    With numeric q the minimal admissible rank is computed directly. With
    symbolic q it is computed over a window of q values and fitted by an exact
    affine function of q, which is then checked on every sample.
    """
    out = []
    for kind in (SeriesKind.GAMMA, SeriesKind.DELTA):
        if not series_applies(kind, pf, p) or _q_only_factors(kind, pf, p) is None:
            continue
        rank = partial_euler(pf, p, EulerKind.GEQ if kind is SeriesKind.GAMMA else EulerKind.LEQ)
        tag = (f"rank-derivation {_SERIES_SYMBOL[kind]}({_omega(p)})",)
        if pf.q is not None:
            r = minimal_admissible_rank(kind, pf, p, pf.q)
            if r > 0:
                out.append(Constraint(rank - r, NONNEG, (hyp(f"q = {pf.q}"),), tag, p))
            continue
        for start in range(2, 10):
            qs = range(start, start + fit_range)
            vals = [minimal_admissible_rank(kind, pf, p, q) for q in qs]
            slope = vals[1] - vals[0]
            if all(v == vals[0] + slope * (q - start) for q, v in zip(qs, vals)):
                intercept = vals[0] - slope * start
                bound = MultiPoly.var(Q) * slope + intercept
                out.append(Constraint(rank - bound, NONNEG, (hyp(f"q >= {start}"),), tag, p))
                break
    return out


# --- catalog -------------------------------------------------------------------


@dataclass(frozen=True)
class SeriesTail:
    """Statements checked numerically rather than symbolically.

    Coefficients of index ``start``..q-1 (nonnegativity and the vanishing
    clause), and Schur determinants of weight ``schur_from``..``schur_to``.
    """

    kind: SeriesKind
    p: int
    start: int
    schur_from: int = 0
    schur_to: int = -1

    @property
    def label(self) -> str:
        name, om = _SERIES_SYMBOL[self.kind], _omega(self.p)
        parts = []
        if self.schur_from <= self.schur_to:
            parts.append(f"schur-tail {name}({om}) weights {self.schur_from}..{self.schur_to}")
        parts.append(f"coefficient-tail {name}_{{{self.start}..q-1}}({om})")
        return "; ".join(parts)

    def failures(self, pf: ManifoldProfile, assignment, first_only: bool = False) -> list:
        """(index or partition, value, reason) for every failing statement."""
        q = pf.q
        coeffs = numeric_coefficients(self.kind, pf, self.p, assignment, q)
        out = []
        if self.kind is SeriesKind.EPSILON:
            for i in range(self.start, q):
                if coeffs[i] != 0:
                    out.append((i, coeffs[i], "nonzero"))
                    if first_only:
                        break
            return out
        rank_kind = EulerKind.GEQ if self.kind is SeriesKind.GAMMA else EulerKind.LEQ
        rank = partial_euler(pf, self.p, rank_kind).evaluate(assignment)
        for i in range(self.start, q):
            if coeffs[i] < 0:
                out.append((i, coeffs[i], "negative"))
            elif rank < i and coeffs[i] != 0:
                out.append((i, coeffs[i], "nonzero above rank"))
            if first_only and out:
                return out
        for w in range(max(self.schur_from, 1), self.schur_to + 1):
            for parts in partitions_of(w):
                lam = Partition(parts)
                if lam.is_column():
                    continue
                v = schur_of_chern(lam, coeffs)
                if v < 0:
                    out.append((lam, v, "negative Schur value"))
                    if first_only:
                        return out
        return out

    def statement_holds(self, pf: ManifoldProfile, assignment, key, reason: str) -> bool:
        """Re-test the single statement identified by a failure record."""
        n = (key.weight if isinstance(key, Partition) else key) + 1
        coeffs = numeric_coefficients(self.kind, pf, self.p, assignment, max(n, 2))
        if isinstance(key, Partition):
            return schur_of_chern(key, coeffs) >= 0
        if reason == "nonzero":
            return coeffs[key] == 0
        if reason == "negative":
            return coeffs[key] >= 0
        return coeffs[key] == 0 or not self.rank_below(pf, assignment, key)

    def rank(self, pf: ManifoldProfile) -> MultiPoly:
        rank_kind = EulerKind.GEQ if self.kind is SeriesKind.GAMMA else EulerKind.LEQ
        return partial_euler(pf, self.p, rank_kind)

    def rank_below(self, pf: ManifoldProfile, assignment, i: int) -> bool:
        return self.rank(pf).evaluate(assignment) < i

    def min_coefficient(self, pf: ManifoldProfile, assignment) -> int:
        coeffs = numeric_coefficients(self.kind, pf, self.p, assignment, pf.q)
        return min(coeffs[self.start:pf.q], default=0)


@dataclass
class Catalog:
    profile: ManifoldProfile
    weight_cap: int
    constraints: list
    tails: list = field(default_factory=list)
    schur_cap: Optional[int] = None

    def active(self) -> list:
        return [c for c in self.constraints if c.applies(self.profile)]

    def to_json(self) -> dict:
        pf = self.profile
        return {
            "profile": {"d": pf.d, "q": pf.q, "m": str(pf.m) if pf.m is INFINITY else pf.m},
            "weight_cap": self.weight_cap,
            "symbolic_schur_cap": self.schur_cap,
            "constraints": [c.to_json() for c in self.constraints],
            "tails": [t.label for t in self.tails],
        }


def default_weight_cap(pf: ManifoldProfile) -> int:
    if pf.q is None:
        raise ValueError("a symbolic irregularity needs an explicit weight cap")
    return max(0, min(pf.q - 1, DEFAULT_WEIGHT_CEILING))


def build_catalog(pf: ManifoldProfile, weight_cap: Optional[int] = None,
                  ps: Optional[Iterable[int]] = None, include_tails: bool = True,
                  symbolic_schur_cap: int = SYMBOLIC_SCHUR_CAP) -> Catalog:
    """Every constraint the engine derives for the profile.

    Coefficient statements are symbolic up to ``weight_cap`` and Schur
    statements up to ``min(weight_cap, symbolic_schur_cap)``. With a numeric q
    everything above those caps (coefficients up to q-1, Schur weights up to
    ``weight_cap``) becomes a :class:`SeriesTail` check.
    """
    cap = default_weight_cap(pf) if weight_cap is None else weight_cap
    if pf.q is not None:
        cap = min(cap, pf.q - 1)
    cap = max(cap, 0)
    scap = max(0, min(cap, symbolic_schur_cap))
    d = pf.d
    ps = list(range(d + 1)) if ps is None else list(ps)
    for p in ps:
        if not 0 <= p <= d:
            raise ValueError(f"p={p} outside [0, {d}]")
    out: list = []
    tails: list = []
    for p in ps:
        for kind in (SeriesKind.GAMMA, SeriesKind.DELTA, SeriesKind.EPSILON):
            if not series_applies(kind, pf, p):
                continue
            if cap >= 1:
                cs = chern_series(kind, pf, p, max(cap + 1, 2))
                out.extend(extract_positivity_constraints(cs, pf, cap, scap))
            if include_tails and pf.q is not None and (cap < pf.q - 1 or scap < cap):
                tails.append(SeriesTail(kind, p, cap + 1, scap + 1, cap))
        out.extend(extract_rank_constraints(pf, p))
        out.extend(derive_rank_bounds(pf, p))
    wanted = set(ps)
    if pf.m is not INFINITY:
        out.extend(c for c in extract_euler_constraints(pf) if c.p in wanted)
        if pf.m == d:
            out.extend(c for c in extract_md_extras(pf) if c.p in wanted)
    return Catalog(pf, cap, dedupe(out), tails, scap)
