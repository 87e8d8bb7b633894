"""Consumers of the constraint catalog.

Feasibility checks for concrete diamonds, closed-form square-root bounds from
degree-two constraints, integer minimization of single Hodge numbers, the
asymptotic comparison tables and the regularity bound.
"""

from __future__ import annotations

import enum
import itertools
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .algebra import HodgeVar, MultiPoly, Q, format_rational
from .diamond import (
    DiamondError, HodgeDiamond, ManifoldProfile, canonical_var, diamond_from_assignment,
    free_variables, validate_diamond,
)
from .positivity import NONNEG, ZERO, Catalog, Constraint, SeriesTail, build_catalog

DEFAULT_SEARCH_CEILING = 10 ** 7
CEILING_ENV = "HODGE_BOUNDS_SEARCH_CEILING"


class Status(enum.Enum):
    SATISFIED = "satisfied"
    VIOLATED = "violated"
    INACTIVE = "inactive"


@dataclass(frozen=True)
class ConstraintResult:
    constraint: Constraint
    status: Status
    margin: Optional[Fraction]

    def to_json(self) -> dict:
        return {
            "provenance": list(self.constraint.provenance),
            "expr": str(self.constraint.expr),
            "relation": self.constraint.relation,
            "status": self.status.value,
            "margin": None if self.margin is None else format_rational(self.margin),
        }


@dataclass(frozen=True)
class TailResult:
    tail: SeriesTail
    failures: tuple

    @property
    def status(self) -> Status:
        return Status.VIOLATED if self.failures else Status.SATISFIED

    def to_json(self) -> dict:
        return {
            "provenance": [self.tail.label],
            "status": self.status.value,
            "failures": [[str(i), str(v), why] for i, v, why in self.failures],
        }


@dataclass
class FeasibilityReport:
    profile: ManifoldProfile
    weight_cap: Optional[int]
    results: list
    tails: list = field(default_factory=list)

    @property
    def feasible(self) -> bool:
        return not self.violations() and not any(t.failures for t in self.tails)

    @property
    def verdict(self) -> str:
        return "FEASIBLE" if self.feasible else "INFEASIBLE"

    def violations(self) -> list:
        return [r for r in self.results if r.status is Status.VIOLATED]

    def count(self, status: Status) -> int:
        return sum(1 for r in self.results if r.status is status)

    def to_json(self) -> dict:
        pf = self.profile
        return {
            "verdict": self.verdict,
            "catalog_relative": True,
            "profile": {"d": pf.d, "q": pf.q, "m": str(pf.m)},
            "weight_cap": self.weight_cap,
            "constraints": [r.to_json() for r in self.results],
            "tails": [t.to_json() for t in self.tails],
        }

    def summary(self) -> str:
        return (f"{self.verdict}: {self.count(Status.SATISFIED)} satisfied, "
                f"{self.count(Status.VIOLATED)} violated, {self.count(Status.INACTIVE)} inactive, "
                f"{sum(1 for t in self.tails if t.failures)} failing tail checks")


def _evaluate(c: Constraint, pf: ManifoldProfile, assignment) -> ConstraintResult:
    if not c.applies(pf):
        return ConstraintResult(c, Status.INACTIVE, None)
    if c.guard is not None and not c.guard.active(assignment):
        return ConstraintResult(c, Status.INACTIVE, None)
    v = c.value(assignment)
    ok = v >= 0 if c.relation == NONNEG else v == 0
    return ConstraintResult(c, Status.SATISFIED if ok else Status.VIOLATED, v)


def check_diamond(dm: HodgeDiamond, pf: ManifoldProfile,
                  constraints: "Catalog | Iterable[Constraint] | None" = None,
                  tails: Optional[Iterable[SeriesTail]] = None) -> FeasibilityReport:
    """Evaluate every constraint on ``dm`` exactly.

    ``constraints`` may be a :class:`Catalog` (its tails are used too), a plain
    list, or None to build the default catalog for ``pf``.
    """
    if dm.free():
        raise DiamondError(f"diamond has unassigned entries {dm.free()}")
    if pf.q is None:
        pf = ManifoldProfile(pf.d, dm[1, 0], pf.m, pf.albanese)
    report = validate_diamond(dm, pf)
    if not report.valid:
        raise DiamondError(str(report))
    cap = None
    if constraints is None:
        constraints = build_catalog(pf)
    if isinstance(constraints, Catalog):
        cap = constraints.weight_cap
        tails = constraints.tails if tails is None else tails
        constraints = constraints.constraints
    assignment = dm.assignment()
    results = [_evaluate(c, pf, assignment) for c in constraints]
    tail_results = [TailResult(t, tuple(t.failures(pf, assignment))) for t in (tails or [])]
    return FeasibilityReport(pf, cap, results, tail_results)


# --- closed-form bounds ------------------------------------------------------


class QuadraticFormError(ValueError):
    """The constraint has no lower-bound form in the requested variable."""


def _squarefree_split(n: int) -> tuple:
    """n = a^2 * b with b squarefree; returns (a, b)."""
    a, b = 1, 1
    k = 2
    while k * k <= n:
        while n % (k * k) == 0:
            n //= k * k
            a *= k
        if n % k == 0:
            n //= k
            b *= k
        k += 1
    return a, b * n


@dataclass(frozen=True)
class BoundExpr:
    """target >= linear + radical_coeff * sqrt(radicand).

    ``linear`` and ``radicand`` are affine polynomials in the parameters. A
    zero ``radical_coeff`` means a purely linear bound. The radicand is
    normalized to integer coefficients with squarefree content, so equal bounds
    compare equal structurally.
    """

    target: HodgeVar
    linear: MultiPoly
    radical_coeff: Fraction
    radicand: MultiPoly
    side_conditions: tuple = ()

    def __post_init__(self):
        if self.radical_coeff == 0 and not self.radicand.is_zero():
            raise ValueError("a linear bound has zero radicand")

    def key(self):
        return (self.target, self.linear, self.radical_coeff, self.radicand)

    def __eq__(self, other):
        return isinstance(other, BoundExpr) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    @classmethod
    def make(cls, target: HodgeVar, linear: MultiPoly, coeff: Fraction, radicand: MultiPoly) -> "BoundExpr":
        """Normalize ``coeff * sqrt(radicand)`` and build the bound."""
        coeff = Fraction(coeff)
        linear = MultiPoly.coerce(linear)
        radicand = MultiPoly.coerce(radicand)
        if coeff == 0 or radicand.is_zero():
            return cls(target, linear, Fraction(0), MultiPoly())
        k = radicand.content()
        primitive = radicand / k
        # sqrt(n/m) = sqrt(n*m)/m, then pull square factors out
        a, b = _squarefree_split(k.numerator * k.denominator)
        coeff = coeff * Fraction(a, k.denominator)
        radicand = primitive * b
        if radicand.is_constant():
            r = radicand.constant_term()
            s = math.isqrt(int(r))
            if s * s == r:
                return cls(target, linear + coeff * s, Fraction(0), MultiPoly())
        return cls(target, linear, coeff, radicand, (f"{radicand} >= 0",))

    def radicand_value(self, assignment) -> Fraction:
        return self.radicand.evaluate(assignment)

    def evaluate(self, assignment) -> float:
        lin = self.linear.evaluate(assignment)
        if self.radical_coeff == 0:
            return float(lin)
        r = self.radicand_value(assignment)
        if r < 0:
            raise ValueError("radicand is negative at this point")
        return float(lin) + float(self.radical_coeff) * math.sqrt(r)

    def _holds_at(self, n: int, lin: Fraction, r: Fraction) -> bool:
        # exact test of n >= lin + c*sqrt(r)
        x = n - lin
        c = self.radical_coeff
        if c == 0:
            return x >= 0
        if c > 0:
            return x >= 0 and x * x >= c * c * r
        return x >= 0 or x * x <= c * c * r

    def ceiling(self, assignment) -> int:
        """Least integer satisfying the bound, computed exactly."""
        lin = self.linear.evaluate(assignment)
        r = self.radicand_value(assignment) if self.radical_coeff else Fraction(0)
        if r < 0:
            raise ValueError("radicand is negative at this point")
        n = math.floor(self.evaluate(assignment)) - 2
        while not self._holds_at(n, lin, r):
            n += 1
        while self._holds_at(n - 1, lin, r):
            n -= 1
        return n

    def to_json(self) -> dict:
        return {
            "target": str(self.target),
            "lin": str(self.linear),
            "coef": format_rational(self.radical_coeff),
            "rad": str(self.radicand),
        }

    def __str__(self) -> str:
        out = f"{self.target} >= {self.linear}"
        if self.radical_coeff:
            c = self.radical_coeff
            sign = "-" if c < 0 else "+"
            c = abs(c)
            mag = "" if c == 1 else f"{format_rational(c)}*"
            out += f" {sign} {mag}sqrt({self.radicand})"
        return out

    def latex(self) -> str:
        out = f"{self.target.latex()} \\geq {self.linear.latex()}"
        if self.radical_coeff:
            c = self.radical_coeff
            sign = "-" if c < 0 else "+"
            c = abs(c)
            root = f"\\sqrt{{{self.radicand.latex()}}}"
            if c.denominator == 1:
                body = root if c == 1 else f"{c.numerator}{root}"
            else:
                body = f"\\frac{{{'' if c.numerator == 1 else c.numerator}{root}}}{{{c.denominator}}}"
            out += f" {sign} {body}"
        return out


def solve_quadratic_bound(c: Constraint, target: HodgeVar) -> BoundExpr:
    """Lower bound on ``target`` from ``c.expr >= 0`` (the larger root).

    The expression must have degree 1 or 2 in ``target`` with a positive
    constant leading coefficient; every other variable is a parameter.
    """
    if c.relation != NONNEG:
        raise QuadraticFormError("only inequalities give lower bounds")
    expr = c.expr
    deg = expr.degree(target)
    if deg not in (1, 2):
        raise QuadraticFormError(f"expression has degree {deg} in {target}, expected 1 or 2")
    lead = expr.coefficient_in(target, deg)
    if not lead.is_constant():
        raise QuadraticFormError(f"leading coefficient {lead} depends on other variables")
    a = lead.constant_term()
    if a <= 0:
        raise QuadraticFormError(f"leading coefficient {format_rational(a)} is not positive")
    if deg == 1:
        rest = expr.coefficient_in(target, 0)
        return BoundExpr.make(target, -rest / a, Fraction(0), MultiPoly())
    b = expr.coefficient_in(target, 1)
    c0 = expr.coefficient_in(target, 0)
    disc = b * b - a * c0 * 4
    if disc.degree() > 1:
        raise QuadraticFormError(f"discriminant {disc} is not affine in the parameters")
    return BoundExpr.make(target, -b / (a * 2), 1 / (a * 2), disc)


# --- minimization --------------------------------------------------------------


class SearchCeilingExceeded(RuntimeError):
    pass


class MinimizerDiscrepancy(RuntimeError):
    """The exhaustive cross-check found a better point than the greedy search."""


class InfeasibleProfile(RuntimeError):
    pass


@dataclass
class MinimizationResult:
    target: HodgeVar
    value: int
    witness: dict
    binding: list
    profile: ManifoldProfile
    weight_cap: int
    catalog_relative: bool = True

    def diamond(self) -> HodgeDiamond:
        return diamond_from_assignment(self.profile.d, self.witness)

    def to_json(self) -> dict:
        return {
            "target": str(self.target),
            "minimum": self.value,
            "catalog_relative": True,
            "weight_cap": self.weight_cap,
            "witness": {str(v): x for v, x in sorted(self.witness.items())},
            "binding": [list(c.provenance) for c in self.binding],
        }


def search_ceiling() -> int:
    raw = os.environ.get(CEILING_ENV)
    if raw is None:
        return DEFAULT_SEARCH_CEILING
    try:
        val = int(raw)
    except ValueError:
        raise ValueError(f"{CEILING_ENV} must be an integer, got {raw!r}") from None
    if val < 1:
        raise ValueError(f"{CEILING_ENV} must be positive")
    return val


def _canonical_target(d: int, target: HodgeVar) -> HodgeVar:
    rep = canonical_var(d, target)
    if not isinstance(rep, HodgeVar):
        raise ValueError(f"{target} is the constant h^{{0,0}} = 1")
    return rep


def _active_constraints(constraints: Iterable[Constraint], pf: ManifoldProfile) -> list:
    return [c for c in constraints if c.applies(pf)]


def _violated(c: Constraint, assignment) -> bool:
    if c.guard is not None and not c.guard.active(assignment):
        return False
    v = c.expr.evaluate(assignment)
    return v < 0 if c.relation == NONNEG else v != 0


def _leading_positive(expr: MultiPoly, v: HodgeVar, assignment) -> bool:
    deg = expr.degree(v)
    if deg <= 0:
        return False
    return expr.coefficient_in(v, deg).evaluate(assignment) > 0


def _gallop(ok, lo: int, ceiling: int, what: str) -> int:
    """Least x > lo with ok(x), assuming ok is eventually true and monotone past lo."""
    step = 1
    hi = lo + step
    while not ok(hi):
        lo = hi
        step *= 2
        hi = lo + step
        if hi > ceiling:
            if ok(ceiling):
                hi = ceiling
                break
            raise SearchCeilingExceeded(f"{what} exceeds the search ceiling {ceiling}")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


class _Minimizer:
    def __init__(self, pf, constraints, tails, target, fixed, ceiling):
        self.pf = pf
        self.cons = constraints
        self.tails = list(tails)
        self.target = target
        self.ceiling = ceiling
        self.fixed = dict(fixed)
        self.fixed[Q] = pf.q
        self.free = [v for v in free_variables(pf.d) if v not in self.fixed]
        self.harm = {v: sum(1 for c in constraints if _harms(c.expr, v)) for v in self.free}

    def order(self, candidates: Sequence[HodgeVar]) -> list:
        return sorted(candidates, key=lambda v: (self.harm[v], v == self.target, v))

    def raise_for(self, c: Constraint, x: dict) -> bool:
        if c.relation == ZERO:
            # a guarded vanishing statement is switched off by raising the rank
            rank = c.guard.rank if c.guard is not None else None
            if rank is None:
                return False
            for v in self.order([v for v in self.free if _leading_positive(rank, v, x)]):
                def ok(val, v=v):
                    return not c.guard.active({**x, v: val})
                x[v] = _gallop(ok, x[v], self.ceiling, f"{v}")
                return True
            return False
        cands = [v for v in self.free if _leading_positive(c.expr, v, x)]
        hit = None
        for v in self.order(cands):
            def ok(val, v=v):
                return c.expr.evaluate({**x, v: val}) >= 0
            try:
                x[v] = _gallop(ok, x[v], self.ceiling, f"{v}")
            except SearchCeilingExceeded as exc:
                hit = exc
                continue
            return True
        if hit is not None:
            raise hit
        return False

    def raise_for_tail(self, t: SeriesTail, fail: tuple, x: dict) -> bool:
        key, _, reason = fail
        if reason == "nonzero above rank":
            rank = t.rank(self.pf)
            cands = [v for v in self.free if _leading_positive(rank, v, x)]
            cands = self.order(cands) + self.order([v for v in self.free if v not in cands])
        else:
            cands = self.order(self.free)
        hit = None
        for v in cands:
            def ok(val, v=v):
                return t.statement_holds(self.pf, {**x, v: val}, key, reason)
            try:
                x[v] = _gallop(ok, x[v], self.ceiling, f"{v}")
            except SearchCeilingExceeded as exc:
                hit = exc
                continue
            return True
        if hit is not None:
            raise hit
        return False

    def fixed_point(self, x: dict) -> dict:
        while True:
            changed = False
            for c in self.cons:
                if _violated(c, x):
                    if not self.raise_for(c, x):
                        raise InfeasibleProfile(f"cannot satisfy {c.describe()} ({', '.join(c.provenance)})")
                    changed = True
            if changed:
                continue
            for t in self.tails:
                fails = t.failures(self.pf, x, first_only=True)
                if fails:
                    if not self.raise_for_tail(t, fails[0], x):
                        raise InfeasibleProfile(f"cannot satisfy {t.label} at {fails[0][0]}")
                    changed = True
                    break
            if not changed:
                return x

    def feasible(self, x: dict) -> bool:
        if any(_violated(c, x) for c in self.cons):
            return False
        return not any(t.failures(self.pf, x) for t in self.tails)


def _harms(expr: MultiPoly, v: HodgeVar) -> bool:
    return any(c < 0 and any(w == v for w, _ in m) for m, c in expr.terms.items())


def minimize_hodge_number(target: HodgeVar, pf: ManifoldProfile,
                          fixed: Optional[Mapping[HodgeVar, int]] = None,
                          constraints: "Catalog | Iterable[Constraint] | None" = None,
                          weight_cap: Optional[int] = None,
                          include_tails: bool = True,
                          sweep_radius: int = 0,
                          ceiling: Optional[int] = None) -> MinimizationResult:
    """Least value of ``target`` over diamonds satisfying the catalog.

    Every unfixed variable starts at 0 and is raised only when some violated
    constraint forces it, preferring variables that appear negatively in the
    fewest constraints. The result is the minimum relative to the catalog.
    ``sweep_radius > 0`` additionally scans a box around the witness for a
    smaller feasible target and raises :class:`MinimizerDiscrepancy` on success.
    """
    if pf.q is None:
        raise ValueError("minimization needs a numeric irregularity")
    d = pf.d
    target = _canonical_target(d, target)
    if target == Q:
        raise ValueError("q is fixed by the profile")
    fx: dict = {}
    for v, val in (fixed or {}).items():
        rep = canonical_var(d, v)
        if isinstance(rep, HodgeVar):
            fx[rep] = int(val)
    if target in fx:
        raise ValueError(f"{target} is fixed")
    if constraints is None:
        constraints = build_catalog(pf, weight_cap, include_tails=include_tails)
    tails: list = []
    cap = weight_cap
    if isinstance(constraints, Catalog):
        cap = constraints.weight_cap
        tails = constraints.tails if include_tails else []
        constraints = constraints.constraints
    active = _active_constraints(constraints, pf)
    ceiling = search_ceiling() if ceiling is None else ceiling
    mz = _Minimizer(pf, active, tails, target, fx, ceiling)
    x = {**mz.fixed, **{v: 0 for v in mz.free}}
    x = mz.fixed_point(x)
    value = x[target]
    binding = []
    if value > 0:
        lower = {**x, target: value - 1}
        binding = [c for c in active if _violated(c, lower)]
    if sweep_radius > 0:
        _sweep(mz, x, target, sweep_radius)
    witness = {v: int(x[v]) for v in free_variables(d)}
    return MinimizationResult(target, int(value), witness, binding, pf, cap if cap is not None else -1)


def _sweep(mz: _Minimizer, x: dict, target: HodgeVar, radius: int) -> None:
    others = [v for v in mz.free if v != target]
    ranges = [range(max(0, x[v] - radius), x[v] + radius + 1) for v in others]
    for t in range(0, x[target]):
        for combo in itertools.product(*ranges):
            y = {**x, **dict(zip(others, combo)), target: t}
            if mz.feasible(y):
                raise MinimizerDiscrepancy(
                    f"greedy search gave {target} = {x[target]} but {target} = {t} is feasible at "
                    + ", ".join(f"{v}={y[v]}" for v in others))


# --- asymptotics ------------------------------------------------------------------

# target >= a*q + b*sqrt(2q) asymptotically, for m = d
ASYMPTOTIC_FORMS = {
    3: {
        HodgeVar(0, 2): (4, 0),
        HodgeVar(0, 3): (4, 0),
        HodgeVar(1, 1): (2, 1),
        HodgeVar(1, 2): (5, 1),
    },
    4: {
        HodgeVar(0, 2): (4, 0),
        HodgeVar(0, 3): (5, 1),
        HodgeVar(0, 4): (4, 0),
        HodgeVar(1, 1): (2, 0),
        HodgeVar(1, 2): (8, 2),
        HodgeVar(1, 3): (12, 3),
        HodgeVar(2, 2): (8, 4),
    },
}


def asymptotic_value(d: int, target: HodgeVar, q: int) -> float:
    target = _canonical_target(d, target)
    try:
        a, b = ASYMPTOTIC_FORMS[d][target]
    except KeyError:
        raise ValueError(f"no asymptotic form for {target} in dimension {d}") from None
    return a * q + b * math.sqrt(2 * q)


def asymptotic_tolerance(d: int, target: HodgeVar) -> int:
    """20 when the form has a square-root term, 3 when it is linear."""
    _, b = ASYMPTOTIC_FORMS[d][_canonical_target(d, target)]
    return 20 if b else 3


@dataclass(frozen=True)
class AsymptoticRow:
    q: int
    minimum: int
    asymptotic: float

    @property
    def difference(self) -> float:
        return self.minimum - self.asymptotic


def asymptotic_check(d: int, m, target: HodgeVar, q_values: Iterable[int],
                     weight_cap: Optional[int] = 2, include_tails: bool = False) -> list:
    """Minimized value next to the asymptotic form, one row per q.

    The default ``weight_cap=2`` keeps the coefficient and Schur statements of
    weight at most two, which is the constraint set the asymptotic forms are
    derived from.
    """
    rows = []
    for q in q_values:
        if q <= d:
            raise ValueError(f"q={q} must exceed d={d}")
        pf = ManifoldProfile(d, q, m)
        res = minimize_hodge_number(target, pf, weight_cap=weight_cap, include_tails=include_tails)
        rows.append(AsymptoticRow(q, res.value, asymptotic_value(d, target, q)))
    return rows


def asymptotic_tsv(d: int, target: HodgeVar, rows: Sequence[AsymptoticRow]) -> str:
    lines = ["d\ttarget\tq\tminimum\tasymptotic\tdifference"]
    for r in rows:
        lines.append(f"{d}\t{target}\t{r.q}\t{r.minimum}\t{r.asymptotic:.6f}\t{r.difference:.6f}")
    return "\n".join(lines) + "\n"


# --- regularity -------------------------------------------------------------------


class RegularityInapplicable(ValueError):
    pass


def regularity_bound(d: int, p: int, k: int, f: int) -> int:
    """d - p + l with l = max(k, f - 1); needs p > l."""
    if d < 1:
        raise ValueError("dimension must be positive")
    if not 0 <= p <= d:
        raise ValueError(f"p={p} outside [0, {d}]")
    if not 0 <= k <= f <= d:
        raise ValueError(f"need 0 <= k <= f <= d, got k={k}, f={f}, d={d}")
    l = max(k, f - 1)
    if p <= l:
        raise RegularityInapplicable(f"inapplicable: p <= l (p={p}, l={l})")
    return d - p + l
