"""Engine derivations set against the fixture forms for m = d, d = 3, 4, 5."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction

from .algebra import HodgeVar, MultiPoly
from .analysis import BoundExpr, QuadraticFormError, solve_quadratic_bound
from .diamond import ManifoldProfile, canonical_var, canonicalize
from .fixtures import FIRST_ORDER, QUADRATIC, RANK, InequalityFixture, QuadraticFixture
from .positivity import NONNEG, build_catalog


class Verdict(enum.Enum):
    MATCH = "MATCH"
    MISMATCH = "MISMATCH"
    UNCHECKABLE = "UNCHECKABLE"


@dataclass(frozen=True)
class ReproRow:
    section: str
    label: str
    d: int
    published: str
    engine: str
    verdict: Verdict
    provenance: tuple = ()
    note: str = ""

    def to_json(self) -> dict:
        return {
            "section": self.section, "label": self.label, "d": self.d,
            "published": self.published, "engine": self.engine,
            "verdict": self.verdict.value, "provenance": list(self.provenance), "note": self.note,
        }


_SERIES_TAGS = ("chern-coefficient", "schur", "rank-vanishing", "epsilon-vanishing")


@lru_cache(maxsize=None)
def _catalog(d: int):
    # second-order statements only need coefficients up to index 2
    return build_catalog(ManifoldProfile(d, None, d), weight_cap=2, include_tails=False)


def _primitive(expr: MultiPoly) -> MultiPoly:
    return expr / expr.content() if not expr.is_zero() else expr


def _coefficient_constraints(d: int, index: int) -> list:
    tags = (f"gamma_{index}(", f"delta_{index}(")
    return [c for c in _catalog(d).constraints
            if c.relation == NONNEG and c.guard is None
            and any(t.startswith("chern-coefficient") and any(s in t for s in tags) for t in c.provenance)]


def _closest(candidates: list, expr: MultiPoly):
    want = expr.variables()
    return min(candidates, key=lambda c: (len(c.expr.variables() ^ want), str(c.expr)), default=None)


def _inequality_row(section: str, fx: InequalityFixture, candidates: list) -> ReproRow:
    d = fx.d
    expr = canonicalize(MultiPoly.parse(fx.lhs) - MultiPoly.parse(fx.rhs), d)
    published = f"{fx.lhs} >= {fx.rhs}"
    target = _primitive(expr)
    for c in candidates:
        if _primitive(c.expr) == target:
            return ReproRow(section, fx.label, d, published, f"{c.expr} >= 0", Verdict.MATCH, c.provenance, fx.note)
    near = _closest(candidates, expr)
    engine = "none" if near is None else f"{near.expr} >= 0"
    prov = () if near is None else near.provenance
    return ReproRow(section, fx.label, d, published, engine, Verdict.MISMATCH, prov, fx.note)


def _fixture_bound(fx: QuadraticFixture) -> BoundExpr:
    d = fx.d
    target = canonical_var(d, HodgeVar(*fx.target))
    return BoundExpr.make(target, canonicalize(MultiPoly.parse(fx.linear), d),
                          Fraction(fx.coef), canonicalize(MultiPoly.parse(fx.radicand), d))


def engine_quadratic_bounds(d: int, target: HodgeVar) -> list:
    """Every bound on ``target`` obtained by solving a second coefficient."""
    out = []
    for c in _coefficient_constraints(d, 2):
        try:
            out.append((solve_quadratic_bound(c, target), c))
        except QuadraticFormError:
            continue
    return out


def _quadratic_row(fx: QuadraticFixture) -> ReproRow:
    d = fx.d
    want = _fixture_bound(fx)
    published = str(want)
    found = engine_quadratic_bounds(d, want.target)
    for b, c in found:
        if b == want:
            return ReproRow("second-order", fx.label, d, published, str(b), Verdict.MATCH, c.provenance, fx.note)
    quad = [(b, c) for b, c in found if b.radical_coeff]
    if quad:
        b, c = min(quad, key=lambda bc: (len(bc[0].radicand.variables() ^ want.radicand.variables()), str(bc[0])))
        engine, prov = str(b), c.provenance
    else:
        engine, prov = "none", ()
    verdict = Verdict.MISMATCH if fx.checkable else Verdict.UNCHECKABLE
    return ReproRow("second-order", fx.label, d, published, engine, verdict, prov, fx.note)


def reproduce_rows() -> list:
    rows = []
    for fx in FIRST_ORDER:
        rows.append(_inequality_row("first-order", fx, _coefficient_constraints(fx.d, 1)))
    for fx in QUADRATIC:
        rows.append(_quadratic_row(fx))
    for fx in RANK:
        cands = [c for c in _catalog(fx.d).constraints if c.relation == NONNEG and c.guard is None
                 and not any(t.startswith(_SERIES_TAGS) for t in c.provenance)]
        rows.append(_inequality_row("rank", fx, cands))
    return rows


def all_match(rows) -> bool:
    return all(r.verdict is Verdict.MATCH for r in rows)
