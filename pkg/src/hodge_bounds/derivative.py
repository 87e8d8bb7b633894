"""The globalized derivative complex of Omega^p on P^{q-1}.

Term i of the complex is O(-d+i) tensored with H^i(X, Omega^p), so its data is
just the twist and the Hodge number h^{p,i}. Everything downstream consumes
exactness windows, Chern generating series and partial Euler characteristics.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Mapping, Optional

from .algebra import (
    HodgeVar, MultiPoly, TruncatedSeries, expand_binomial_power, numeric_binomial_series,
    numeric_series_product, series_product,
)
from .diamond import INFINITY, HodgeDiamond, ManifoldProfile, canonicalize


class HypothesisError(ValueError):
    """Raised when a construction is requested outside the range where it exists."""


class SeriesKind(enum.Enum):
    GAMMA = "gamma"
    DELTA = "delta"
    EPSILON = "epsilon"


class EulerKind(enum.Enum):
    GEQ = "geq"
    LEQ = "leq"


@dataclass(frozen=True)
class ComplexModel:
    p: int
    terms: tuple  # (twist, dimension) pairs

    def __post_init__(self):
        twists = [t for t, _ in self.terms]
        d = len(self.terms) - 1
        if twists != list(range(-d, 1)):
            raise ValueError("twists must run from -d to 0 in steps of 1")


def complex_model(pf: ManifoldProfile, p: int, diamond: Optional[HodgeDiamond] = None) -> ComplexModel:
    _check_p(pf, p)
    d = pf.d
    terms = tuple((-d + i, _entry(pf, p, i, diamond)) for i in range(d + 1))
    return ComplexModel(p, terms)


@dataclass(frozen=True)
class ExactnessWindow:
    left_exact_steps: int
    right_exact_steps: int
    fully_exact: bool


def _check_p(pf: ManifoldProfile, p: int) -> None:
    if not 0 <= p <= pf.d:
        raise HypothesisError(f"form degree p={p} outside [0, {pf.d}]")


def exactness_window(pf: ManifoldProfile, p: int) -> ExactnessWindow:
    """How many steps from each end the complex is known to be exact.

    Combines the zero-locus clauses (via m) with the Albanese clauses (via
    l = max(k, f-1)), taking the larger depth on each side.
    """
    _check_p(pf, p)
    d = pf.d
    if pf.m is INFINITY:
        return ExactnessWindow(d + 1, d + 1, True)
    m = pf.m
    left = [0]
    right = [0]
    if p < m <= d:
        left.append(m - p)
    if d - p < m <= d:
        right.append(m - d + p)
    l = pf.l
    if l is not None:
        if d - p > l:
            left.append(d - p - l)
        if p > l:
            right.append(p - l)
    return ExactnessWindow(max(left), max(right), False)


@dataclass(frozen=True)
class ChernSeries:
    kind: SeriesKind
    p: int
    series: TruncatedSeries
    rank: MultiPoly
    vacuous: bool = False

    def coefficient(self, i: int) -> MultiPoly:
        return self.series[i]


def _entry(pf: ManifoldProfile, p: int, j: int, diamond: Optional[HodgeDiamond]) -> MultiPoly:
    if diamond is not None:
        x = diamond[p, j]
        return MultiPoly.coerce(x)
    return canonicalize(MultiPoly.h(p, j), pf.d)


def _exponents(kind: SeriesKind, pf: ManifoldProfile, p: int) -> list:
    """(j, p, column, sign) for each factor (1 - j t)^{sign * h^{p, column}}."""
    d = pf.d
    if kind is SeriesKind.EPSILON:
        if pf.m is not INFINITY:
            raise HypothesisError("epsilon series needs m = INFINITY")
        return [(j, d - j, (-1) ** j) for j in range(1, d + 1)]
    if pf.m is INFINITY:
        raise HypothesisError(f"{kind.value} series needs finite m")
    m = pf.m
    if kind is SeriesKind.GAMMA:
        if not d - p <= m <= d:
            raise HypothesisError(f"gamma series needs d-p < m <= d (d={d}, p={p}, m={m})")
        return [(j, 2 * d - m - p + j, (-1) ** j) for j in range(1, m - d + p + 1)]
    if not p <= m <= d:
        raise HypothesisError(f"delta series needs p < m <= d (d={d}, p={p}, m={m})")
    return [(j, m - p - j, (-1) ** j) for j in range(1, m - p + 1)]


def _rank(kind: SeriesKind, pf: ManifoldProfile, p: int, diamond) -> MultiPoly:
    d = pf.d
    if kind is SeriesKind.EPSILON:
        return sum((_entry(pf, p, j, diamond) * (-1) ** j for j in range(d + 1)), MultiPoly())
    return partial_euler(pf, p, EulerKind.GEQ if kind is SeriesKind.GAMMA else EulerKind.LEQ, diamond)


def chern_series(kind: SeriesKind, pf: ManifoldProfile, p: int, n: int,
                 diamond: Optional[HodgeDiamond] = None) -> ChernSeries:
    _check_p(pf, p)
    if n < 2:
        raise ValueError("truncation order must be at least 2")
    exps = _exponents(kind, pf, p)
    factors = [expand_binomial_power(j, _entry(pf, p, col, diamond) * sign, n) for j, col, sign in exps]
    series = series_product(factors) if factors else TruncatedSeries.one(n)
    return ChernSeries(kind, p, series, _rank(kind, pf, p, diamond), vacuous=not factors)


def gamma_series(pf: ManifoldProfile, p: int, n: int, diamond=None) -> ChernSeries:
    return chern_series(SeriesKind.GAMMA, pf, p, n, diamond)


def delta_series(pf: ManifoldProfile, p: int, n: int, diamond=None) -> ChernSeries:
    return chern_series(SeriesKind.DELTA, pf, p, n, diamond)


def epsilon_series(pf: ManifoldProfile, p: int, n: int, diamond=None) -> ChernSeries:
    return chern_series(SeriesKind.EPSILON, pf, p, n, diamond)


def series_applies(kind: SeriesKind, pf: ManifoldProfile, p: int) -> bool:
    """True when the series exists and its window is non-degenerate."""
    if kind is SeriesKind.EPSILON:
        return pf.m is INFINITY
    if pf.m is INFINITY:
        return False
    if kind is SeriesKind.GAMMA:
        return pf.d - p < pf.m <= pf.d
    return p < pf.m <= pf.d


def numeric_coefficients(kind: SeriesKind, pf: ManifoldProfile, p: int,
                         assignment: Mapping[HodgeVar, int], n: int) -> list:
    """Integer coefficients of the series at a numeric point, up to t^{n-1}."""
    exps = _exponents(kind, pf, p)
    factors = []
    for j, col, sign in exps:
        e = int(canonicalize(MultiPoly.h(p, col), pf.d).evaluate(assignment))
        factors.append(numeric_binomial_series(j, sign * e, n))
    return numeric_series_product(factors, n)


def partial_euler(pf: ManifoldProfile, p: int, kind: EulerKind,
                  diamond: Optional[HodgeDiamond] = None) -> MultiPoly:
    """chi^{>= 2d-m-p}(Omega^p) (GEQ) or chi^{<= m-p}(Omega^p) (LEQ).

    The degenerate windows m = d - p (GEQ) and m = p (LEQ) are allowed and
    give single-term sums.
    """
    _check_p(pf, p)
    if pf.m is INFINITY:
        raise HypothesisError("partial Euler characteristics need finite m")
    d, m = pf.d, pf.m
    if kind is EulerKind.GEQ:
        if not d - p <= m <= d:
            raise HypothesisError(f"chi^>= needs d-p < m <= d (d={d}, p={p}, m={m})")
        start = 2 * d - m - p
        return sum((_entry(pf, p, j, diamond) * (-1) ** (start + j) for j in range(start, d + 1)), MultiPoly())
    if not p <= m <= d:
        raise HypothesisError(f"chi^<= needs p < m <= d (d={d}, p={p}, m={m})")
    top = m - p
    return sum((_entry(pf, p, j, diamond) * (-1) ** (top + j) for j in range(0, top + 1)), MultiPoly())


def euler_characteristic(d: int, p: int) -> MultiPoly:
    """chi(Omega^p) = sum_j (-1)^j h^{p,j}, canonicalized."""
    return canonicalize(sum((MultiPoly.h(p, j) * (-1) ** j for j in range(d + 1)), MultiPoly()), d)
