"""Hodge-number inequalities for irregular compact Kähler manifolds.

The catalog of constraints comes from positivity of Chern classes of the
kernel and cokernel sheaves of the derivative complex on P^{q-1}, plus the
rank, Euler-characteristic and m = d bounds. On top of it sit a diamond
checker, a closed-form solver for degree-two constraints and an integer
minimizer.
"""

from .algebra import HodgeVar, MultiPoly, Q, TruncatedSeries, expand_binomial_power
from .analysis import (
    BoundExpr, FeasibilityReport, MinimizationResult, RegularityInapplicable, Status,
    asymptotic_check, check_diamond, minimize_hodge_number, regularity_bound, solve_quadratic_bound,
)
from .derivative import (
    EulerKind, SeriesKind, chern_series, delta_series, epsilon_series, exactness_window, gamma_series,
    partial_euler,
)
from .diamond import INFINITY, HodgeDiamond, ManifoldProfile, abelian_diamond, partial_diamond, validate_diamond
from .positivity import Catalog, Constraint, Partition, build_catalog, partitions_up_to_weight, schur_of_chern

__all__ = [
    "HodgeVar", "MultiPoly", "Q", "TruncatedSeries", "expand_binomial_power",
    "BoundExpr", "FeasibilityReport", "MinimizationResult", "RegularityInapplicable", "Status",
    "asymptotic_check", "check_diamond", "minimize_hodge_number", "regularity_bound", "solve_quadratic_bound",
    "EulerKind", "SeriesKind", "chern_series", "delta_series", "epsilon_series", "exactness_window",
    "gamma_series", "partial_euler",
    "INFINITY", "HodgeDiamond", "ManifoldProfile", "abelian_diamond", "partial_diamond", "validate_diamond",
    "Catalog", "Constraint", "Partition", "build_catalog", "partitions_up_to_weight", "schur_of_chern",
]
