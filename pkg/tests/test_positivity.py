import itertools
import json
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from hodge_bounds.algebra import HodgeVar, MultiPoly, Q
from hodge_bounds.derivative import SeriesKind, chern_series, delta_series, epsilon_series, gamma_series
from hodge_bounds.diamond import INFINITY, ManifoldProfile, abelian_diamond
from hodge_bounds.positivity import (
    NONNEG, ZERO, Constraint, Guard, Hypothesis, Partition, build_catalog, complete_from_elementary, dedupe,
    derive_rank_bounds, extract_euler_constraints, extract_md_extras, extract_positivity_constraints,
    extract_rank_constraints, minimal_admissible_rank, partitions_up_to_weight, schur_of_chern,
)

h = MultiPoly.h
q = MultiPoly.var(Q)


def elementary(roots, n):
    c = [1] + [0] * n
    for r in roots:
        for i in range(n, 0, -1):
            c[i] += r * c[i - 1]
    return c


def ssyt_schur(parts, roots):
    """Sum of x^T over semistandard tableaux of shape ``parts``: the defining oracle."""
    n = len(roots)
    cells = [(i, j) for i, row in enumerate(parts) for j in range(row)]
    total = 0
    for fill in itertools.product(range(n), repeat=len(cells)):
        t = dict(zip(cells, fill))
        if all(t[i, j] <= t[i, j + 1] for i, j in cells if (i, j + 1) in t) and \
                all(t[i, j] < t[i + 1, j] for i, j in cells if (i + 1, j) in t):
            prod = 1
            for v in fill:
                prod *= roots[v]
            total += prod
    return total


class TestPartitions:
    def test_enumeration(self):
        assert partitions_up_to_weight(0) == []
        assert partitions_up_to_weight(1) == [Partition((1,))]
        assert [p.parts for p in partitions_up_to_weight(3)] == [(1,), (2,), (1, 1), (3,), (2, 1), (1, 1, 1)]

    def test_counts(self):
        assert len(partitions_up_to_weight(8)) == sum([1, 2, 3, 5, 7, 11, 15, 22])

    def test_invalid(self):
        with pytest.raises(ValueError):
            Partition((1, 2))
        with pytest.raises(ValueError):
            Partition((2, 0))
        with pytest.raises(ValueError):
            partitions_up_to_weight(-1)

    @given(st.integers(1, 9))
    def test_conjugate_involution(self, w):
        for lam in partitions_up_to_weight(w):
            assert lam.conjugate().conjugate() == lam
            assert lam.conjugate().weight == lam.weight


class TestSchur:
    def test_examples(self):
        c = [1, 3, 2]
        assert schur_of_chern(Partition((1,)), c) == 3
        assert schur_of_chern(Partition((2,)), c) == 7
        assert schur_of_chern(Partition((1, 1)), c) == 2

    @given(st.lists(st.integers(0, 4), min_size=1, max_size=6))
    @settings(max_examples=200, deadline=None)
    def test_matches_tableau_oracle(self, roots):
        c = elementary(roots, 5)
        for lam in partitions_up_to_weight(5):
            if len(lam) > len(roots):
                assert schur_of_chern(lam, c) == 0
                continue
            assert schur_of_chern(lam, c) == ssyt_schur(lam.parts, roots)

    @given(st.lists(st.integers(0, 5), min_size=1, max_size=5))
    @settings(deadline=None)
    def test_rows_and_columns(self, roots):
        c = elementary(roots, 6)
        hk = complete_from_elementary(c)
        for i in range(1, 7):
            assert schur_of_chern(Partition((1,) * i), c) == c[i]
            assert schur_of_chern(Partition((i,)), c) == hk[i]
            assert hk[i] == ssyt_schur((i,), roots)

    @given(st.lists(st.integers(-3, 3), min_size=1, max_size=6))
    @settings(deadline=None)
    def test_elementary_and_complete_agree(self, tail):
        c = [1] + tail
        for lam in partitions_up_to_weight(len(tail)):
            assert schur_of_chern(lam, c) == schur_of_chern(lam, c, method="complete")

    def test_symbolic_methods_agree(self):
        c = [delta_series(ManifoldProfile(3, None, 3), 1, 5).coefficient(i) for i in range(5)]
        for lam in partitions_up_to_weight(4):
            assert schur_of_chern(lam, c) == schur_of_chern(lam, c, method="complete")

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            schur_of_chern(Partition((1,)), [1, 1], method="bogus")


class TestExtraction:
    def test_threefold_delta(self):
        pf = ManifoldProfile(3, None, 3)
        cs = extract_positivity_constraints(delta_series(pf, 1, 4), pf, 3)
        assert any(c.relation == NONNEG and c.expr == h(1, 1) - 2 * q for c in cs)

    def test_fivefold_delta(self):
        pf = ManifoldProfile(5, None, 5)
        cs = extract_positivity_constraints(delta_series(pf, 2, 2), pf, 1)
        assert [c.expr for c in cs if c.relation == NONNEG][0] == h(2, 2) - 2 * h(1, 2) + 3 * h(0, 2)

    def test_epsilon_abelian_zero(self):
        pf = ManifoldProfile(3, 3, INFINITY)
        dm = abelian_diamond(3)
        cs = extract_positivity_constraints(epsilon_series(pf, 1, 3), pf)
        assert cs and all(c.relation == ZERO for c in cs)
        assert all(c.satisfied(dm.assignment()) for c in cs)

    def test_kind_mismatch(self):
        pf = ManifoldProfile(3, None, 3)
        with pytest.raises(ValueError):
            extract_positivity_constraints(epsilon_series(ManifoldProfile(3, None, INFINITY), 1, 3), pf)

    def test_vanishing_clause_is_guarded(self):
        pf = ManifoldProfile(3, None, 3)
        cs = extract_positivity_constraints(delta_series(pf, 1, 3), pf, 2)
        zeros = [c for c in cs if c.relation == ZERO]
        assert [c.guard.below for c in zeros] == [1, 2]
        assert all(c.guard.rank == q - h(1, 1) + h(1, 2) for c in zeros)

    @pytest.mark.parametrize("d", [3, 4, 5])
    def test_coefficients_are_column_schur(self, d):
        pf = ManifoldProfile(d, None, d)
        for p in range(d + 1):
            for kind in (SeriesKind.GAMMA, SeriesKind.DELTA):
                try:
                    cs = extract_positivity_constraints(chern_series(kind, pf, p, 4), pf, 3)
                except ValueError:
                    continue
                schur = {c.expr for c in cs if any("[coefficient]" in t for t in c.provenance)}
                coeff = {c.expr for c in cs if any(t.startswith("chern-coefficient") for t in c.provenance)}
                assert coeff == schur

    def test_rank_constraints(self):
        cs = extract_rank_constraints(ManifoldProfile(3, None, 3), 0)
        assert any(c.expr == (-1 + q - h(0, 2) + h(0, 3)) - (q - 3) for c in cs)
        cs = extract_rank_constraints(ManifoldProfile(3, None, 3), 1)
        assert any(c.expr == h(1, 1) - 2 * q + 1 for c in cs)
        cs = extract_rank_constraints(ManifoldProfile(4, None, 4), 1)
        assert any(c.expr == h(1, 3) - h(0, 3) - q + 1 for c in cs)
        assert extract_rank_constraints(ManifoldProfile(3, None, INFINITY), 1) == []

    def test_euler_constraints(self):
        (c,) = extract_euler_constraints(ManifoldProfile(3, None, 3))
        assert c.expr == q - h(1, 1) + h(1, 2) - h(0, 2) - 2
        cs = {c.p: c.expr for c in extract_euler_constraints(ManifoldProfile(4, None, 4))}
        chi1 = q - h(1, 1) + h(1, 2) - h(1, 3) + h(0, 3)
        chi2 = h(0, 2) - h(1, 2) + h(2, 2) - h(1, 2) + h(0, 2)
        assert cs[1] == -chi1 - 2
        assert cs[2] == chi2 - 1
        assert all(str(x) in ("m = 4", "q > 4", "d >= 2")
                   for c in extract_euler_constraints(ManifoldProfile(4, None, 4)) for x in c.hypotheses)

    def test_md_extras(self):
        exprs = [c.expr for c in extract_md_extras(ManifoldProfile(3, None, 3))]
        assert h(0, 2) - 2 * q + 3 in exprs
        assert h(0, 3) - h(0, 2) + q - 1 - (q - 3) in exprs
        assert h(0, 2) - 4 * q + 10 in [c.expr for c in extract_md_extras(ManifoldProfile(4, None, 4))]
        assert h(0, 2) - 4 * q + 10 not in [c.expr for c in extract_md_extras(ManifoldProfile(2, None, 2))]


class TestRankDerivation:
    def test_surface_classics(self):
        pf = ManifoldProfile(2, None, 2)
        exprs = {c.expr for p in range(3) for c in derive_rank_bounds(pf, p)}
        assert exprs == {h(0, 2) - 2 * q + 3, h(1, 1) - 2 * q + 1}

    @pytest.mark.parametrize("qv", range(3, 15))
    def test_numeric_matches_sympy(self, qv):
        t = sympy.Symbol("t")
        poly = sympy.series((1 - t) ** (-qv) * (1 - 2 * t), t, 0, qv).removeO()
        want = max(i for i in range(1, qv) if poly.coeff(t, i) != 0)
        assert minimal_admissible_rank(SeriesKind.DELTA, ManifoldProfile(2, qv, 2), 0, qv) == want == qv - 2

    def test_requires_q_only(self):
        with pytest.raises(ValueError):
            minimal_admissible_rank(SeriesKind.DELTA, ManifoldProfile(3, 5, 3), 1, 5)


class TestConstraintObjects:
    def test_dedupe_merges_provenance(self):
        a = Constraint(h(1, 1) - 2 * q, NONNEG, (), ("a",), 1)
        b = Constraint(2 * h(1, 1) - 4 * q, NONNEG, (), ("b",), 1)
        (m,) = dedupe([a, b])
        assert m.provenance == ("a", "b")

    def test_guard(self):
        c = Constraint(h(1, 1) - 3, ZERO, (), (), 1, Guard(q, 2))
        assert c.satisfied({Q: 5, HodgeVar(1, 1): 0})
        assert not c.satisfied({Q: 1, HodgeVar(1, 1): 0})

    def test_hypothesis_parse(self):
        hy = Hypothesis.parse("q > 3")
        assert hy.holds(ManifoldProfile(3, 4, 3)) is True
        assert hy.holds(ManifoldProfile(3, 3, 3)) is False
        assert hy.holds(ManifoldProfile(3, None, 3)) is None
        assert Hypothesis.parse("m = inf").holds(ManifoldProfile(3, 2, INFINITY))
        with pytest.raises(ValueError):
            Hypothesis.parse("x > 1")

    def test_latex(self):
        c = Constraint(h(1, 1) - 2 * q, NONNEG)
        assert c.latex() == r"h^{1,1} \geq 2q"

    def test_catalog_json_round_trip(self):
        cat = build_catalog(ManifoldProfile(3, None, 3), weight_cap=3)
        blob = json.loads(json.dumps(cat.to_json()))
        back = [Constraint.from_json(c) for c in blob["constraints"]]
        assert back == cat.constraints
        assert blob["weight_cap"] == 3


@pytest.mark.parametrize("d", range(1, 6))
def test_abelian_satisfies_its_catalog(d):
    pf = ManifoldProfile(d, d, INFINITY)
    dm = abelian_diamond(d)
    cat = build_catalog(pf)
    values = dm.assignment()
    assert all(c.satisfied(values) for c in cat.active())
    assert all(not t.failures(pf, values) for t in cat.tails)


def test_catalog_is_deterministic():
    a = build_catalog(ManifoldProfile(4, 6, 4))
    b = build_catalog(ManifoldProfile(4, 6, 4))
    assert a.to_json() == b.to_json()
    assert a.schur_cap == 5 and a.weight_cap == 5
