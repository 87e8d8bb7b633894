import pytest
import sympy
from hypothesis import given, settings, strategies as st

from hodge_bounds.algebra import HodgeVar, MultiPoly, Q, TruncatedSeries
from hodge_bounds.derivative import (
    EulerKind, HypothesisError, SeriesKind, chern_series, complex_model, delta_series, epsilon_series,
    euler_characteristic, exactness_window, gamma_series, numeric_coefficients, partial_euler, series_applies,
)
from hodge_bounds.diamond import INFINITY, ManifoldProfile, abelian_diamond, free_variables, partial_diamond

h = MultiPoly.h
q = MultiPoly.var(Q)


def sympy_series(kind, d, m, p, values, n):
    """Independent expansion of the closed product formula at a numeric point."""
    t = sympy.Symbol("t")
    dm = partial_diamond(d, {(v.p, v.j): x for v, x in values.items()})
    if kind is SeriesKind.GAMMA:
        cols = [(j, 2 * d - m - p + j) for j in range(1, m - d + p + 1)]
    elif kind is SeriesKind.DELTA:
        cols = [(j, m - p - j) for j in range(1, m - p + 1)]
    else:
        cols = [(j, d - j) for j in range(1, d + 1)]
    expr = sympy.Integer(1)
    for j, col in cols:
        expr *= (1 - j * t) ** ((-1) ** j * dm[p, col])
    poly = sympy.series(expr, t, 0, n).removeO()
    return [int(poly.coeff(t, i)) for i in range(n)]


class TestWindows:
    def test_examples(self):
        w = exactness_window(ManifoldProfile(3, 2, 3), 1)
        assert (w.left_exact_steps, w.right_exact_steps, w.fully_exact) == (2, 1, False)
        assert exactness_window(ManifoldProfile(2, 2, INFINITY), 0).fully_exact
        w = exactness_window(ManifoldProfile(4, 2, 2), 3)
        assert (w.left_exact_steps, w.right_exact_steps) == (0, 1)

    def test_albanese_clause_takes_max(self):
        w = exactness_window(ManifoldProfile(4, 3, 1, (0, 1)), 1)
        assert (w.left_exact_steps, w.right_exact_steps) == (3, 1)

    def test_bad_p(self):
        with pytest.raises(HypothesisError):
            exactness_window(ManifoldProfile(3, 2, 3), 4)

    @given(st.integers(1, 7), st.data())
    def test_monotone_in_m_and_bounded(self, d, data):
        p = data.draw(st.integers(0, d))
        m = data.draw(st.integers(1, d))
        alb = data.draw(st.one_of(st.none(), st.tuples(st.integers(0, d), st.integers(0, d)).map(sorted).map(tuple)))
        lo = exactness_window(ManifoldProfile(d, 2, m, alb), p)
        assert lo.left_exact_steps + lo.right_exact_steps <= d + 1
        if m < d:
            hi = exactness_window(ManifoldProfile(d, 2, m + 1, alb), p)
            assert hi.left_exact_steps >= lo.left_exact_steps
            assert hi.right_exact_steps >= lo.right_exact_steps


class TestComplexModel:
    def test_terms(self):
        cm = complex_model(ManifoldProfile(3, None, 3), 1)
        assert [t for t, _ in cm.terms] == [-3, -2, -1, 0]
        assert cm.terms[0][1] == q and cm.terms[3][1] == h(0, 2)

    def test_numeric(self):
        cm = complex_model(ManifoldProfile(2, 2, INFINITY), 1, abelian_diamond(2))
        assert [x for _, x in cm.terms] == [MultiPoly.const(2), MultiPoly.const(4), MultiPoly.const(2)]


class TestSeries:
    def test_delta_threefold(self):
        s = delta_series(ManifoldProfile(3, None, 3), 1, 3)
        assert s.coefficient(0) == MultiPoly.const(1)
        assert s.coefficient(1) == h(1, 1) - 2 * q
        assert s.rank == q - h(1, 1) + h(1, 2)

    def test_delta_fourfold(self):
        s = delta_series(ManifoldProfile(4, None, 4), 1, 2)
        assert s.coefficient(1) == h(1, 2) - 2 * h(1, 1) + 3 * q

    def test_epsilon_abelian_surface(self):
        s = epsilon_series(ManifoldProfile(2, 2, INFINITY), 0, 3, abelian_diamond(2))
        assert s.coefficient(1) == MultiPoly()
        assert s.coefficient(2) == MultiPoly.const(-1)
        assert s.rank == MultiPoly.const(0)

    @pytest.mark.parametrize("d", range(1, 6))
    def test_epsilon_vanishes_on_abelian(self, d):
        pf = ManifoldProfile(d, d, INFINITY)
        dm = abelian_diamond(d)
        for p in range(d + 1):
            # vanishing is only claimed below t^q, with q = d here
            coeffs = numeric_coefficients(SeriesKind.EPSILON, pf, p, dm.assignment(), max(d, 2))
            assert coeffs[:d] == [1] + [0] * (d - 1)

    def test_hypotheses(self):
        with pytest.raises(HypothesisError):
            gamma_series(ManifoldProfile(3, None, 1), 1, 3)
        with pytest.raises(HypothesisError):
            epsilon_series(ManifoldProfile(3, None, 3), 1, 3)
        with pytest.raises(HypothesisError):
            delta_series(ManifoldProfile(3, None, INFINITY), 1, 3)
        with pytest.raises(ValueError):
            delta_series(ManifoldProfile(3, None, 3), 1, 1)

    def test_vacuous(self):
        s = delta_series(ManifoldProfile(3, None, 2), 2, 4)
        assert s.vacuous and s.series == TruncatedSeries.one(4)
        assert not series_applies(SeriesKind.DELTA, ManifoldProfile(3, None, 2), 2)
        assert s.rank == h(0, 2)

    @given(st.integers(2, 4), st.data())
    @settings(max_examples=40, deadline=None)
    def test_symbolic_matches_sympy_expansion(self, d, data):
        m = data.draw(st.integers(1, d))
        kind = data.draw(st.sampled_from([SeriesKind.GAMMA, SeriesKind.DELTA]))
        p = data.draw(st.integers(0, d))
        pf = ManifoldProfile(d, None, m)
        if not series_applies(kind, pf, p):
            return
        values = {v: data.draw(st.integers(0, 9)) for v in free_variables(d)}
        values[Q] = max(values[Q], 1)
        n = 4
        symbolic = chern_series(kind, pf, p, n).series.evaluate(values)
        assert symbolic == sympy_series(kind, d, m, p, values, n)
        assert numeric_coefficients(kind, pf, p, values, n) == symbolic

    @pytest.mark.parametrize("d", range(1, 6))
    def test_gamma_delta_duality(self, d):
        for m in range(1, d + 1):
            pf = ManifoldProfile(d, None, m)
            for p in range(d + 1):
                if d - p < m:
                    g = gamma_series(pf, p, 4)
                    dl = delta_series(pf, d - p, 4)
                    assert g.series == dl.series
                    assert g.rank == dl.rank

    @pytest.mark.parametrize("d", range(2, 5))
    def test_rank_matches_window_sum(self, d):
        values = {v: 3 * v.p + 5 * v.j + 1 for v in free_variables(d)}
        dm = partial_diamond(d, {(v.p, v.j): x for v, x in values.items()})
        for m in range(1, d + 1):
            pf = ManifoldProfile(d, values[Q], m)
            for p in range(d + 1):
                if d - p <= m:
                    s = 2 * d - m - p
                    want = sum((-1) ** (j - s) * dm[p, j] for j in range(s, d + 1))
                    assert partial_euler(pf, p, EulerKind.GEQ, dm) == want
                    if d - p < m:
                        assert gamma_series(pf, p, 2).rank.evaluate(values) == want
                if p <= m:
                    want = sum((-1) ** (m - p - j) * dm[p, j] for j in range(0, m - p + 1))
                    assert partial_euler(pf, p, EulerKind.LEQ, dm) == want
                    if p < m:
                        assert delta_series(pf, p, 2).rank.evaluate(values) == want


class TestPartialEuler:
    def test_surface_numeric(self):
        dm = partial_diamond(2, {(0, 1): 3, (0, 2): 3, (1, 1): 8})
        assert partial_euler(ManifoldProfile(2, 3, 2), 0, EulerKind.LEQ, dm) == MultiPoly.const(1)

    def test_threefold_symbolic(self):
        got = partial_euler(ManifoldProfile(3, None, 3), 0, EulerKind.LEQ)
        assert got == -1 + q - h(0, 2) + h(0, 3)

    def test_top_degree_geq_window(self):
        # the window starts at 2d - m - p = 0, so every column contributes
        got = partial_euler(ManifoldProfile(3, None, 3), 3, EulerKind.GEQ)
        assert got == h(0, 3) - h(0, 2) + q - 1

    def test_single_term_window(self):
        assert partial_euler(ManifoldProfile(3, None, 2), 1, EulerKind.GEQ) == h(0, 2)

    def test_hypothesis(self):
        with pytest.raises(HypothesisError):
            partial_euler(ManifoldProfile(3, None, 1), 0, EulerKind.GEQ)
        with pytest.raises(HypothesisError):
            partial_euler(ManifoldProfile(3, None, INFINITY), 0, EulerKind.LEQ)


def test_euler_characteristic():
    assert euler_characteristic(3, 1) == q - h(1, 1) + h(1, 2) - h(0, 2)
    assert euler_characteristic(2, 0) == 1 - q + h(0, 2)
