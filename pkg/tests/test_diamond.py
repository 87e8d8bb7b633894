import json
from math import comb

import pytest
from hypothesis import given, strategies as st

from hodge_bounds.algebra import HodgeVar, MultiPoly, Q
from hodge_bounds.diamond import (
    INFINITY, DiamondError, HodgeDiamond, ManifoldProfile, ProfileError, abelian_diamond, all_orbits,
    canonical_var, canonicalize, diamond_from_assignment, free_variables, orbit, parse_m, partial_diamond,
    validate_diamond,
)


class TestProfile:
    @pytest.mark.parametrize("args", [(0, 1, 1), (3, 0, 3), (3, 2, 4), (3, 2, 0), (3, 2, 3, (2, 1))])
    def test_rejects(self, args):
        with pytest.raises(ProfileError):
            ManifoldProfile(*args)

    def test_albanese_l(self):
        assert ManifoldProfile(4, 3, 2, (1, 3)).l == 2
        assert ManifoldProfile(4, 3, 2, (2, 2)).l == 2
        assert ManifoldProfile(4, 3, 2).l is None

    def test_parse_m(self):
        assert parse_m("inf") is INFINITY
        assert parse_m("3") == 3


class TestSymmetry:
    def test_orbit(self):
        assert orbit(3, 0, 1) == {(0, 1), (1, 0), (3, 2), (2, 3)}
        assert orbit(2, 1, 1) == {(1, 1)}

    @pytest.mark.parametrize("d", range(1, 7))
    def test_orbits_partition_the_table(self, d):
        orbs = all_orbits(d)
        cells = [c for o in orbs for c in o]
        assert len(cells) == (d + 1) ** 2 == len(set(cells))

    def test_free_variables(self):
        assert free_variables(3) == [Q, HodgeVar(0, 2), HodgeVar(0, 3), HodgeVar(1, 1), HodgeVar(1, 2)]
        assert str(free_variables(3)[0]) == "q"

    def test_canonicalize(self):
        p = MultiPoly.h(2, 3) + MultiPoly.h(3, 3) - MultiPoly.h(2, 1)
        assert canonicalize(p, 3) == MultiPoly.var(Q) + 1 - MultiPoly.h(1, 2)
        assert canonical_var(3, HodgeVar(3, 3)) == 1
        with pytest.raises(DiamondError):
            canonical_var(3, HodgeVar(4, 0))


class TestDiamond:
    def test_partial_fills_orbit(self):
        dm = partial_diamond(3, {(0, 1): 4})
        assert dm[1, 0] == dm[3, 2] == dm[2, 3] == 4
        assert dm[0, 0] == dm[3, 3] == 1
        assert dm[1, 1] == MultiPoly.h(1, 1)
        assert (1, 1) in dm.free()

    def test_partial_conflict(self):
        with pytest.raises(DiamondError, match="share an orbit"):
            partial_diamond(2, {(0, 2): 5, (2, 0): 6})

    def test_partial_bad_index(self):
        with pytest.raises(DiamondError):
            partial_diamond(2, {(3, 0): 1})

    @pytest.mark.parametrize("d", range(1, 6))
    def test_abelian_valid(self, d):
        dm = abelian_diamond(d)
        assert validate_diamond(dm, ManifoldProfile(d, d, INFINITY)).valid
        assert dm[1, 1] == d * d and dm.q == d

    def test_validation_reports(self):
        h = [[1, 2, 1], [3, 4, 2], [1, 2, 1]]
        rep = validate_diamond(HodgeDiamond(2, h), ManifoldProfile(2, 2, 2))
        assert not rep.valid
        assert any("Hodge symmetry" in v for v in rep.violations)
        h = [[1, 2, 1], [2, -4, 2], [1, 2, 1]]
        rep = validate_diamond(HodgeDiamond(2, h), ManifoldProfile(2, 3, 2))
        assert any("negative" in v for v in rep.violations)
        assert any("irregularity" in v for v in rep.violations)

    def test_serre_violation(self):
        h = [[1, 2, 3], [2, 4, 2], [3, 2, 2]]
        rep = validate_diamond(HodgeDiamond(2, h), ManifoldProfile(2, 2, 2))
        assert any("Serre" in v for v in rep.violations)

    def test_dimension_mismatch(self):
        with pytest.raises(DiamondError):
            validate_diamond(abelian_diamond(2), ManifoldProfile(3, 2, 3))
        with pytest.raises(DiamondError):
            HodgeDiamond(2, [[1, 2], [2, 1]])

    @given(st.integers(1, 5), st.data())
    def test_closure_is_valid_and_round_trips(self, d, data):
        vals = {v: data.draw(st.integers(0, 50)) for v in free_variables(d)}
        q = vals[Q] = max(vals[Q], 1)
        dm = diamond_from_assignment(d, vals)
        assert validate_diamond(dm, ManifoldProfile(d, q, d)).valid
        assert dm.assignment() == vals
        assert HodgeDiamond.loads(dm.dumps()) == dm

    @pytest.mark.parametrize("text", ['[1]', '{"d": 2}', '{"d": 1, "h": [[1, true], [1, 1]]}', 'nope',
                                      '{"d": "2", "h": []}'])
    def test_json_rejects(self, text):
        with pytest.raises(DiamondError):
            HodgeDiamond.loads(text)

    def test_json_shape(self):
        assert json.loads(abelian_diamond(1).dumps()) == {"d": 1, "h": [[1, 1], [1, 1]]}
        with pytest.raises(DiamondError):
            partial_diamond(2, {}).to_json()


def test_abelian_entries_are_binomial_products():
    dm = abelian_diamond(4)
    assert all(dm[p, j] == comb(4, p) * comb(4, j) for p in range(5) for j in range(5))
