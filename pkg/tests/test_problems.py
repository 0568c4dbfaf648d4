"""Degrees, enumeration and bounds of Fano problems."""

import pytest

from fano.problems import (
    TABLE1_TYPES,
    TABLE2_TYPES,
    FanoType,
    bezout_bound,
    degree_lower_bound,
    delta,
    enumerate_fano_problems,
    fano_degree,
    fano_degree_by_expansion,
    is_enriched,
    q_poly,
    vandermonde,
)

LINES_ON_CUBIC = FanoType(1, 3, (3,))
TWO_QUADRICS = FanoType(1, 4, (2, 2))


class TestBasics:
    def test_delta_zero_for_fano_problems(self):
        assert delta(LINES_ON_CUBIC) == 0
        assert delta(TWO_QUADRICS) == 0
        assert delta(FanoType(1, 4, (3,))) == 2  # cubic threefold: a surface of lines

    def test_type_normalizes_degree_order(self):
        assert FanoType(1, 6, (3, 2, 2)) == FanoType(1, 6, (2, 2, 3))

    def test_type_validation(self):
        with pytest.raises(ValueError):
            FanoType(0, 3, (3,))
        with pytest.raises(ValueError):
            FanoType(1, 3, (1,))
        with pytest.raises(ValueError):
            FanoType(2, 4, (2,))  # 2r > n - s

    def test_q_poly_and_vandermonde_shapes(self):
        from fano.exact import GaussianRational

        q = q_poly(1, 2)
        # compositions of 2 into 2 parts: (2,0),(1,1),(0,2) -> cubic in 2 vars
        assert q.degree() == 3
        # q(1,1) = 2 * 2 * 2
        assert q.evaluate([GaussianRational(1), GaussianRational(1)]) == 8
        v = vandermonde(2)
        assert v.degree() == 3
        # v(2,1,0) = (2-1)(2-0)(1-0)
        pts = [GaussianRational(2), GaussianRational(1), GaussianRational(0)]
        assert v.evaluate(pts) == 2

    def test_vandermonde_antisymmetry(self):
        from fano.exact import GaussianRational

        v = vandermonde(2)
        a, b, c = GaussianRational(5), GaussianRational(2), GaussianRational(-1)
        assert v.evaluate([a, b, c]) == -v.evaluate([b, a, c])

    def test_degree_rejects_nonzero_delta(self):
        with pytest.raises(ValueError):
            fano_degree(FanoType(1, 4, (3,)))


class TestDegrees:
    def test_table1_degrees(self):
        got = [fano_degree(t) for t in TABLE1_TYPES]
        assert got == [16, 27, 64, 256, 512, 720, 1024, 1024]

    def test_table2_degrees(self):
        got = [fano_degree(t) for t in TABLE2_TYPES]
        assert got == [
            512,
            720,
            1024,
            1053,
            1280,
            20480,
            27648,
            32768,
            37584,
            47104,
            51759,
            64512,
        ]

    def test_lines_on_quintic_threefold(self):
        # the classical count, outside both tables
        assert fano_degree(FanoType(1, 4, (5,))) == 2875

    def test_expansion_cross_check(self):
        # independent route: pruned direct expansion of Q * V
        for t in [
            LINES_ON_CUBIC,
            TWO_QUADRICS,
            FanoType(2, 6, (2, 2)),
            FanoType(1, 5, (3, 3)),
            FanoType(1, 6, (2, 2, 3)),
        ]:
            assert fano_degree_by_expansion(t) == fano_degree(t)

    def test_family_law(self):
        # deg(r, 2r+2, (2,2)) = 4^(r+1)
        for r in range(1, 6):
            assert fano_degree(FanoType(r, 2 * r + 2, (2, 2))) == 4 ** (r + 1)

    def test_modular_path_agrees_with_exact(self):
        # force the CRT path on a case small enough for the exact path
        from fano.problems import _degree_by_crt, _degree_exact_small

        for t in [TWO_QUADRICS, FanoType(1, 6, (2, 2, 3))]:
            assert _degree_by_crt(t) == _degree_exact_small(t)


class TestBounds:
    def test_bezout_bound_dominates(self):
        for t in TABLE1_TYPES:
            assert fano_degree(t) <= bezout_bound(t)

    def test_lower_bounds_ordering(self):
        # crude <= refined <= degree on both tables
        for t in TABLE1_TYPES + TABLE2_TYPES:
            refined, crude = degree_lower_bound(t)
            assert crude <= refined <= fano_degree(t)


class TestEnumeration:
    def test_cap_100(self):
        probs = enumerate_fano_problems(100)
        got = {(p.fano_type.r, p.fano_type.n, p.fano_type.degrees): p.degree for p in probs}
        assert got == {
            (1, 4, (2, 2)): 16,
            (1, 3, (3,)): 27,
            (2, 6, (2, 2)): 64,
        }

    def test_cap_1100_includes_two_quadric_cubic_mix(self):
        # all nine problems under 1100, including the Table-2 entries 1053
        # (two cubics in P^5) and the enriched family through r = 4
        probs = enumerate_fano_problems(1100)
        degs = sorted(p.degree for p in probs)
        assert degs == [16, 27, 64, 256, 512, 720, 1024, 1024, 1053]

    def test_sorted_by_degree(self):
        probs = enumerate_fano_problems(1100)
        assert [p.degree for p in probs] == sorted(p.degree for p in probs)

    def test_enumeration_degrees_are_exact(self):
        for p in enumerate_fano_problems(300):
            assert fano_degree(p.fano_type) == p.degree


class TestEnriched:
    def test_enriched_classification(self):
        assert is_enriched(LINES_ON_CUBIC)
        assert is_enriched(TWO_QUADRICS)
        assert is_enriched(FanoType(3, 8, (2, 2)))
        assert not is_enriched(FanoType(1, 7, (2, 2, 2, 2)))
        assert not is_enriched(FanoType(1, 5, (3, 3)))

    def test_enriched_requires_fano_problem(self):
        with pytest.raises(ValueError):
            is_enriched(FanoType(1, 4, (3,)))
