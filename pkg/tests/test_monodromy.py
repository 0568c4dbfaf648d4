"""Monodromy permutations, group order bookkeeping, incidence relations."""

import numpy as np
import pytest

from fano.floatsys import compile_system
from fano.forge import random_form_system
from fano.monodromy import (
    Permutation,
    group_order,
    incidence_matrix,
    is_incidence_automorphism,
    loop_permutation,
    sample_galois_group,
)
from fano.problems import FanoType
from fano.systems import build_square_system
from fano.track import solve_with_retries

TWO_QUADRICS = FanoType(1, 4, (2, 2))


class TestPermutation:
    def test_validation(self):
        with pytest.raises(ValueError):
            Permutation((0, 0, 1))

    def test_compose(self):
        a = Permutation((1, 2, 0))
        b = Permutation((0, 2, 1))
        assert a.compose(b).images == (1, 0, 2)

    def test_parity(self):
        assert Permutation((1, 0, 2)).is_odd()
        assert not Permutation((1, 2, 0)).is_odd()
        assert not Permutation((0, 1, 2)).is_odd()
        assert Permutation((0, 1, 2)).is_identity()


class TestGroupOrder:
    def test_symmetric_group_from_cycle_and_transposition(self):
        n = 5
        cyc = Permutation(tuple((i + 1) % n for i in range(n)))
        swap = Permutation((1, 0, 2, 3, 4))
        est = group_order([cyc, swap])
        assert est.order == 120
        assert est.transitive
        assert est.contains_odd

    def test_trivial_group(self):
        est = group_order([], fiber_size=7)
        assert est.order == 1 and not est.transitive

    def test_alternating_group_has_no_odd(self):
        a = Permutation((1, 2, 0, 3))
        b = Permutation((0, 2, 3, 1))
        est = group_order([a, b])
        assert est.order == 12
        assert not est.contains_odd


class TestIncidence:
    def test_incident_and_disjoint_lines(self):
        t = FanoType(1, 3, (3,))
        # chart coordinates (a, b, c, d): lines span{(a,b,1,0), (c,d,0,1)};
        # two lines meet iff the 4x4 stacked matrix is singular
        meet_a = np.array([0, 0, 0, 0], dtype=complex)
        meet_b = np.array([1, 0, 0, 0], dtype=complex)  # meets meet_a
        skew = np.array([1, 2, 3, 4], dtype=complex)
        inc = incidence_matrix(t, [meet_a, meet_b, skew])
        assert inc[0, 1] and inc[1, 0]
        assert not inc[0, 2]
        assert not inc[1, 2]
        assert not inc[0, 0]

    def test_automorphism_check(self):
        inc = np.array(
            [[False, True, False], [True, False, False], [False, False, False]]
        )
        assert is_incidence_automorphism(Permutation((1, 0, 2)), inc)
        assert not is_incidence_automorphism(Permutation((0, 2, 1)), inc)


class TestLoopPermutation:
    def test_loop_is_valid_permutation_and_deterministic(self):
        t = TWO_QUADRICS
        S = compile_system(build_square_system(random_form_system(t, 0)))
        _, pts = solve_with_retries(S, 16, seed=0)
        assert len(pts) == 16
        p1 = loop_permutation(t, S, pts, None, seed=1)
        p2 = loop_permutation(t, S, pts, None, seed=1)
        assert p1 is not None
        assert p1.images == p2.images
        assert sorted(p1.images) == list(range(16))


class TestSampleGaloisGroup:
    def test_degree_gate(self):
        with pytest.raises(ValueError):
            sample_galois_group(FanoType(1, 5, (2, 2, 2)), 1, seed=0)

    def test_small_sample_bounds_the_group_from_below(self):
        # a handful of loops on the 16-line problem: the sampled order must
        # divide into W(D5) = 1920 reflections' worth of structure -- i.e.
        # never exceed |W(D5)| = 1920, and the permutations must preserve
        # the incidence relation (checked inside when enabled)
        est = sample_galois_group(
            TWO_QUADRICS, 6, seed=0, stop_order=1920, check_incidences=True
        )
        assert est.fiber_size == 16
        assert 1 <= est.order <= 1920
        assert 1920 % est.order == 0
