"""Exact double-zero verification and Krawczyk/Rump interval certification."""

from fractions import Fraction

import numpy as np
import pytest

from fano.certify import (
    CountMismatch,
    DoubleZeroCertificate,
    OverlapDetected,
    Rejection,
    certify_fiber,
    is_simple_double_zero,
    krawczyk,
    rump_certify,
)
from fano.exact import SparsePoly
from fano.floatsys import compile_system
from fano.intervals import ComplexBox
from fano.systems import ChartPoint, SquareSystem


def sq(nvars, *term_dicts):
    return SquareSystem(nvars, tuple(SparsePoly(nvars, d) for d in term_dicts))


# G = (x^2 - y, y): the origin is a simple double zero with kernel e_0
PARABOLA = sq(2, {(2, 0): 1, (0, 1): -1}, {(0, 1): 1})
# G = (x^2 - y, y^2 - y): double zero at the origin, smooth zeros (1, 1)
# and (-1, 1) -- a miniature forged fiber
MIXED = sq(2, {(2, 0): 1, (0, 1): -1}, {(0, 2): 1, (0, 1): -1})
ORIGIN = ChartPoint((0, 0))


class TestIsSimpleDoubleZero:
    def test_parabola_origin_is_valid(self):
        cert = is_simple_double_zero(PARABOLA, ORIGIN)
        assert isinstance(cert, DoubleZeroCertificate)
        assert cert.valid
        # kernel line is the x-axis
        assert cert.kernel_vector.coords[1] == 0
        assert cert.kernel_vector.coords[0] != 0

    def test_not_a_zero(self):
        rej = is_simple_double_zero(PARABOLA, ChartPoint((0, 1)))
        assert isinstance(rej, Rejection)
        assert rej.reason == "NotAZero"
        assert not rej.valid

    def test_smooth_point_rejected(self):
        rej = is_simple_double_zero(sq(2, {(1, 0): 1}, {(0, 1): 1}), ORIGIN)
        assert rej.reason == "KernelDimZero"

    def test_kernel_too_large_rejected(self):
        rej = is_simple_double_zero(sq(2, {(2, 0): 1}, {(0, 2): 1}), ORIGIN)
        assert rej.reason == "KernelDimHigh"

    def test_hessian_in_image_rejected(self):
        # G = (x^2 - y, x^2 - y + y^2): kernel e_0, D^2G(e_0, e_0) = (2, 2)
        # lies in the image of DG = span{(-1, -1)}
        G = sq(2, {(2, 0): 1, (0, 1): -1}, {(2, 0): 1, (0, 1): -1, (0, 2): 1})
        rej = is_simple_double_zero(G, ORIGIN)
        assert rej.reason == "HessianInImage"

    def test_mixed_fiber_double_point(self):
        assert is_simple_double_zero(MIXED, ORIGIN).valid


UNIT_PARABOLA = sq(1, {(2,): 1, (0,): -1})  # x^2 - 1
SQRT2 = sq(1, {(2,): 1, (0,): -2})  # x^2 - 2


class TestKrawczyk:
    def test_hand_computation_x_squared_minus_one(self):
        # K(I) = 1 - Y*(x^2-1) + (1 - Y*2I)(I - 1) with x=1, Y=1/2 and I the
        # complex box 1 + [-0.1, 0.1] + [-0.1, 0.1]i: the middle term
        # vanishes, 1 - Y*2I = [-0.1, 0.1] + [-0.1, 0.1]i, and the product
        # with I - 1 has real part [-0.02, 0.02] (two cross terms), so
        # K.re = [0.98, 1.02] strictly inside [0.9, 1.1]
        box = ComplexBox.around([1 + 0j], 0.1)
        img = krawczyk(UNIT_PARABOLA, [1.0], [[0.5]], box)
        assert box.strictly_contains_box(img)
        assert img.coords[0].re.lo == pytest.approx(0.98, abs=1e-12)
        assert img.coords[0].re.hi == pytest.approx(1.02, abs=1e-12)
        assert img.coords[0].im.lo == pytest.approx(-0.02, abs=1e-12)

    def test_wrong_root_not_contained(self):
        # a box around 2 (not a zero) cannot contain its Krawczyk image
        box = ComplexBox.around([2 + 0j], 0.1)
        img = krawczyk(UNIT_PARABOLA, [2.0], [[0.25]], box)
        assert not box.contains_box(img)


class TestRumpCertify:
    def test_sqrt2_box_straddles_the_exact_root(self):
        cb = rump_certify(SQRT2, [1.41421356])
        assert cb is not None
        lo, hi = Fraction(cb.box.coords[0].re.lo), Fraction(cb.box.coords[0].re.hi)
        assert 0 < lo and lo * lo < 2 < hi * hi
        assert cb.box.coords[0].im.lo <= 0 <= cb.box.coords[0].im.hi

    def test_witnesses_reverify(self):
        cb = rump_certify(SQRT2, [1.41421356])
        img = krawczyk(SQRT2, cb.x, cb.Y, cb.box)
        assert cb.box.strictly_contains_box(img)

    def test_never_certifies_a_singular_point(self):
        # x^2 has a double root at 0: no box around any nearby point may
        # certify, at any inflation level
        G = sq(1, {(2,): 1})
        for x0 in (1e-8, 1e-4, 0.0, -1e-6):
            assert rump_certify(G, [x0]) is None

    def test_never_certifies_far_from_any_root(self):
        assert rump_certify(UNIT_PARABOLA, [0.0]) is None

    def test_accepts_compiled_system(self):
        assert rump_certify(compile_system(SQRT2), [1.41421356]) is not None

    def test_crude_start_is_callers_problem(self):
        # x0 is used as-is; from a crude start the inflation schedule opens
        # far too wide and certification honestly fails rather than
        # silently refining
        assert rump_certify(SQRT2, [1.5]) is None


FOUR_CORNERS = sq(2, {(2, 0): 1, (0, 0): -1}, {(0, 2): 1, (0, 0): -1})


class TestCertifyFiber:
    def test_full_fiber(self):
        cands = [np.array(c) for c in ([1 + 0j, 1], [1, -1], [-1, 1], [-1, -1])]
        fiber = certify_fiber(FOUR_CORNERS, cands, expected_degree=4)
        assert fiber.count == 4
        assert fiber.failed_candidates == 0
        for i, a in enumerate(fiber.boxes):
            for b in fiber.boxes[:i]:
                assert not a.box.intersects(b.box)

    def test_count_mismatch_carries_partial_fiber(self):
        cands = [np.array([1 + 0j, 1]), np.array([1 + 0j, -1])]
        with pytest.raises(CountMismatch) as exc:
            certify_fiber(FOUR_CORNERS, cands, expected_degree=4)
        assert exc.value.fiber.count == 2

    def test_duplicate_candidates_overlap(self):
        # two candidates converging to the same zero produce intersecting
        # boxes, which the fiber invariants reject
        cands = [np.array([1.001 + 0j, 1]), np.array([0.999 + 0j, 1])]
        with pytest.raises(OverlapDetected):
            certify_fiber(FOUR_CORNERS, cands, expected_degree=4)

    def test_double_point_accounting(self):
        # MIXED has degree 4 = 2 (double point) + 2 smooth zeros
        dz = is_simple_double_zero(MIXED, ORIGIN)
        cands = [np.array([1.1 + 0j, 0.9]), np.array([-0.9 + 0j, 1.1])]
        fiber = certify_fiber(MIXED, cands, double_point=dz, expected_degree=4)
        assert fiber.count == 2
        origin = [(Fraction(0), Fraction(0))] * 2
        for cb in fiber.boxes:
            assert not cb.box.contains_point(origin)

    def test_unrefinable_candidate_recorded(self):
        dz = is_simple_double_zero(MIXED, ORIGIN)
        cands = [
            np.array([1.1 + 0j, 0.9]),
            np.array([-0.9 + 0j, 1.1]),
            np.array([1e-5 + 0j, 1e-5]),  # attracted to the double point
        ]
        # the bad candidate fails certification and is recorded, leaving the
        # count at the expected 4 - 2 = 2, so no error is raised
        fiber = certify_fiber(MIXED, cands, double_point=dz, expected_degree=4)
        assert fiber.count == 2 and fiber.failed_candidates == 1
        assert len(fiber.failed_points) == 1

    def test_invalid_double_point_rejected(self):
        rej = is_simple_double_zero(MIXED, ChartPoint((1, 1)))
        with pytest.raises(ValueError):
            certify_fiber(MIXED, [], double_point=rej)
