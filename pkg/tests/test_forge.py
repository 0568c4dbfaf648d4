"""Instance forging: random instances and double-point constrained instances."""

import pytest

from fano.certify import is_simple_double_zero
from fano.exact import GQ_ZERO
from fano.forge import (
    constrained_form_system,
    containment_constraints,
    default_double_point,
    form_monomials,
    random_form_system,
    tangency_constraints,
)
from fano.problems import FanoType
from fano.systems import (
    ChartPoint,
    TangentVector,
    build_square_system,
    evaluate_at,
    jacobian_at,
)

TWO_QUADRICS = FanoType(1, 4, (2, 2))
CUBIC_SURFACE = FanoType(1, 3, (3,))


class TestFormMonomials:
    def test_count_and_order(self):
        monos = form_monomials(3, 2)
        assert len(monos) == 6  # C(2+2, 2)
        assert monos[0] == (2, 0, 0)
        assert monos[-1] == (0, 0, 2)
        # graded-lex descending within the fixed degree
        assert monos == sorted(monos, reverse=True)


class TestRandomFormSystem:
    def test_deterministic_per_seed(self):
        a = random_form_system(TWO_QUADRICS, 42)
        b = random_form_system(TWO_QUADRICS, 42)
        c = random_form_system(TWO_QUADRICS, 43)
        assert a == b
        assert a != c

    def test_shapes(self):
        F = random_form_system(CUBIC_SURFACE, 0)
        assert len(F.forms) == 1
        assert F.forms[0].degree() == 3

    def test_rejects_non_fano(self):
        with pytest.raises(ValueError):
            random_form_system(FanoType(1, 4, (3,)), 0)


class TestConstraints:
    def test_constraint_ranks_two_quadrics(self):
        t = TWO_QUADRICS
        ell, v = default_double_point(t)
        cont = containment_constraints(t, ell)
        tan = tangency_constraints(t, ell, v)
        # each block of the square system contributes m/s rows; at the chart
        # origin the containment rows select the pure bottom-block monomials
        assert cont.matrix.rows == t.num_chart_vars
        assert tan.matrix.rows == t.num_chart_vars
        assert cont.matrix.rank() == 6
        assert tan.matrix.rank() == 6
        stacked = cont.stacked_with(tan)
        assert stacked.matrix.rank() == 12

    def test_zero_tangent_rejected(self):
        t = TWO_QUADRICS
        ell, _ = default_double_point(t)
        with pytest.raises(ValueError):
            tangency_constraints(t, ell, TangentVector((0,) * t.num_chart_vars))


class TestConstrainedFormSystem:
    @pytest.mark.parametrize("t", [TWO_QUADRICS, CUBIC_SURFACE])
    def test_prescribed_conditions_hold_exactly(self, t):
        ell, v = default_double_point(t)
        F = constrained_form_system(t, ell, v, 0)
        G = build_square_system(F)
        assert all(val == GQ_ZERO for val in evaluate_at(G, ell))
        assert all(
            val == GQ_ZERO for val in jacobian_at(G, ell).matvec(list(v.coords))
        )

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_forged_origin_is_simple_double_zero(self, seed):
        t = TWO_QUADRICS
        ell, v = default_double_point(t)
        F = constrained_form_system(t, ell, v, seed)
        G = build_square_system(F)
        cert = is_simple_double_zero(G, ell)
        assert cert.valid
        # the kernel line is spanned by the prescribed tangent direction
        k = cert.kernel_vector.coords
        # proportionality: k = lambda * v for some scalar lambda
        lam = None
        for kc, vc in zip(k, v.coords):
            if vc:
                lam = kc * vc.inverse()
                break
        assert lam is not None
        assert all(kc == lam * vc for kc, vc in zip(k, v.coords))

    def test_deterministic(self):
        t = CUBIC_SURFACE
        ell, v = default_double_point(t)
        assert constrained_form_system(t, ell, v, 7) == constrained_form_system(
            t, ell, v, 7
        )

    def test_default_double_point_shape(self):
        t = TWO_QUADRICS
        ell, v = default_double_point(t)
        assert len(ell.coords) == t.num_chart_vars
        assert not any(ell.coords)
        assert not v.is_zero()
