"""Exact arithmetic: Gaussian rationals, sparse polynomials, exact matrices."""

import random
from fractions import Fraction

import pytest

from fano.exact import (
    ExactMatrix,
    GQ_ONE,
    GQ_ZERO,
    GaussianRational,
    SparsePoly,
)
from tests.conftest import random_gq


class TestGaussianRational:
    def test_field_axioms_spot(self):
        a = GaussianRational(Fraction(2, 3), Fraction(-1, 5))
        b = GaussianRational(Fraction(-7, 2), Fraction(4, 9))
        assert a + b == b + a
        assert a * b == b * a
        assert (a + b) * a == a * a + b * a
        assert a - a == GQ_ZERO
        assert a * a.inverse() == GQ_ONE

    def test_i_squared(self):
        i = GaussianRational(0, 1)
        assert i * i == GaussianRational(-1)

    def test_division(self):
        a = GaussianRational(1, 1)
        b = GaussianRational(1, -1)
        # (1+i)/(1-i) = i
        assert a / b == GaussianRational(0, 1)

    def test_zero_inverse_raises(self):
        with pytest.raises(ZeroDivisionError):
            GQ_ZERO.inverse()

    def test_conjugate_norm(self):
        a = GaussianRational(Fraction(3, 4), Fraction(5, 7))
        n = a * a.conjugate()
        assert n.im == 0
        assert n.re == Fraction(3, 4) ** 2 + Fraction(5, 7) ** 2

    def test_string_round_trip(self):
        rng = random.Random(7)
        for _ in range(200):
            a = random_gq(rng, span=30)
            assert GaussianRational.from_string(str(a)) == a

    def test_string_forms(self):
        assert str(GaussianRational(Fraction(1, 2), Fraction(-3, 4))) == "1/2-3/4*i"
        assert GaussianRational.from_string("1/2-3/4*i") == GaussianRational(
            Fraction(1, 2), Fraction(-3, 4)
        )
        assert GaussianRational.from_string("-5/3") == GaussianRational(Fraction(-5, 3))

    def test_immutable(self):
        a = GaussianRational(1)
        with pytest.raises(AttributeError):
            a.re = Fraction(2)

    def test_coercion(self):
        assert GaussianRational(2) + 3 == GaussianRational(5)
        assert 3 - GaussianRational(2) == GaussianRational(1)
        assert Fraction(1, 2) * GaussianRational(4) == GaussianRational(2)


class TestSparsePoly:
    def test_zero_coefficients_dropped(self):
        p = SparsePoly(2, {(1, 0): GaussianRational(0), (0, 1): GaussianRational(2)})
        assert (1, 0) not in p.terms
        assert p.coefficient((0, 1)) == GaussianRational(2)

    def test_degree_and_homogeneity(self):
        p = SparsePoly(2, {(2, 0): 1, (1, 1): 3})
        assert p.degree() == 2
        assert p.is_homogeneous()
        q = p + SparsePoly(2, {(1, 0): 1})
        assert not q.is_homogeneous()
        assert SparsePoly.zero(2).degree() == -1

    def test_ring_identities(self):
        rng = random.Random(11)

        def rand_poly():
            terms = {}
            for _ in range(5):
                mono = (rng.randint(0, 2), rng.randint(0, 2), rng.randint(0, 2))
                terms[mono] = random_gq(rng)
            return SparsePoly(3, terms)

        for _ in range(20):
            a, b, c = rand_poly(), rand_poly(), rand_poly()
            assert a * (b + c) == a * b + a * c
            assert a * b == b * a
            assert (a * b) * c == a * (b * c)
            assert a - a == SparsePoly.zero(3)

    def test_pow_matches_repeated_mul(self):
        p = SparsePoly(2, {(1, 0): 1, (0, 1): GaussianRational(0, 1)})
        acc = SparsePoly.constant(2, 1)
        for k in range(5):
            assert p**k == acc
            acc = acc * p

    def test_diff(self):
        # d/dx (x^2 y + 3y) = 2xy
        p = SparsePoly(2, {(2, 1): 1, (0, 1): 3})
        assert p.diff(0) == SparsePoly(2, {(1, 1): 2})
        assert p.diff(1) == SparsePoly(2, {(2, 0): 1, (0, 0): 3})

    def test_evaluate(self):
        p = SparsePoly(2, {(2, 0): 1, (0, 1): GaussianRational(0, 1)})
        x = GaussianRational(Fraction(1, 2))
        y = GaussianRational(2, 1)
        # (1/2)^2 + i*(2+i) = 1/4 + 2i - 1 = -3/4 + 2i
        assert p.evaluate([x, y]) == GaussianRational(Fraction(-3, 4), 2)

    def test_substitute_composition(self):
        # p(x, y) = x*y; substitute x -> u+v, y -> u-v gives u^2 - v^2
        p = SparsePoly(2, {(1, 1): 1})
        u_plus_v = SparsePoly(2, {(1, 0): 1, (0, 1): 1})
        u_minus_v = SparsePoly(2, {(1, 0): 1, (0, 1): -1})
        assert p.substitute([u_plus_v, u_minus_v]) == SparsePoly(
            2, {(2, 0): 1, (0, 2): -1}
        )

    def test_canonical_str_round_trip(self):
        rng = random.Random(13)
        for _ in range(100):
            terms = {}
            for _ in range(rng.randint(0, 6)):
                mono = tuple(rng.randint(0, 3) for _ in range(3))
                terms[mono] = random_gq(rng, span=20)
            p = SparsePoly(3, terms)
            assert SparsePoly.from_string(p.canonical_str(), 3) == p

    def test_canonical_str_graded_lex(self):
        p = SparsePoly(2, {(0, 2): 1, (1, 0): 1, (2, 0): 1, (1, 1): 1})
        monos = p.sorted_monomials()
        assert monos == [(2, 0), (1, 1), (0, 2), (1, 0)]


def naive_rank(entries):
    """Fraction-free Gaussian elimination rank oracle (complex rationals as
    pairs handled via GaussianRational arithmetic but with first-nonzero
    pivoting, independent of the library's pivot strategy)."""
    m = [row[:] for row in entries]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    rank = 0
    for col in range(cols):
        piv = None
        for i in range(rank, rows):
            if m[i][col]:
                piv = i
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = m[rank][col].inverse()
        m[rank] = [e * inv for e in m[rank]]
        for i in range(rows):
            if i != rank and m[i][col]:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


class TestExactMatrix:
    def test_rank_vs_naive_oracle(self):
        rng = random.Random(17)
        for _ in range(200):
            rows = rng.randint(1, 5)
            cols = rng.randint(1, 5)
            entries = [
                [
                    random_gq(rng, span=4) if rng.random() < 0.7 else GQ_ZERO
                    for _ in range(cols)
                ]
                for _ in range(rows)
            ]
            M = ExactMatrix(entries)
            assert M.rank() == naive_rank(entries)

    def test_kernel_basis_annihilated(self):
        rng = random.Random(19)
        for _ in range(200):
            rows = rng.randint(1, 5)
            cols = rng.randint(1, 5)
            entries = [
                [
                    random_gq(rng, span=4) if rng.random() < 0.6 else GQ_ZERO
                    for _ in range(cols)
                ]
                for _ in range(rows)
            ]
            M = ExactMatrix(entries)
            basis = M.kernel_basis()
            # rank-nullity and exact annihilation
            assert len(basis) == cols - M.rank()
            for v in basis:
                assert all(not e for e in M.matvec(v))

    def test_in_column_span_vs_oracle(self):
        rng = random.Random(23)
        for _ in range(200):
            rows = rng.randint(1, 4)
            cols = rng.randint(1, 4)
            entries = [
                [
                    random_gq(rng, span=3) if rng.random() < 0.6 else GQ_ZERO
                    for _ in range(cols)
                ]
                for _ in range(rows)
            ]
            M = ExactMatrix(entries)
            if rng.random() < 0.5:
                # a vector certainly in the span: random column combination
                coeffs = [random_gq(rng, span=3) for _ in range(cols)]
                w = M.matvec(coeffs)
            else:
                w = [random_gq(rng, span=3) for _ in range(rows)]
            augmented = [row + [wi] for row, wi in zip(entries, w)]
            expected = naive_rank(augmented) == naive_rank(entries) if entries else True
            assert M.in_column_span(w) == expected

    def test_solve_affine(self):
        rng = random.Random(29)
        for _ in range(100):
            rows = rng.randint(1, 4)
            cols = rng.randint(1, 4)
            entries = [
                [random_gq(rng, span=3) for _ in range(cols)] for _ in range(rows)
            ]
            M = ExactMatrix(entries)
            b = [random_gq(rng, span=3) for _ in range(rows)]
            sol = M.solve_affine(b)
            if sol is None:
                assert not ExactMatrix(entries).in_column_span(b)
            else:
                x, kernel = sol
                got = M.matvec(x)
                assert all(g == bi for g, bi in zip(got, b))
                for v in kernel:
                    assert all(not e for e in M.matvec(v))

    def test_identity_and_zero(self):
        eye = ExactMatrix.identity(3)
        assert eye.rank() == 3
        assert eye.kernel_basis() == []
        z = ExactMatrix.zero(2, 3)
        assert z.rank() == 0
        assert len(z.kernel_basis()) == 3
