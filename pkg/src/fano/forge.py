"""Instance construction: fully random instances, and instances constrained
so a prescribed plane ell lies on the Fano scheme with a prescribed tangent
direction v.

Both the containment condition G_F(x_ell) = 0 and the tangency condition
DG_F(x_ell) * v = 0 are linear in the coefficients of F, so constrained
instances are random combinations of an exact kernel basis.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from ._seeds import derive_seed
from .exact import ExactMatrix, GQ_ZERO, GaussianRational, SparsePoly
from .problems import FanoType, delta
from .systems import (
    ChartPoint,
    FormSystem,
    TangentVector,
    build_square_system,
    evaluate_at,
    jacobian_at,
    restrict_form,
)

__all__ = [
    "ConstraintSystem",
    "form_monomials",
    "default_double_point",
    "random_form_system",
    "containment_constraints",
    "tangency_constraints",
    "constrained_form_system",
]


@dataclass(frozen=True)
class ConstraintSystem:
    """Exact linear conditions (matrix * coeffs = rhs) on the coefficient
    vector of an instance F."""

    matrix: ExactMatrix
    rhs: tuple

    def stacked_with(self, other):
        if self.matrix.cols != other.matrix.cols:
            raise ValueError("constraint systems over different coefficient spaces")
        return ConstraintSystem(
            ExactMatrix(self.matrix.entries + other.matrix.entries),
            self.rhs + other.rhs,
        )


def form_monomials(num_vars, d):
    """Degree-d exponent tuples in graded-lex order, largest first; this
    fixes the coordinate order on the coefficient space of each form."""
    monos = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            monos.append(prefix + (remaining,))
            return
        for e in range(remaining, -1, -1):
            rec(prefix + (e,), remaining - e, slots - 1)

    rec((), d, num_vars)
    return monos


def default_double_point(t: FanoType):
    """The prescribed (ell, v): chart origin and a fixed generic tangent
    direction.

    A coordinate direction will not do: it is a rank-one homomorphism in
    T_ell G(r, P^n), and instances constrained to be tangent along it turn
    out to have two-dimensional Jacobian kernel at ell for every draw.  The
    direction (1, 2, ..., m) is full-rank and behaves generically.
    """
    m = t.num_chart_vars
    ell = ChartPoint((0,) * m)
    v = TangentVector(tuple(range(1, m + 1)))
    return ell, v


def _random_gq(rng):
    return GaussianRational(
        Fraction(rng.randint(-10, 10), rng.randint(1, 10)),
        Fraction(rng.randint(-10, 10), rng.randint(1, 10)),
    )


def random_form_system(t: FanoType, seed) -> FormSystem:
    """A random instance: every coefficient an independent Gaussian rational
    of small height, deterministic per seed."""
    if delta(t) != 0:
        raise ValueError(f"{t.label()} is not a Fano problem (delta != 0)")
    rng = random.Random(derive_seed("forge", t.label(), seed))
    forms = []
    for d in t.degrees:
        terms = {}
        for mono in form_monomials(t.n + 1, d):
            c = _random_gq(rng)
            if c:
                terms[mono] = c
        forms.append(SparsePoly(t.n + 1, terms))
    return FormSystem(t, tuple(forms))


def _restricted_values(t, mono, ell, v):
    """For the single monomial form x^mono: the exact values of its
    restricted-form coefficients at ell, and of their directional
    derivatives along v."""
    f = SparsePoly(t.n + 1, {mono: 1})
    coeffs = restrict_form(f, t)
    vals = [g.evaluate(ell.coords) for g in coeffs]
    dirs = []
    for g in coeffs:
        acc = GQ_ZERO
        for j, vj in enumerate(v.coords):
            if vj:
                acc = acc + g.diff(j).evaluate(ell.coords) * vj
        dirs.append(acc)
    return vals, dirs


def _constraint_rows(t, ell, v):
    """Columns of the containment and tangency constraint matrices, one per
    coefficient-space basis vector."""
    m = t.num_chart_vars
    cont_cols = []
    tan_cols = []
    cache = {}
    for d in t.degrees:
        block_cont = []
        block_tan = []
        for mono in form_monomials(t.n + 1, d):
            if mono not in cache:
                cache[mono] = _restricted_values(t, mono, ell, v)
            block_cont.append(cache[mono][0])
            block_tan.append(cache[mono][1])
        cont_cols.append(block_cont)
        tan_cols.append(block_tan)
    # assemble: rows are grouped by form (matching build_square_system);
    # columns run over (form index, monomial) pairs
    s = t.s
    from math import comb

    nrows_per = [comb(d + t.r, t.r) for d in t.degrees]
    total_cols = sum(len(form_monomials(t.n + 1, d)) for d in t.degrees)
    cont = [[GQ_ZERO] * total_cols for _ in range(m)]
    tan = [[GQ_ZERO] * total_cols for _ in range(m)]
    col0 = 0
    row0 = 0
    for i in range(s):
        ncols = len(cont_cols[i])
        nr = nrows_per[i]
        for c in range(ncols):
            for rr in range(nr):
                cont[row0 + rr][col0 + c] = cont_cols[i][c][rr]
                tan[row0 + rr][col0 + c] = tan_cols[i][c][rr]
        col0 += ncols
        row0 += nr
    return ExactMatrix(cont), ExactMatrix(tan)


def containment_constraints(t: FanoType, ell: ChartPoint) -> ConstraintSystem:
    """Linear conditions on F equivalent to G_F(x_ell) = 0."""
    _, v = default_double_point(t)
    mat, _ = _constraint_rows(t, ell, v)
    return ConstraintSystem(mat, (GQ_ZERO,) * mat.rows)


def tangency_constraints(
    t: FanoType, ell: ChartPoint, v: TangentVector
) -> ConstraintSystem:
    """Linear conditions on F equivalent to DG_F(x_ell) * v = 0."""
    if v.is_zero():
        raise ValueError("tangent vector must be nonzero")
    _, mat = _constraint_rows(t, ell, v)
    return ConstraintSystem(mat, (GQ_ZERO,) * mat.rows)


def _coeff_vector_to_forms(t, vec):
    forms = []
    k = 0
    for d in t.degrees:
        terms = {}
        for mono in form_monomials(t.n + 1, d):
            if vec[k]:
                terms[mono] = vec[k]
            k += 1
        forms.append(SparsePoly(t.n + 1, terms))
    return forms


def constrained_form_system(
    t: FanoType, ell: ChartPoint, v: TangentVector, seed
) -> FormSystem:
    """A random instance satisfying G_F(x_ell) = 0 and DG_F(x_ell) * v = 0
    exactly: a random rational combination of a kernel basis of the stacked
    constraints.  Degenerate draws (a form identically zero or of deficient
    degree) advance the seed and redraw."""
    if delta(t) != 0:
        raise ValueError(f"{t.label()} is not a Fano problem (delta != 0)")
    if v.is_zero():
        raise ValueError("tangent vector must be nonzero")
    cont_mat, tan_mat = _constraint_rows(t, ell, v)
    stacked = ExactMatrix(cont_mat.entries + tan_mat.entries)
    basis = stacked.kernel_basis()
    if not basis:
        raise AssertionError("constraint kernel is trivial")
    dim = len(basis[0])
    while True:
        rng = random.Random(derive_seed("constrained", t.label(), seed))
        weights = [_random_gq(rng) for _ in basis]
        vec = [GQ_ZERO] * dim
        for w, b in zip(weights, basis):
            if not w:
                continue
            for i, bi in enumerate(b):
                if bi:
                    vec[i] = vec[i] + w * bi
        forms = _coeff_vector_to_forms(t, vec)
        if all(f.degree() == d for f, d in zip(forms, t.degrees)):
            F = FormSystem(t, tuple(forms))
            break
        seed += 1
    # round-trip: the prescribed conditions must hold exactly
    G = build_square_system(F)
    if any(evaluate_at(G, ell)):
        raise AssertionError("containment round-trip failed")
    if any(jacobian_at(G, ell).matvec(list(v.coords))):
        raise AssertionError("tangency round-trip failed")
    return F
