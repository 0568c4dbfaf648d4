"""Square polynomial systems for Fano schemes in the standard affine chart
of the Grassmannian.

A plane in the chart is the column span of the (n+1) x (r+1) matrix whose
bottom (r+1) x (r+1) block is the identity and whose top (n-r) x (r+1)
block holds the chart coordinates (row-major).  Restricting each form of an
instance to the parameterized plane and collecting coefficients of the
parameter monomials yields a square system G in the chart coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exact import ExactMatrix, GQ_ZERO, GaussianRational, SparsePoly
from .problems import FanoType, delta

__all__ = [
    "FormSystem",
    "ChartPoint",
    "TangentVector",
    "SquareSystem",
    "plane_matrix",
    "restrict_form",
    "build_square_system",
    "evaluate_at",
    "jacobian_at",
    "hessian_quadratic",
    "apply_coordinate_change",
    "random_coordinate_change",
]


@dataclass(frozen=True)
class FormSystem:
    """An instance F = (f_1, ..., f_s) of homogeneous forms in n+1 variables."""

    fano_type: FanoType
    forms: tuple

    def __post_init__(self):
        t = self.fano_type
        object.__setattr__(self, "forms", tuple(self.forms))
        if len(self.forms) != t.s:
            raise ValueError("expected one form per hypersurface degree")
        for f, d in zip(self.forms, t.degrees):
            if f.num_vars != t.n + 1:
                raise ValueError("forms must live in n+1 variables")
            if f.degree() != d or not f.is_homogeneous():
                raise ValueError(f"form must be homogeneous of degree {d}")


@dataclass(frozen=True)
class ChartPoint:
    """A point of the chart: the (n-r)(r+1) top-block entries, row-major."""

    coords: tuple

    def __post_init__(self):
        object.__setattr__(
            self,
            "coords",
            tuple(
                c if isinstance(c, GaussianRational) else GaussianRational(c)
                for c in self.coords
            ),
        )


@dataclass(frozen=True)
class TangentVector:
    """A tangent direction to the Grassmannian in chart coordinates."""

    coords: tuple

    def __post_init__(self):
        object.__setattr__(
            self,
            "coords",
            tuple(
                c if isinstance(c, GaussianRational) else GaussianRational(c)
                for c in self.coords
            ),
        )

    def is_zero(self):
        return not any(self.coords)


@dataclass(frozen=True)
class SquareSystem:
    """The square system G cutting out V_r(F) inside the chart."""

    num_vars: int
    polys: tuple
    provenance: FormSystem = None  # None for hand-built toy systems

    def __post_init__(self):
        object.__setattr__(self, "polys", tuple(self.polys))
        if len(self.polys) != self.num_vars:
            raise ValueError("system is not square")
        for g in self.polys:
            if g.num_vars != self.num_vars:
                raise ValueError("equations live in the wrong variable set")


def plane_matrix(t: FanoType, x: ChartPoint) -> ExactMatrix:
    """The (n+1) x (r+1) matrix of the plane at chart point x: top block
    carries x.coords row-major, bottom block is the identity."""
    r, n = t.r, t.n
    if len(x.coords) != t.num_chart_vars:
        raise ValueError("chart point has the wrong length")
    rows = []
    for i in range(n - r):
        rows.append(list(x.coords[i * (r + 1) : (i + 1) * (r + 1)]))
    for i in range(r + 1):
        rows.append([1 if j == i else 0 for j in range(r + 1)])
    return ExactMatrix(rows)


def _parameter_monomials(r, d):
    """Degree-d monomials in the r+1 plane parameters, graded-lex largest
    first.  This fixes the equation order of G once and for all."""
    monos = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            monos.append(prefix + (remaining,))
            return
        for e in range(remaining, -1, -1):
            rec(prefix + (e,), remaining - e, slots - 1)

    rec((), d, r + 1)
    return monos


def restrict_form(f: SparsePoly, t: FanoType):
    """Coefficients of the restriction of f to the symbolic chart plane.

    The plane is parameterized by r+1 parameters s_0..s_r; substituting the
    symbolic plane matrix columns into f gives a degree-d form in the
    parameters whose C(d+r, r) coefficients are polynomials in the chart
    variables, returned in graded-lex (largest-first) parameter order.
    """
    r, n = t.r, t.n
    if f.num_vars != n + 1:
        raise ValueError("form must live in n+1 variables")
    d = f.degree()
    if d < 0:
        d = 0
    if not f.is_homogeneous():
        raise ValueError("form must be homogeneous")
    m = t.num_chart_vars
    total = m + r + 1  # chart variables then parameters
    # image of ambient variable x_k under the plane parameterization
    images = []
    for k in range(n + 1):
        terms = {}
        if k < n - r:
            for j in range(r + 1):
                mono = [0] * total
                mono[k * (r + 1) + j] = 1
                mono[m + j] = 1
                terms[tuple(mono)] = 1
        else:
            mono = [0] * total
            mono[m + (k - (n - r))] = 1
            terms[tuple(mono)] = 1
        images.append(SparsePoly(total, terms))
    restricted = f.substitute(images)
    coeffs = []
    for pmono in _parameter_monomials(r, d):
        terms = {}
        for mono, c in restricted.terms.items():
            if mono[m:] == pmono:
                terms[mono[:m]] = c
        coeffs.append(SparsePoly(m, terms))
    return coeffs


def build_square_system(F: FormSystem) -> SquareSystem:
    """Concatenate the restricted-form coefficients of every form of F into
    the square system G; requires delta = 0 (which makes the count square)."""
    t = F.fano_type
    if delta(t) != 0:
        raise ValueError(f"{t.label()} is not a Fano problem (delta != 0)")
    polys = []
    for f in F.forms:
        polys.extend(restrict_form(f, t))
    if len(polys) != t.num_chart_vars:
        raise AssertionError("equation count does not match variable count")
    return SquareSystem(t.num_chart_vars, tuple(polys), F)


def evaluate_at(G: SquareSystem, x: ChartPoint):
    """Exact value vector G(x)."""
    return [g.evaluate(x.coords) for g in G.polys]


def jacobian_at(G: SquareSystem, x: ChartPoint) -> ExactMatrix:
    """Exact Jacobian matrix DG(x)."""
    rows = []
    for g in G.polys:
        rows.append([g.diff(j).evaluate(x.coords) for j in range(G.num_vars)])
    return ExactMatrix(rows)


def hessian_quadratic(G: SquareSystem, x: ChartPoint, v: TangentVector):
    """The exact vector D^2G(x)(v, v): entry i is v^T H_i(x) v."""
    if len(v.coords) != G.num_vars:
        raise ValueError("tangent vector has the wrong length")
    out = []
    for g in G.polys:
        # directional derivative twice: sum_j v_j d/dx_j applied two times
        first = SparsePoly.zero(G.num_vars)
        for j, vj in enumerate(v.coords):
            if vj:
                first = first + g.diff(j) * vj
        acc = GQ_ZERO
        for k, vk in enumerate(v.coords):
            if vk:
                acc = acc + first.diff(k).evaluate(x.coords) * vk
        out.append(acc)
    return out


def apply_coordinate_change(F: FormSystem, A: ExactMatrix) -> FormSystem:
    """The instance with every form composed with the linear change x -> A x."""
    t = F.fano_type
    n = t.n
    if A.rows != n + 1 or A.cols != n + 1:
        raise ValueError("coordinate change must be (n+1) x (n+1)")
    images = [
        SparsePoly.linear_form([A.entries[k][j] for j in range(n + 1)])
        for k in range(n + 1)
    ]
    return FormSystem(t, tuple(f.substitute(images) for f in F.forms))


def random_coordinate_change(t: FanoType, rng) -> ExactMatrix:
    """A random invertible (n+1) x (n+1) matrix with small integer entries."""
    n = t.n
    while True:
        A = ExactMatrix(
            [[rng.randint(-3, 3) for _ in range(n + 1)] for _ in range(n + 1)]
        )
        if A.rank() == n + 1:
            return A
