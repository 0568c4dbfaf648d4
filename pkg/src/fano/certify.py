"""Verification engines: exact simple-double-zero checking and interval
(Krawczyk/Rump) certification of smooth zeros, plus fiber bookkeeping.

The double-zero check runs entirely in exact Gaussian-rational arithmetic.
Interval certification uses coefficient enclosures of the exact system, so
a certified box provably contains a zero of the exact system G.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .floatsys import CompiledSystem, compile_system, newton_refine
from .intervals import ComplexBox, ComplexInterval, RealInterval
from .systems import (
    ChartPoint,
    SquareSystem,
    TangentVector,
    evaluate_at,
    hessian_quadratic,
    jacobian_at,
)

__all__ = [
    "DoubleZeroCertificate",
    "Rejection",
    "CertifiedBox",
    "CertifiedFiber",
    "FiberError",
    "CountMismatch",
    "OverlapDetected",
    "ExcludedPointHit",
    "is_simple_double_zero",
    "krawczyk",
    "rump_certify",
    "certify_fiber",
]


@dataclass(frozen=True)
class DoubleZeroCertificate:
    """Witness that x is a simple double zero of G: G(x) = 0, ker DG(x) is a
    line spanned by kernel_vector, and D^2G(x)(v,v) escapes Im DG(x)."""

    point: ChartPoint
    kernel_vector: TangentVector
    zero_value: bool
    kernel_dimension_one: bool
    hessian_escape: bool

    @property
    def valid(self):
        return self.zero_value and self.kernel_dimension_one and self.hessian_escape


@dataclass(frozen=True)
class Rejection:
    """Why x is not a simple double zero; reason names the first failing
    condition: NotAZero, KernelDimZero, KernelDimHigh or HessianInImage."""

    reason: str
    detail: str = ""

    @property
    def valid(self):
        return False


def is_simple_double_zero(G: SquareSystem, x: ChartPoint):
    """Exact Dedieu-Shub check at a Gaussian-rational point."""
    values = evaluate_at(G, x)
    if any(values):
        bad = next(i for i, val in enumerate(values) if val)
        return Rejection("NotAZero", f"equation {bad} evaluates to {values[bad]}")
    jac = jacobian_at(G, x)
    kernel = jac.kernel_basis()
    if len(kernel) == 0:
        return Rejection("KernelDimZero", "Jacobian is nonsingular (smooth point)")
    if len(kernel) > 1:
        return Rejection("KernelDimHigh", f"kernel dimension {len(kernel)}")
    v = TangentVector(tuple(kernel[0]))
    h = hessian_quadratic(G, x, v)
    if jac.in_column_span(h):
        return Rejection("HessianInImage", "D^2G(x)(v,v) lies in Im DG(x)")
    return DoubleZeroCertificate(x, v, True, True, True)


def _as_compiled(G):
    if isinstance(G, CompiledSystem):
        return G
    return compile_system(G)


def krawczyk(G, x, Y, box: ComplexBox, gx=None) -> ComplexBox:
    """The Krawczyk image K(I) = x - Y*G(x) + (Id - Y*DG(I))*(I - x).

    x and Y are promoted to degenerate intervals; G(x) is evaluated exactly
    at the rational point x (or taken from gx, precomputed the same way),
    and DG over the box with interval coefficient enclosures, so the image
    is an enclosure of the exact operator applied to the exact system.
    """
    S = _as_compiled(G)
    n = S.nvars
    x = [complex(z) for z in x]
    xiv = [ComplexInterval.point(z) for z in x]
    if gx is None:
        gx = S.value_enclosure(x)
    _, dgi = S.value_jac_box(box, want_jac=True)
    Yiv = [[ComplexInterval.point(Y[i][j]) for j in range(n)] for i in range(n)]
    one = ComplexInterval.point(1.0)
    out = []
    for i in range(n):
        # x_i - (Y*G(x))_i
        acc = xiv[i]
        for j in range(n):
            acc = acc - Yiv[i][j] * gx[j]
        # + sum_j (delta_ij - (Y*DG(I))_ij) * (I_j - x_j)
        for j in range(n):
            entry = ComplexInterval.point(0.0)
            for k in range(n):
                entry = entry + Yiv[i][k] * dgi[k][j]
            entry = (one - entry) if i == j else (-entry)
            acc = acc + entry * (box[j] - xiv[j])
        out.append(acc)
    return ComplexBox(out)


@dataclass(frozen=True)
class CertifiedBox:
    """A box proven to contain a zero, with the Krawczyk witnesses (x, Y)
    needed to re-verify the containment K(I) in I from scratch."""

    box: ComplexBox
    x: tuple
    Y: tuple  # row-major tuple of tuples of complex


def rump_certify(G, x0, max_retries=8):
    """Certify a zero at the approximate (typically Newton-refined) point x0.

    Inverts the Jacobian in floats and searches the inflation schedule for
    a box I with K(I) strictly inside I; returns a CertifiedBox on success,
    None on failure.  Never a false positive: the containment check is
    carried out in outward-rounded intervals over coefficient enclosures of
    the exact system.  x0 is used as-is; refinement is the caller's job.
    """
    S = _as_compiled(G)
    n = S.nvars
    x = np.asarray(x0, dtype=complex)
    vals, jac = S.value_jac(x)
    try:
        step = np.linalg.solve(jac, vals)
        Y = np.linalg.inv(jac)
    except np.linalg.LinAlgError:
        return None
    if not (np.all(np.isfinite(Y)) and np.all(np.isfinite(step))):
        return None
    half_width = max(1e-12, 8.0 * float(np.linalg.norm(step)))
    gx = S.value_enclosure(x)
    for _ in range(max_retries + 1):
        box = ComplexBox.around(x, half_width)
        image = krawczyk(S, x, Y, box, gx=gx)
        if box.strictly_contains_box(image):
            return CertifiedBox(
                box,
                tuple(complex(z) for z in x),
                tuple(tuple(complex(Y[i, j]) for j in range(n)) for i in range(n)),
            )
        half_width *= 8.0
    return None


@dataclass
class CertifiedFiber:
    """Certified zeros of one instance: optionally a double point plus
    pairwise-disjoint boxes, none containing the double point."""

    instance: object
    double_point: DoubleZeroCertificate = None
    boxes: list = field(default_factory=list)
    expected_degree: int = 0
    failed_candidates: int = 0
    # refined positions of the candidates that failed certification;
    # clusters here usually mark genuine multiple zeros of G
    failed_points: list = field(default_factory=list)

    @property
    def count(self):
        return len(self.boxes)


class FiberError(Exception):
    """Base for fiber certification failures; carries the partial fiber."""

    def __init__(self, message, fiber):
        super().__init__(message)
        self.fiber = fiber


class CountMismatch(FiberError):
    pass


class OverlapDetected(FiberError):
    pass


class ExcludedPointHit(FiberError):
    pass


def _exact_pairs(point: ChartPoint):
    return [(c.re, c.im) for c in point.coords]


def certify_fiber(G, candidates, double_point=None, expected_degree=None):
    """Certify every candidate and enforce the fiber invariants.

    Boxes must be pairwise disjoint; the exact double point (when present)
    must lie in no box; the certified count must equal
    expected_degree - 2 * (double point present).  Violations raise
    CountMismatch / OverlapDetected / ExcludedPointHit carrying the partial
    fiber, with the certification work already done preserved.
    """
    S = _as_compiled(G)
    if double_point is not None and not double_point.valid:
        raise ValueError("double_point must be a valid certificate")
    fiber = CertifiedFiber(
        instance=getattr(G, "provenance", None),
        double_point=double_point,
        expected_degree=expected_degree or 0,
    )
    excl = _exact_pairs(double_point.point) if double_point is not None else None
    for cand in candidates:
        refined, ok, _ = newton_refine(S, cand)
        cb = rump_certify(S, refined) if ok else None
        if cb is None:
            fiber.failed_candidates += 1
            fiber.failed_points.append(refined)
            continue
        if excl is not None and cb.box.contains_point(excl):
            raise ExcludedPointHit("a certified box contains the double point", fiber)
        for other in fiber.boxes:
            if cb.box.intersects(other.box):
                raise OverlapDetected("certified boxes intersect", fiber)
        fiber.boxes.append(cb)
    if expected_degree is not None:
        want = expected_degree - (2 if double_point is not None else 0)
        if fiber.count != want:
            raise CountMismatch(
                f"certified {fiber.count} boxes, expected {want}", fiber
            )
    return fiber
