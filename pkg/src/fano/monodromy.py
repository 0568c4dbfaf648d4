"""Monodromy sampling: transport a certified fiber around random loops in
coefficient space and accumulate the permutations they induce.

Loops are triangles through two random auxiliary instances; since the
square system depends linearly on the instance coefficients, each leg is a
straight segment homotopy between compiled systems.  Group order is exact
(stabilizer chain via sympy); sampling only ever bounds the Galois group
from below.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._seeds import derive_seed
from .floatsys import compile_system, newton_refine
from .forge import random_form_system
from .problems import FanoType, fano_degree
from .systems import build_square_system, plane_matrix
from .track import TrackSettings, solve_with_retries, track_segment

__all__ = [
    "Permutation",
    "PermGroupEstimate",
    "loop_permutation",
    "group_order",
    "sample_galois_group",
    "incidence_matrix",
    "is_incidence_automorphism",
]

# fiber sizes above this are too big to solve by total-degree homotopy here
DEFAULT_DEGREE_GATE = 64


@dataclass(frozen=True)
class Permutation:
    """A bijection of {0..N-1}, stored as the image tuple."""

    images: tuple

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError("not a bijection")

    def __len__(self):
        return len(self.images)

    def __call__(self, i):
        return self.images[i]

    def compose(self, other):
        """self after other: (self * other)(i) = self(other(i))."""
        if len(self) != len(other):
            raise ValueError("permutation sizes differ")
        return Permutation(tuple(self.images[j] for j in other.images))

    def is_identity(self):
        return all(v == i for i, v in enumerate(self.images))

    def is_odd(self):
        seen = [False] * len(self.images)
        parity = 0
        for i in range(len(self.images)):
            if seen[i]:
                continue
            length = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = self.images[j]
                length += 1
            parity ^= (length - 1) & 1
        return bool(parity)


@dataclass
class PermGroupEstimate:
    """The group generated by the sampled permutations."""

    generators: list
    order: int
    transitive: bool
    contains_odd: bool
    fiber_size: int
    loops_accepted: int = 0
    loops_rejected: int = 0
    seed: int = 0


def group_order(gens, fiber_size=None) -> PermGroupEstimate:
    """Exact order, transitivity and parity of the generated group."""
    from sympy.combinatorics import Permutation as SymPerm
    from sympy.combinatorics import PermutationGroup

    gens = list(gens)
    if fiber_size is None:
        if not gens:
            raise ValueError("need fiber_size when there are no generators")
        fiber_size = len(gens[0])
    if not gens:
        return PermGroupEstimate([], 1, fiber_size <= 1, False, fiber_size)
    grp = PermutationGroup([SymPerm(list(g.images)) for g in gens])
    return PermGroupEstimate(
        gens,
        int(grp.order()),
        bool(grp.is_transitive()),
        any(g.is_odd() for g in gens),
        fiber_size,
    )


def _match_endpoints(endpoints, fiber_points, boxes, margin=1e-6):
    """Match transported endpoints back to fiber indices.

    A certified box containing the endpoint wins; otherwise nearest
    neighbor, rejected unless the runner-up is at least `margin` away.
    Returns the image tuple or None on any ambiguity.
    """
    n = len(fiber_points)
    images = [None] * n
    taken = [False] * n
    for i, z in enumerate(endpoints):
        hits = [
            j for j, cb in enumerate(boxes) if cb.box.contains_point(list(z))
        ] if boxes is not None else []
        if len(hits) == 1:
            j = hits[0]
        elif len(hits) > 1:
            return None
        else:
            dists = [float(np.max(np.abs(z - p))) for p in fiber_points]
            order = sorted(range(n), key=dists.__getitem__)
            if dists[order[0]] > margin:
                return None
            if n > 1 and dists[order[1]] - dists[order[0]] < margin:
                return None
            j = order[0]
        if taken[j]:
            return None
        taken[j] = True
        images[i] = j
    return tuple(images)


def loop_permutation(
    t: FanoType,
    base_system,
    fiber_points,
    boxes,
    seed,
    settings=TrackSettings(),
):
    """Transport the fiber around one random triangle loop.

    base_system: CompiledSystem of the base instance; fiber_points: its
    complete zero set; boxes: the certified boxes (or None).  Returns a
    Permutation, or None when any path fails or matching is ambiguous.
    """
    aux1 = compile_system(
        build_square_system(random_form_system(t, derive_seed("aux1", seed)))
    )
    aux2 = compile_system(
        build_square_system(random_form_system(t, derive_seed("aux2", seed)))
    )
    pts = fiber_points
    for src, dst in ((base_system, aux1), (aux1, aux2), (aux2, base_system)):
        pts = track_segment(src, dst, pts, settings)
        if pts is None:
            return None
    refined = []
    for z in pts:
        x, ok, _ = newton_refine(base_system, z)
        if not ok:
            return None
        refined.append(x)
    images = _match_endpoints(refined, fiber_points, boxes)
    if images is None:
        return None
    return Permutation(images)


def incidence_matrix(t: FanoType, chart_points, tol=1e-8):
    """Symmetric boolean matrix: do the planes at two chart points meet?

    Two r-planes in P^n meet iff the stacked (n+1) x (2r+2) matrix of their
    spans is rank deficient; tested by relative smallest singular value.
    """
    mats = []
    for z in chart_points:
        m = np.zeros((t.n + 1, t.r + 1), dtype=complex)
        for i in range(t.n - t.r):
            m[i] = z[i * (t.r + 1) : (i + 1) * (t.r + 1)]
        m[t.n - t.r :] = np.eye(t.r + 1)
        mats.append(m)
    n = len(mats)
    inc = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(i + 1, n):
            sv = np.linalg.svd(np.hstack([mats[i], mats[j]]), compute_uv=False)
            inc[i, j] = inc[j, i] = sv[-1] < tol * sv[0]
    return inc


def is_incidence_automorphism(perm: Permutation, inc) -> bool:
    """Does the permutation preserve the incidence relation?"""
    p = list(perm.images)
    return bool(np.array_equal(inc[np.ix_(p, p)], inc))


def sample_galois_group(
    t: FanoType,
    num_loops,
    seed,
    stop_order=None,
    degree_gate=DEFAULT_DEGREE_GATE,
    settings=TrackSettings(),
    check_incidences=False,
):
    """Estimate the Galois group from num_loops accepted monodromy loops.

    Solves and certifies one random instance, then samples loops; stops
    early once the generated order reaches stop_order.  The estimate is
    always a subgroup of the true group.
    """
    from .certify import certify_fiber

    deg = fano_degree(t)
    if deg > degree_gate:
        raise ValueError(
            f"degree {deg} exceeds the sampling gate {degree_gate}"
        )
    base = None
    for attempt in range(5):
        F = random_form_system(t, derive_seed("monodromy-base", seed, attempt))
        S = compile_system(build_square_system(F))
        _, endpoints = solve_with_retries(
            S, deg, settings, seed=derive_seed("monodromy-solve", seed, attempt)
        )
        if len(endpoints) != deg:
            continue
        try:
            fiber = certify_fiber(S, endpoints, expected_degree=deg)
        except Exception:
            continue
        points = [np.asarray(cb.x, dtype=complex) for cb in fiber.boxes]
        base = (S, points, fiber.boxes)
        break
    if base is None:
        raise RuntimeError("could not solve and certify a base instance")
    S, points, boxes = base
    inc = incidence_matrix(t, points) if check_incidences else None
    gens = []
    accepted = 0
    rejected = 0
    est = group_order([], fiber_size=deg)
    loop_seed = 0
    while accepted < num_loops:
        perm = loop_permutation(
            t, S, points, boxes, derive_seed("loop", seed, loop_seed), settings
        )
        loop_seed += 1
        if perm is None:
            rejected += 1
            if rejected > 4 * num_loops + 20:
                break
            continue
        if inc is not None and not is_incidence_automorphism(perm, inc):
            raise AssertionError(
                "sampled permutation breaks the incidence relation"
            )
        accepted += 1
        if not perm.is_identity():
            gens.append(perm)
            est = group_order(gens, fiber_size=deg)
            if stop_order is not None and est.order >= stop_order:
                break
    est.loops_accepted = accepted
    est.loops_rejected = rejected
    est.seed = seed
    return est
