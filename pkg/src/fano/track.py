"""Homotopy continuation: total-degree solving and parameter-path transport.

Paths follow the Davidenko ODE dz/dt = -H_z^{-1} H_t with a fourth-order
Runge-Kutta predictor and a short Newton corrector, adapting the step on
corrector failure.  Everything here is plain floating point; rigor is
supplied afterwards by the certification layer.
"""

from __future__ import annotations

import cmath
import random
from dataclasses import dataclass

import numpy as np

from ._seeds import derive_seed
from .floatsys import CompiledSystem, compile_system, newton_refine

__all__ = [
    "TrackSettings",
    "PathResult",
    "LinearHomotopy",
    "total_degree_start",
    "track_path",
    "solve_total_degree",
    "solve_with_retries",
    "track_segment",
    "dedup_points",
]


@dataclass(frozen=True)
class TrackSettings:
    initial_step: float = 0.05
    min_step: float = 1e-10
    max_newton: int = 5
    corrector_tol: float = 1e-10
    divergence_norm: float = 1e8
    dedup_tol: float = 1e-8
    endpoint_tol: float = 1e-11

    def __post_init__(self):
        if self.min_step <= 0 or self.corrector_tol <= 0:
            raise ValueError("tolerances must be positive")


@dataclass
class PathResult:
    start_index: int
    endpoint: object  # numpy array or None
    status: str  # converged | diverged | failed | truncated-near-singularity


class _TotalDegreeStart:
    """The start system (z_i^{d_i} - 1)_i with its Jacobian."""

    def __init__(self, degrees):
        self.degrees = np.asarray(degrees, dtype=float)
        self.nvars = len(degrees)

    def value_jac(self, z):
        d = self.degrees
        vals = z**d - 1.0
        jac = np.diag(d * z ** (d - 1.0))
        return vals, jac


class LinearHomotopy:
    """H(z, t) = (1 - t) * gamma * S0(z) + t * S1(z)."""

    def __init__(self, start, target, gamma=1.0):
        self.start = start
        self.target = target
        self.gamma = complex(gamma)

    def value_jac_t(self, z, t):
        v0, j0 = self.start.value_jac(z)
        v1, j1 = self.target.value_jac(z)
        a = (1.0 - t) * self.gamma
        return a * v0 + t * v1, a * j0 + t * j1, v1 - self.gamma * v0

    def value_jac(self, z, t):
        v0, j0 = self.start.value_jac(z)
        v1, j1 = self.target.value_jac(z)
        a = (1.0 - t) * self.gamma
        return a * v0 + t * v1, a * j0 + t * j1


def total_degree_start(degrees):
    """Start system and its full list of solutions (roots-of-unity grid)."""
    start = _TotalDegreeStart(degrees)
    grids = [
        [cmath.exp(2j * cmath.pi * k / d) for k in range(d)] for d in degrees
    ]
    sols = [[]]
    for g in grids:
        sols = [s + [root] for s in sols for root in g]
    return start, [np.array(s, dtype=complex) for s in sols]


def _correct(hom, z, t, settings, iters):
    """Newton corrector at fixed t; returns (z, ok)."""
    for _ in range(iters):
        vals, jac = hom.value_jac(z, t)
        res = float(np.linalg.norm(vals))
        if res <= settings.corrector_tol * max(1.0, float(np.linalg.norm(z))):
            return z, True
        try:
            step = np.linalg.solve(jac, vals)
        except np.linalg.LinAlgError:
            return z, False
        if not np.all(np.isfinite(step)):
            return z, False
        z = z - step
    vals, _ = hom.value_jac(z, t)
    res = float(np.linalg.norm(vals))
    return z, res <= settings.corrector_tol * max(1.0, float(np.linalg.norm(z)))


def _tangent(hom, z, t):
    _, jac, ht = hom.value_jac_t(z, t)
    return -np.linalg.solve(jac, ht)


def track_path(hom, z0, settings=TrackSettings(), start_index=0, near_point=None):
    """Track one path of the homotopy from t = 0 to t = 1.

    near_point: optional complex vector; paths that end close to it (the
    prescribed double point of a forged instance) are reported
    truncated-near-singularity rather than converged.
    """
    z = np.asarray(z0, dtype=complex).copy()
    t = 0.0
    h = settings.initial_step
    successes = 0
    while t < 1.0:
        h = min(h, 1.0 - t)
        try:
            k1 = _tangent(hom, z, t)
            k2 = _tangent(hom, z + 0.5 * h * k1, t + 0.5 * h)
            k3 = _tangent(hom, z + 0.5 * h * k2, t + 0.5 * h)
            k4 = _tangent(hom, z + h * k3, t + h)
            pred = z + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            ok = np.all(np.isfinite(pred))
        except np.linalg.LinAlgError:
            ok = False
            pred = z
        if ok:
            pred, ok = _correct(hom, pred, t + h, settings, settings.max_newton)
        if ok:
            z = pred
            t = t + h
            successes += 1
            if successes >= 5:
                h = min(h * 2.0, settings.initial_step * 4)
                successes = 0
            if float(np.max(np.abs(z))) > settings.divergence_norm:
                return PathResult(start_index, None, "diverged")
        else:
            successes = 0
            h *= 0.5
            if h < settings.min_step:
                if (
                    near_point is not None
                    and t >= 0.99
                    and float(np.max(np.abs(z - near_point))) < 0.05
                ):
                    return PathResult(
                        start_index, z, "truncated-near-singularity"
                    )
                if float(np.max(np.abs(z))) > 1e4:
                    # blowing up too slowly to hit the divergence norm
                    return PathResult(start_index, None, "diverged")
                return PathResult(start_index, None, "failed")
    # polish at t = 1 against the target system
    target = hom.target
    if isinstance(target, CompiledSystem):
        z, ok, _ = newton_refine(target, z, tol=settings.endpoint_tol)
    else:
        z, ok = _correct(hom, z, 1.0, settings, 10)
    if near_point is not None and float(np.max(np.abs(z - near_point))) < 1e-4:
        return PathResult(start_index, z, "truncated-near-singularity")
    if not ok:
        return PathResult(start_index, None, "failed")
    return PathResult(start_index, z, "converged")


def dedup_points(points, tol):
    """Cluster representatives of a point list; two points are duplicates
    when their max-norm distance is below tol relative to their size, so
    large-norm zeros keep the same effective resolution as small ones."""
    reps = []
    for p in points:
        if not any(
            float(np.max(np.abs(p - r)))
            <= tol * max(1.0, float(np.max(np.abs(r))))
            for r in reps
        ):
            reps.append(p)
    return reps


def _pool_track(args):
    hom, z0, settings, i, near_point = args
    return track_path(hom, z0, settings, i, near_point)


def solve_total_degree(
    G, settings=TrackSettings(), seed=0, near_point=None, threads=1
):
    """Track every total-degree start solution to the target system.

    Returns (results, endpoints): one PathResult per path (ordered by start
    index) and the deduplicated list of converged endpoints.  threads > 1
    distributes paths over worker processes; results are aggregated by
    start index, so the outcome is independent of the worker count.
    """
    S = G if isinstance(G, CompiledSystem) else compile_system(G)
    rng = random.Random(derive_seed("gamma", seed))
    gamma = cmath.exp(2j * cmath.pi * rng.random())
    start, starts = total_degree_start(S.degrees)
    hom = LinearHomotopy(start, S, gamma)
    if threads > 1 and len(starts) > 8:
        import multiprocessing

        jobs = [
            (hom, z0, settings, i, near_point) for i, z0 in enumerate(starts)
        ]
        with multiprocessing.Pool(threads) as pool:
            results = pool.map(_pool_track, jobs, chunksize=16)
    else:
        results = [
            track_path(hom, z0, settings, i, near_point)
            for i, z0 in enumerate(starts)
        ]
    converged = [r.endpoint for r in results if r.status == "converged"]
    return results, dedup_points(converged, settings.dedup_tol)


def solve_with_retries(
    G,
    expected,
    settings=TrackSettings(),
    seed=0,
    near_point=None,
    threads=1,
    max_attempts=4,
):
    """Accumulate endpoints over fresh random gammas until `expected` many
    distinct zeros are found (or attempts run out).

    An unlucky gamma occasionally loses a path; since certified distinct
    endpoints are gamma-independent, the union over runs is still a set of
    zeros of the target.  Returns (results_of_last_run, endpoints).
    """
    S = G if isinstance(G, CompiledSystem) else compile_system(G)
    endpoints = []
    results = []
    for attempt in range(max_attempts):
        results, found = solve_total_degree(
            S, settings, seed=(seed, attempt), near_point=near_point, threads=threads
        )
        endpoints = dedup_points(endpoints + found, settings.dedup_tol)
        if len(endpoints) >= expected:
            break
    return results, endpoints


def track_segment(S_from, S_to, points, settings=TrackSettings()):
    """Transport zeros of S_from to zeros of S_to along the straight segment
    (1-t) S_from + t S_to.  Returns the endpoint list, or None if any path
    fails (monodromy needs every path)."""
    hom = LinearHomotopy(S_from, S_to, 1.0)
    out = []
    for i, p in enumerate(points):
        r = track_path(hom, p, settings, i)
        if r.status != "converged":
            return None
        out.append(r.endpoint)
    return out
