"""Floating-point shadow of a SquareSystem.

A CompiledSystem packs the terms of all equations into flat arrays consumed
by the evaluation kernels (compiled or pure fallback): midpoint complex
coefficients for plain float evaluation, and directed interval enclosures
of the exact rational coefficients for interval evaluation — so interval
results are valid for the exact system, not merely its float image.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from ._backend import kernels
from .intervals import ComplexBox, ComplexInterval, RealInterval

__all__ = ["CompiledSystem", "compile_system", "newton_refine", "residual_scale"]


def _frac_bounds(q: Fraction):
    """Tightest float lower/upper bounds of an exact rational."""
    f = float(q)
    lo = hi = f
    qf = Fraction(f)
    if qf > q:
        lo = math.nextafter(f, -math.inf)
    elif qf < q:
        hi = math.nextafter(f, math.inf)
    return lo, hi


class CompiledSystem:
    """Flat-array form of a square polynomial system.

    Attributes (all read-only after construction):
      nvars            number of variables / equations
      rowptr           term range of equation i is rowptr[i]:rowptr[i+1]
      dense_exponents  (terms x nvars) exponent matrix
      tptr/fvar/fexp   sparse factor lists per term (for interval evaluation)
      cmid             complex midpoint coefficients
      coeff_bounds     (crl, crh, cil, cih) interval coefficient enclosures
      degrees          total degree of each equation
    """

    def __init__(self, nvars, rowptr, exponents, coeffs):
        self.nvars = nvars
        self.rowptr = np.asarray(rowptr, dtype=np.int64)
        T = len(exponents)
        self.dense_exponents = np.array(exponents, dtype=np.int64).reshape(T, nvars)
        tptr = [0]
        fvar = []
        fexp = []
        for mono in exponents:
            for j, e in enumerate(mono):
                if e:
                    fvar.append(j)
                    fexp.append(e)
            tptr.append(len(fvar))
        self.tptr = np.asarray(tptr, dtype=np.int64)
        self.fvar = np.asarray(fvar, dtype=np.int64)
        self.fexp = np.asarray(fexp, dtype=np.int64)
        self.cmid = np.array([complex(c.re, c.im) for c in coeffs], dtype=complex)
        crl = np.empty(T)
        crh = np.empty(T)
        cil = np.empty(T)
        cih = np.empty(T)
        for k, c in enumerate(coeffs):
            crl[k], crh[k] = _frac_bounds(c.re)
            cil[k], cih[k] = _frac_bounds(c.im)
        self.coeff_bounds = (crl, crh, cil, cih)
        self.coeff_exact = tuple((c.re, c.im) for c in coeffs)
        degs = []
        for i in range(len(rowptr) - 1):
            span = exponents[rowptr[i] : rowptr[i + 1]]
            degs.append(max((sum(m) for m in span), default=0))
        self.degrees = tuple(degs)

    # -- evaluation ---------------------------------------------------

    def value_jac(self, z):
        """Float values and Jacobian at a complex point (numpy arrays)."""
        z = np.asarray(z, dtype=complex)
        return kernels.eval_sys_jac(self, z)

    def value(self, z):
        return self.value_jac(z)[0]

    def value_enclosure(self, z):
        """One-ulp interval enclosures of the exact system at an exact point.

        The coordinates of z, being floats, are exact rationals; each
        equation is evaluated in exact rational arithmetic and the exact
        value enclosed in the tightest float interval.  This sidesteps the
        eps * magnitude width floor of interval evaluation, which matters
        for ill-conditioned zeros where that floor exceeds the error of z.
        """
        zr = [Fraction(float(complex(w).real)) for w in z]
        zi = [Fraction(float(complex(w).imag)) for w in z]
        out = []
        for i in range(self.nvars):
            ar = Fraction(0)
            ai = Fraction(0)
            for t in range(int(self.rowptr[i]), int(self.rowptr[i + 1])):
                tr, ti = self.coeff_exact[t]
                for f in range(int(self.tptr[t]), int(self.tptr[t + 1])):
                    j = int(self.fvar[f])
                    for _ in range(int(self.fexp[f])):
                        tr, ti = tr * zr[j] - ti * zi[j], tr * zi[j] + ti * zr[j]
                ar += tr
                ai += ti
            out.append(
                ComplexInterval(RealInterval.enclosing(ar), RealInterval.enclosing(ai))
            )
        return out

    def value_jac_box(self, box: ComplexBox, want_jac=True):
        """Interval enclosures over a box, valid for the exact system.

        Returns (vals, jac): a list of ComplexInterval and a nested list
        (or None) of ComplexInterval Jacobian entries.
        """
        n = self.nvars
        rl = np.array([box[j].re.lo for j in range(n)])
        rh = np.array([box[j].re.hi for j in range(n)])
        il = np.array([box[j].im.lo for j in range(n)])
        ih = np.array([box[j].im.hi for j in range(n)])
        v, j = kernels.eval_sys_jac_box(self, rl, rh, il, ih, want_jac)
        vals = [ComplexInterval.from_tuple(v[i]) for i in range(len(v))]
        jac = None
        if want_jac:
            jac = [
                [ComplexInterval.from_tuple(j[i, k]) for k in range(n)]
                for i in range(len(v))
            ]
        return vals, jac


def compile_system(G) -> CompiledSystem:
    """Flatten a SquareSystem (exact coefficients) into a CompiledSystem."""
    rowptr = [0]
    exponents = []
    coeffs = []
    for g in G.polys:
        for mono in g.sorted_monomials():
            exponents.append(mono)
            coeffs.append(g.terms[mono])
        rowptr.append(len(exponents))
    return CompiledSystem(G.num_vars, rowptr, exponents, coeffs)


def residual_scale(S: CompiledSystem, x):
    """Magnitude of the evaluation of S at x with all cancellation removed:
    the norm of the vector (sum_k |c_k| * |x|^mono_k)_i.

    Rounding alone makes residuals of size roughly eps * scale unavoidable,
    so "the residual is zero to working precision" means small relative to
    this quantity, not relative to |x|.
    """
    ax = np.abs(np.asarray(x, dtype=complex))
    mags = np.abs(S.cmid) * np.prod(ax[None, :] ** S.dense_exponents, axis=1)
    rows = np.add.reduceat(mags, S.rowptr[:-1])
    return float(np.linalg.norm(rows))


def newton_refine(S: CompiledSystem, x0, max_iter=20, tol=1e-13):
    """Newton iteration on the compiled system.

    Returns (x, converged, residual).  Convergence requires the residual to
    fall below tol * max(1, residual_scale(S, x)), the attainable
    backward-error level at x; a singular linear solve fails the refine.
    """
    x = np.asarray(x0, dtype=complex).copy()
    converged = False
    res = math.inf
    for _ in range(max_iter):
        vals, jac = S.value_jac(x)
        res = float(np.linalg.norm(vals))
        if res <= tol * max(1.0, residual_scale(S, x)):
            converged = True
            break
        try:
            step = np.linalg.solve(jac, vals)
        except np.linalg.LinAlgError:
            return x, False, res
        if not np.all(np.isfinite(step)):
            return x, False, res
        x = x - step
    else:
        vals, _ = S.value_jac(x)
        res = float(np.linalg.norm(vals))
        converged = res <= tol * max(1.0, residual_scale(S, x))
    return x, converged, res
