"""Pure-Python/numpy fallback kernels.

Semantics match the compiled kernels in _kernels.pyx; the compiled module
is preferred at import time by fano._backend when available.
"""

import itertools

import numpy as np

from . import _ia

NAME = "python"


def eval_sys_jac(sysdata, z):
    """Values and Jacobian of all polynomials at a complex point.

    sysdata carries a dense exponent matrix E (terms x vars) and per-term
    complex coefficients; rowptr delimits the terms of each polynomial.
    """
    E = sysdata.dense_exponents
    coeff = sysdata.cmid
    rowptr = sysdata.rowptr
    npolys = len(rowptr) - 1
    nv = sysdata.nvars
    P = np.where(E > 0, z[None, :], 1.0) ** E  # (T, nv)
    mono = P.prod(axis=1)
    w = coeff * mono
    grad = w[:, None] * E  # still needs division by z_j
    zero_cols = np.nonzero(z == 0)[0]
    safe_z = np.where(z == 0, 1.0, z)
    grad = grad / safe_z[None, :]
    for j in zero_cols:
        # d/dz_j of a term vanishes at z_j = 0 unless the exponent is 1
        col = np.zeros(len(coeff), dtype=complex)
        ones = E[:, j] == 1
        if ones.any():
            rest = np.delete(P, j, axis=1).prod(axis=1)
            col[ones] = coeff[ones] * rest[ones]
        grad[:, j] = col
    vals = np.zeros(npolys, dtype=complex)
    jac = np.zeros((npolys, nv), dtype=complex)
    for i in range(npolys):
        lo, hi = rowptr[i], rowptr[i + 1]
        if hi > lo:
            vals[i] = w[lo:hi].sum()
            jac[i] = grad[lo:hi].sum(axis=0)
    return vals, jac


def _term_monomial_and_partials(sysdata, t, box, want_partials):
    """Complex interval value of term t's monomial over the box, plus the
    interval partial monomials d(monomial)/dz_j for its variables."""
    tptr, fvar, fexp = sysdata.tptr, sysdata.fvar, sysdata.fexp
    lo, hi = tptr[t], tptr[t + 1]
    factors = [(_ia.cpow(box[fvar[k]], fexp[k]), fvar[k], fexp[k]) for k in range(lo, hi)]
    mono = ((1.0, 1.0), (0.0, 0.0))
    for f, _, _ in factors:
        mono = _ia.cmul(mono, f)
    partials = []
    if want_partials:
        for idx, (_, var, e) in enumerate(factors):
            rest = ((1.0, 1.0), (0.0, 0.0))
            for jdx, (f, _, _) in enumerate(factors):
                if jdx != idx:
                    rest = _ia.cmul(rest, f)
            d = _ia.cmul(rest, _ia.cpow(box[var], e - 1))
            partials.append((var, _ia.cscale(d, e)))
    return mono, partials


def eval_sys_jac_box(sysdata, rl, rh, il, ih, want_jac=True):
    """Interval enclosures of values (and optionally Jacobian entries) over
    a box.  Returns float arrays of shape (npolys, 4) and (npolys, nvars, 4)
    with components [rlo, rhi, ilo, ihi]; jac is None when not requested.

    Coefficients enter as intervals enclosing the exact rational
    coefficients, so the enclosure is valid for the exact system.
    """
    rowptr = sysdata.rowptr
    npolys = len(rowptr) - 1
    nv = sysdata.nvars
    box = [((rl[j], rh[j]), (il[j], ih[j])) for j in range(nv)]
    crl, crh, cil, cih = sysdata.coeff_bounds
    vals = np.zeros((npolys, 4))
    jac_iv = [[_ia.CZERO] * nv for _ in range(npolys)] if want_jac else None
    for i in range(npolys):
        acc = _ia.CZERO
        for t in range(rowptr[i], rowptr[i + 1]):
            c = ((crl[t], crh[t]), (cil[t], cih[t]))
            mono, partials = _term_monomial_and_partials(sysdata, t, box, want_jac)
            acc = _ia.cadd(acc, _ia.cmul(c, mono))
            if want_jac:
                for var, d in partials:
                    jac_iv[i][var] = _ia.cadd(jac_iv[i][var], _ia.cmul(c, d))
        vals[i] = (acc[0][0], acc[0][1], acc[1][0], acc[1][1])
    jac = None
    if want_jac:
        jac = np.zeros((npolys, nv, 4))
        for i in range(npolys):
            for j in range(nv):
                ((a, b), (cc, d)) = jac_iv[i][j]
                jac[i, j] = (a, b, cc, d)
    return vals, jac


def _det_mod(mat, p):
    """Determinant mod p by division-free elimination (one inversion)."""
    a = [row[:] for row in mat]
    k = len(a)
    sign = 1
    scale = 1  # accumulated factor the raw product must be divided by
    for col in range(k - 1):
        piv = None
        for i in range(col, k):
            if a[i][col] % p:
                piv = i
                break
        if piv is None:
            return 0
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            sign = -sign
        pv = a[col][col] % p
        for i in range(col + 1, k):
            f = a[i][col] % p
            if f:
                for j in range(col, k):
                    a[i][j] = (a[i][j] * pv - f * a[col][j]) % p
            else:
                for j in range(col, k):
                    a[i][j] = (a[i][j] * pv) % p
            scale = (scale * pv) % p
    det = sign
    for i in range(k):
        det = (det * a[i][i]) % p
    return (det * pow(scale, -1, p)) % p


def degree_subset_sum_mod(mu, forms, n, m, p):
    """The finite-difference coefficient sum mod p, grouped over value
    subsets (see problems.fano_degree)."""
    from math import comb

    k = len(mu)
    binom = [[comb(a, b) % p for b in range(n + 1)] for a in range(n + 1)]
    total = 0
    for subset in itertools.combinations(range(1, n + 1), k):
        vals = subset[::-1]
        w = 1
        for a in forms:
            s = 0
            for ai, vi in zip(a, vals):
                if ai:
                    s += ai * vi
            w = (w * s) % p
        for i in range(k):
            for j in range(i + 1, k):
                w = (w * (vals[i] - vals[j])) % p
        det = _det_mod([[binom[mi][v] for v in vals] for mi in mu], p)
        if det == 0:
            continue
        term = (w * det) % p
        if (m - sum(vals)) % 2:
            total = (total - term) % p
        else:
            total = (total + term) % p
    return total % p
