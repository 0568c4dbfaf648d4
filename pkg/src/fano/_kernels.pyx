# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: point/interval system evaluation and the modular
degree subset sum.  Semantics match fano._kernels_py exactly; see that
module for the reference implementations and the interval soundness rule
(one-ulp outward widening after every round-to-nearest operation)."""

import numpy as np

cimport numpy as cnp
from libc.math cimport nextafter, INFINITY

cnp.import_array()

NAME = "compiled"

cdef extern from *:
    ctypedef unsigned long long u128 "unsigned __int128"

ctypedef unsigned long long u64
ctypedef long long i64


# ---------------------------------------------------------------- point eval

def eval_sys_jac(sysdata, z):
    """Values and Jacobian of all polynomials at a complex point."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] zz = np.ascontiguousarray(z, dtype=complex)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] rowptr = np.ascontiguousarray(sysdata.rowptr, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] tptr = np.ascontiguousarray(sysdata.tptr, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] fvar = np.ascontiguousarray(sysdata.fvar, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] fexp = np.ascontiguousarray(sysdata.fexp, dtype=np.int64)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] cmid = np.ascontiguousarray(sysdata.cmid, dtype=complex)
    cdef int npolys = rowptr.shape[0] - 1
    cdef int nv = sysdata.nvars
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] vals = np.zeros(npolys, dtype=complex)
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] jac = np.zeros((npolys, nv), dtype=complex)
    cdef double complex pw[32]
    cdef double complex mono, rest, c
    cdef Py_ssize_t i, t, k, lo, hi, idx, j
    cdef i64 e
    for i in range(npolys):
        for t in range(rowptr[i], rowptr[i + 1]):
            lo = tptr[t]
            hi = tptr[t + 1]
            c = cmid[t]
            mono = c
            for k in range(lo, hi):
                pw[k - lo] = zz[fvar[k]] ** fexp[k]
                mono = mono * pw[k - lo]
            vals[i] = vals[i] + mono
            for idx in range(lo, hi):
                e = fexp[idx]
                if e == 1:
                    # z ** 0 == 1 even at z == 0, where complex pow NaNs
                    rest = c
                else:
                    rest = c * e * zz[fvar[idx]] ** (e - 1)
                for j in range(lo, hi):
                    if j != idx:
                        rest = rest * pw[j - lo]
                jac[i, fvar[idx]] = jac[i, fvar[idx]] + rest
    return vals, jac


# ------------------------------------------------------------- interval eval

cdef struct CI:
    double rl
    double rh
    double il
    double ih

cdef inline double dn(double x) nogil:
    return nextafter(x, -INFINITY)

cdef inline double up(double x) nogil:
    return nextafter(x, INFINITY)

cdef inline void imul(double al, double ah, double bl, double bh,
                      double *ol, double *oh) nogil:
    cdef double p0 = al * bl
    cdef double p1 = al * bh
    cdef double p2 = ah * bl
    cdef double p3 = ah * bh
    cdef double mn = p0
    cdef double mx = p0
    if p1 < mn: mn = p1
    if p2 < mn: mn = p2
    if p3 < mn: mn = p3
    if p1 > mx: mx = p1
    if p2 > mx: mx = p2
    if p3 > mx: mx = p3
    ol[0] = dn(mn)
    oh[0] = up(mx)

cdef inline CI cmul(CI x, CI y) nogil:
    cdef CI out
    cdef double acl, ach, bdl, bdh, adl, adh, bcl, bch
    imul(x.rl, x.rh, y.rl, y.rh, &acl, &ach)
    imul(x.il, x.ih, y.il, y.ih, &bdl, &bdh)
    imul(x.rl, x.rh, y.il, y.ih, &adl, &adh)
    imul(x.il, x.ih, y.rl, y.rh, &bcl, &bch)
    out.rl = dn(acl - bdh)
    out.rh = up(ach - bdl)
    out.il = dn(adl + bcl)
    out.ih = up(adh + bch)
    return out

cdef inline CI cadd(CI x, CI y) nogil:
    cdef CI out
    out.rl = dn(x.rl + y.rl)
    out.rh = up(x.rh + y.rh)
    out.il = dn(x.il + y.il)
    out.ih = up(x.ih + y.ih)
    return out

cdef inline CI cscale(CI x, double k) nogil:
    # k an exact small integer as double
    cdef CI out
    imul(x.rl, x.rh, k, k, &out.rl, &out.rh)
    imul(x.il, x.ih, k, k, &out.il, &out.ih)
    return out

cdef inline CI cone() nogil:
    cdef CI out
    out.rl = 1.0
    out.rh = 1.0
    out.il = 0.0
    out.ih = 0.0
    return out

cdef inline CI cpow(CI x, i64 e) nogil:
    cdef CI out = cone()
    cdef i64 q
    for q in range(e):
        out = cmul(out, x)
    return out


def eval_sys_jac_box(sysdata, rl, rh, il, ih, want_jac=True):
    """Interval enclosures over a box; returns float arrays (npolys, 4) and
    (npolys, nvars, 4) with components [rlo, rhi, ilo, ihi]."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] brl = np.ascontiguousarray(rl, dtype=float)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] brh = np.ascontiguousarray(rh, dtype=float)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] bil = np.ascontiguousarray(il, dtype=float)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] bih = np.ascontiguousarray(ih, dtype=float)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] rowptr = np.ascontiguousarray(sysdata.rowptr, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] tptr = np.ascontiguousarray(sysdata.tptr, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] fvar = np.ascontiguousarray(sysdata.fvar, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] fexp = np.ascontiguousarray(sysdata.fexp, dtype=np.int64)
    crl_o, crh_o, cil_o, cih_o = sysdata.coeff_bounds
    cdef cnp.ndarray[cnp.float64_t, ndim=1] crl = np.ascontiguousarray(crl_o, dtype=float)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] crh = np.ascontiguousarray(crh_o, dtype=float)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] cil = np.ascontiguousarray(cil_o, dtype=float)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] cih = np.ascontiguousarray(cih_o, dtype=float)
    cdef int npolys = rowptr.shape[0] - 1
    cdef int nv = sysdata.nvars
    cdef bint wj = bool(want_jac)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] vals = np.zeros((npolys, 4))
    cdef cnp.ndarray[cnp.float64_t, ndim=3] jac
    if wj:
        jac = np.zeros((npolys, nv, 4))
    else:
        jac = np.zeros((1, 1, 4))
    cdef CI fac[32]
    cdef CI c, mono, rest, d
    cdef CI acc
    cdef Py_ssize_t i, t, k, lo, hi, idx, j, var
    cdef i64 e
    for i in range(npolys):
        acc.rl = acc.rh = acc.il = acc.ih = 0.0
        for t in range(rowptr[i], rowptr[i + 1]):
            c.rl = crl[t]; c.rh = crh[t]; c.il = cil[t]; c.ih = cih[t]
            lo = tptr[t]
            hi = tptr[t + 1]
            # operation order mirrors _kernels_py exactly, so both backends
            # produce bit-identical enclosures
            mono = cone()
            for k in range(lo, hi):
                var = fvar[k]
                d.rl = brl[var]; d.rh = brh[var]; d.il = bil[var]; d.ih = bih[var]
                fac[k - lo] = cpow(d, fexp[k])
                mono = cmul(mono, fac[k - lo])
            acc = cadd(acc, cmul(c, mono))
            if wj:
                for idx in range(lo, hi):
                    var = fvar[idx]
                    e = fexp[idx]
                    rest = cone()
                    for j in range(lo, hi):
                        if j != idx:
                            rest = cmul(rest, fac[j - lo])
                    d.rl = brl[var]; d.rh = brh[var]; d.il = bil[var]; d.ih = bih[var]
                    rest = cmul(rest, cpow(d, e - 1))
                    rest = cscale(rest, <double> e)
                    rest = cmul(c, rest)
                    jac[i, var, 0] = dn(jac[i, var, 0] + rest.rl)
                    jac[i, var, 1] = up(jac[i, var, 1] + rest.rh)
                    jac[i, var, 2] = dn(jac[i, var, 2] + rest.il)
                    jac[i, var, 3] = up(jac[i, var, 3] + rest.ih)
        vals[i, 0] = acc.rl
        vals[i, 1] = acc.rh
        vals[i, 2] = acc.il
        vals[i, 3] = acc.ih
    if wj:
        return vals, jac
    return vals, None


# ----------------------------------------------------------- modular degree

cdef inline u64 mulmod(u64 a, u64 b, u64 p) nogil:
    return <u64> ((<u128> a * b) % p)

cdef inline u64 barrett_magic(u64 p) nogil:
    # Barrett constant for p < 2^31: floor(2^62 / p); 0 disables the
    # fast path (fall back to the 128-bit division)
    if p < (<u64> 1 << 31):
        return (<u64> 1 << 62) / p
    return 0

cdef inline u64 mulmod2(u64 a, u64 b, u64 p, u64 magic) nogil:
    """a * b mod p for reduced a, b; division-free when magic != 0."""
    cdef u64 t, q, r
    if magic:
        t = a * b  # < 2^62 since a, b < p < 2^31
        q = <u64> ((<u128> t * magic) >> 62)
        r = t - q * p  # in [0, 3p)
        while r >= p:
            r -= p
        return r
    return <u64> ((<u128> a * b) % p)

cdef inline u64 powmod(u64 a, u64 e, u64 p) nogil:
    cdef u64 out = 1
    cdef u64 magic = barrett_magic(p)
    a = a % p
    while e:
        if e & 1:
            out = mulmod2(out, a, p, magic)
        a = mulmod2(a, a, p, magic)
        e >>= 1
    return out

cdef u64 det_mod(u64 *a, int k, u64 p) nogil:
    """Determinant mod p of a k x k buffer (destroyed), division-free
    elimination with a single inversion at the end."""
    cdef int col, i, j, piv
    cdef u64 pv, f, t1, t2
    cdef int sign = 0
    cdef u64 scale = 1
    cdef u64 det = 1
    cdef u64 magic = barrett_magic(p)
    for col in range(k - 1):
        piv = -1
        for i in range(col, k):
            if a[i * k + col] % p != 0:
                piv = i
                break
        if piv < 0:
            return 0
        if piv != col:
            for j in range(k):
                t1 = a[col * k + j]
                a[col * k + j] = a[piv * k + j]
                a[piv * k + j] = t1
            sign ^= 1
        pv = a[col * k + col] % p
        for i in range(col + 1, k):
            f = a[i * k + col] % p
            for j in range(col, k):
                t1 = mulmod2(a[i * k + j], pv, p, magic)
                if f:
                    t2 = mulmod2(f, a[col * k + j], p, magic)
                    a[i * k + j] = (t1 + p - t2) % p
                else:
                    a[i * k + j] = t1
            scale = mulmod2(scale, pv, p, magic)
    for i in range(k):
        det = mulmod2(det, a[i * k + i] % p, p, magic)
    det = mulmod2(det, powmod(scale, p - 2, p), p, magic)
    if sign:
        det = (p - det) % p
    return det


def degree_subset_sum_mod(mu, forms, n, m, p):
    """The finite-difference coefficient sum mod p, grouped over value
    subsets; see problems.fano_degree and the pure reference kernel."""
    from math import comb

    cdef int k = len(mu)
    cdef int nn = n
    cdef int mm = m
    cdef u64 pp = p
    if k > 32:
        raise ValueError("subspace dimension too large for the kernel")
    cdef cnp.ndarray[cnp.int64_t, ndim=1] mu_a = np.array(mu, dtype=np.int64)
    # sparse form data: nonzero (index, coefficient) pairs per linear form
    fptr_l = [0]
    fidx_l = []
    fco_l = []
    for a in forms:
        for j, aj in enumerate(a):
            if aj:
                fidx_l.append(j)
                fco_l.append(aj)
        fptr_l.append(len(fidx_l))
    cdef cnp.ndarray[cnp.int64_t, ndim=1] fptr = np.array(fptr_l, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] fidx = np.array(fidx_l, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] fco = np.array(fco_l, dtype=np.int64)
    cdef int F = len(forms)
    cdef cnp.ndarray[cnp.uint64_t, ndim=2] binom = np.zeros((nn + 1, nn + 1), dtype=np.uint64)
    cdef int i, j2
    for i in range(nn + 1):
        for j2 in range(nn + 1):
            binom[i, j2] = comb(i, j2) % p
    cdef cnp.ndarray[cnp.int64_t, ndim=1] c_a = np.arange(1, k + 1, dtype=np.int64)
    cdef i64 *c = <i64 *> c_a.data
    cdef cnp.ndarray[cnp.int64_t, ndim=1] vals_a = np.zeros(k, dtype=np.int64)
    cdef i64 *vals = <i64 *> vals_a.data
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] mat_a = np.zeros(k * k, dtype=np.uint64)
    cdef u64 *mat = <u64 *> mat_a.data
    cdef i64 *mu_p = <i64 *> mu_a.data
    cdef i64 *fptr_p = <i64 *> fptr.data
    cdef i64 *fidx_p = <i64 *> fidx.data
    cdef i64 *fco_p = <i64 *> fco.data
    cdef u64 total = 0
    cdef u64 w, det, term
    cdef i64 s, vsum
    cdef int fi, q, ii, jj, pos
    cdef bint done = 0
    cdef u64 magic = barrett_magic(pp)
    # form values s = a . vals are bounded by n * (row sum); when every
    # coefficient is non-negative and that bound stays below p, the i64
    # remainder per form can be skipped entirely
    cdef bint s_reduced = all(
        aj >= 0 for a in forms for aj in a
    ) and max(
        (sum(a) for a in forms), default=0
    ) * nn < <i64> pp
    with nogil:
        while not done:
            # vals: subset in descending order
            vsum = 0
            for ii in range(k):
                vals[ii] = c[k - 1 - ii]
                vsum += vals[ii]
            w = 1
            for fi in range(F):
                s = 0
                for q in range(fptr_p[fi], fptr_p[fi + 1]):
                    s += fco_p[q] * vals[fidx_p[q]]
                if s_reduced:
                    w = mulmod2(w, <u64> s, pp, magic)
                else:
                    s = s % <i64> pp
                    if s < 0:
                        s += <i64> pp
                    w = mulmod2(w, <u64> s, pp, magic)
                if w == 0:
                    break
            if w != 0:
                for ii in range(k):
                    for jj in range(ii + 1, k):
                        w = mulmod2(w, <u64> (vals[ii] - vals[jj]), pp, magic)
                for ii in range(k):
                    for jj in range(k):
                        mat[ii * k + jj] = binom[mu_p[ii], vals[jj]]
                det = det_mod(mat, k, pp)
                if det != 0:
                    term = mulmod2(w, det, pp, magic)
                    if (mm - vsum) & 1:
                        total = (total + pp - term) % pp
                    else:
                        total = (total + term) % pp
            # next combination of {1..n} choose k (ascending buffer c)
            pos = k - 1
            while pos >= 0 and c[pos] == nn - (k - 1 - pos):
                pos -= 1
            if pos < 0:
                done = 1
            else:
                c[pos] += 1
                for ii in range(pos + 1, k):
                    c[ii] = c[ii - 1] + 1
    return int(total)
