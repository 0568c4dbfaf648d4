"""Combinatorics of Fano problems: expected dimension, exact degrees,
lower bounds and enumeration under a degree cap.

The degree of the problem (r, n, d_bullet) is the coefficient of
x0^n x1^(n-1) ... xr^(n-r) in Q_{r,d_bullet}(x) * V(x), where Q_{r,d} is the
product of the linear forms a0*x0+...+ar*xr over all non-negative integer
tuples with a0+...+ar = d and V is the Vandermonde product.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial, prod

from .exact import GQ_ONE, SparsePoly


@dataclass(frozen=True)
class FanoType:
    """Combinatorial datum (r, n, d_bullet) of a Fano problem.

    Degrees are stored sorted ascending so that permutations of d_bullet
    give the same type.
    """

    r: int
    n: int
    degrees: tuple

    def __post_init__(self):
        object.__setattr__(self, "degrees", tuple(sorted(self.degrees)))
        if self.r < 1:
            raise ValueError("plane dimension r must be >= 1")
        if not self.degrees:
            raise ValueError("need at least one hypersurface degree")
        if any(d < 2 for d in self.degrees):
            raise ValueError("all degrees must be >= 2")
        if 2 * self.r > self.n - len(self.degrees):
            raise ValueError("need 2r <= n - s for a smooth complete intersection")

    @property
    def s(self):
        return len(self.degrees)

    @property
    def num_chart_vars(self):
        return (self.n - self.r) * (self.r + 1)

    def label(self):
        return f"({self.r}, {self.n}, ({', '.join(map(str, self.degrees))}))"


@dataclass(frozen=True)
class FanoProblem:
    """A zero-dimensional Fano type together with its exact degree."""

    fano_type: FanoType
    degree: int


def delta(t: FanoType) -> int:
    """Expected dimension (r+1)(n-r) - sum_i C(d_i + r, r); may be negative."""
    r = t.r
    return (r + 1) * (t.n - r) - sum(comb(d + r, r) for d in t.degrees)


def _compositions(total, parts):
    """All tuples of `parts` non-negative integers summing to `total`."""
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest


def q_poly(r: int, d: int) -> SparsePoly:
    """Product of the linear forms a0*x0+...+ar*xr over all compositions of d."""
    if r < 0 or d < 1:
        raise ValueError("need r >= 0 and d >= 1")
    result = SparsePoly.constant(r + 1, GQ_ONE)
    for a in _compositions(d, r + 1):
        result = result * SparsePoly.linear_form([Fraction(ai) for ai in a])
    return result


def vandermonde(r: int) -> SparsePoly:
    """Product of (x_i - x_j) over 0 <= i < j <= r."""
    if r < 0:
        raise ValueError("need r >= 0")
    result = SparsePoly.constant(r + 1, GQ_ONE)
    for i in range(r + 1):
        for j in range(i + 1, r + 1):
            result = result * SparsePoly.linear_form(
                [1 if k == i else (-1 if k == j else 0) for k in range(r + 1)]
            )
    return result


def _int_det(m):
    """Exact determinant of a small integer matrix (fraction-free Bareiss)."""
    a = [row[:] for row in m]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _degree_data(t: FanoType):
    """(mu, forms, m) for the coefficient-extraction sum."""
    r, n = t.r, t.n
    mu = [n - k for k in range(r + 1)]
    forms = []
    for d in t.degrees:
        forms.extend(_compositions(d, r + 1))
    m = len(forms) + r * (r + 1) // 2
    return mu, forms, m


def _subset_count(t: FanoType) -> int:
    return comb(t.n, t.r + 1)


def _degree_numerator_exact(t: FanoType) -> int:
    """Exact integer numerator of the finite-difference sum (see fano_degree)."""
    r, n = t.r, t.n
    mu, forms, m = _degree_data(t)
    total = 0
    # every Q_{r,d} contains the pure factors d*x_i, so points with a zero
    # coordinate contribute nothing; values range over (r+1)-subsets of 1..n
    for subset in itertools.combinations(range(1, n + 1), r + 1):
        vals = subset[::-1]  # descending, matching mu
        w = 1
        for a in forms:
            w *= sum(ai * vi for ai, vi in zip(a, vals))
        for i in range(r + 1):
            for j in range(i + 1, r + 1):
                w *= vals[i] - vals[j]
        det = _int_det([[comb(mi, v) for v in vals] for mi in mu])
        if det == 0:
            continue
        total += (-1) ** (m - sum(vals)) * w * det
    return total


def _degree_mod(t: FanoType, p: int) -> int:
    """The degree reduced modulo a prime p, via the backend kernel."""
    from ._backend import kernels

    mu, forms, m = _degree_data(t)
    denom = prod(factorial(x) for x in mu) % p
    numerator = kernels.degree_subset_sum_mod(mu, forms, t.n, m, p)
    return (numerator * pow(denom, -1, p)) % p


def bezout_bound(t: FanoType) -> int:
    """Product of the equation degrees of the square system: an upper bound
    on the number of isolated zeros, hence on the degree."""
    r = t.r
    return prod(d ** comb(d + r, r) for d in t.degrees)


# fixed deterministic primes for the modular degree path
_PRIMES: list = []


def _prime(i: int) -> int:
    import sympy

    while len(_PRIMES) <= i:
        _PRIMES.append(
            sympy.prevprime(_PRIMES[-1]) if _PRIMES else sympy.prevprime(2**62)
        )
    return _PRIMES[i]


# below this many value subsets the exact big-integer sum is cheap
_EXACT_SUBSET_LIMIT = 20_000

# a 31-bit prime for cheap residue screening (u64 fast path in the kernel)
_SCREEN_PRIME = 2**31 - 1


def _degree_exact_small(t: FanoType) -> int:
    mu, _, _ = _degree_data(t)
    denom = prod(factorial(x) for x in mu)
    deg, rem = divmod(_degree_numerator_exact(t), denom)
    if rem != 0:
        raise AssertionError("degree extraction did not divide exactly")
    if deg <= 0:
        raise AssertionError(f"non-positive degree for {t.label()}")
    return deg


def _degree_by_crt(t: FanoType, stop_at=None):
    """Reconstruct the degree from residues modulo fixed 62-bit primes.

    Residues are accumulated until their combined modulus exceeds the
    Bezout-type upper bound, which pins the degree exactly.  When `stop_at`
    is given and some residue is >= stop_at, the degree itself is >= stop_at
    (deg mod p <= deg) and None is returned immediately.
    """
    bound = bezout_bound(t)
    if stop_at is not None and stop_at <= _SCREEN_PRIME:
        # cheap screen: any residue >= stop_at proves deg >= stop_at
        if _degree_mod(t, _SCREEN_PRIME) >= stop_at:
            return None
    value, modulus = 0, 1
    i = 0
    while modulus <= bound:
        p = _prime(i)
        res = _degree_mod(t, p)
        if stop_at is not None and res >= stop_at:
            return None
        # CRT combine
        inv = pow(modulus % p, -1, p)
        value = value + modulus * ((res - value) % p * inv % p)
        modulus *= p
        i += 1
    if stop_at is not None and value >= stop_at:
        return None
    return value


def fano_degree(t: FanoType) -> int:
    """Exact degree of the Fano problem; requires delta(t) == 0.

    The target coefficient of Q_{r,d_bullet} * V is recovered by exact
    finite differences: for a homogeneous P of degree |mu| the mixed
    difference of order mu at 0 equals mu! times the x^mu coefficient.
    Grouping the evaluation points by their underlying value set (the
    integrand is antisymmetric, so repeated values vanish) turns the sum
    into one weighted by determinants of binomial coefficients.  For large
    (r, n) even this sum is long, and it is evaluated modulo fixed primes
    and reassembled by CRT against the Bezout bound.
    """
    if delta(t) != 0:
        raise ValueError(f"{t.label()} is not a Fano problem (delta != 0)")
    if _subset_count(t) <= _EXACT_SUBSET_LIMIT:
        return _degree_exact_small(t)
    deg = _degree_by_crt(t)
    if deg <= 0:
        raise AssertionError(f"non-positive degree for {t.label()}")
    return deg


def degree_below_cap(t: FanoType, cap: int):
    """fano_degree(t) when it is < cap, else None.

    Cheap cases are computed outright; expensive ones are screened by
    residues first (a residue >= cap proves the degree is >= cap).
    """
    # route by estimated work: subsets * linear forms; candidates with few
    # subsets but hundreds of forms (e.g. the r = 1 family with large d) are
    # far cheaper through the modular kernel than the exact big-integer sum
    _, forms, _ = _degree_data(t)
    if _subset_count(t) * len(forms) <= 500_000:
        deg = _degree_exact_small(t)
        return deg if deg < cap else None
    return _degree_by_crt(t, stop_at=cap)


def fano_degree_by_expansion(t: FanoType) -> int:
    """Degree via direct pruned expansion of Q_{r,d_bullet} * V.

    Independent route used to cross-check fano_degree; practical only for
    small r.  Monomials whose exponent in any variable already exceeds the
    target exponent are dropped after every factor.
    """
    if delta(t) != 0:
        raise ValueError(f"{t.label()} is not a Fano problem (delta != 0)")
    r, n = t.r, t.n
    caps = tuple(n - k for k in range(r + 1))
    factors = []
    for d in t.degrees:
        factors.extend(list(a) for a in _compositions(d, r + 1))
    for i in range(r + 1):
        for j in range(i + 1, r + 1):
            factors.append([1 if k == i else (-1 if k == j else 0) for k in range(r + 1)])
    acc = {(0,) * (r + 1): 1}
    for lin in factors:
        nxt = {}
        for mono, c in acc.items():
            for i, ai in enumerate(lin):
                if ai == 0 or mono[i] >= caps[i]:
                    continue
                m2 = mono[:i] + (mono[i] + 1,) + mono[i + 1 :]
                v = nxt.get(m2, 0) + c * ai
                if v:
                    nxt[m2] = v
                else:
                    del nxt[m2]
        acc = nxt
    return acc.get(caps, 0)


def degree_lower_bound(t: FanoType):
    """(refined, crude) lower bounds on the degree; refined >= crude."""
    r = t.r
    refined = 1
    crude = 1
    for d in t.degrees:
        crude *= d ** (r + 1)
        for j in range(1, r + 2):
            if d % j == 0:
                refined *= (d // j) ** comb(r + 1, j)
    return refined, crude


def is_enriched(t: FanoType) -> bool:
    """True for (1,3,(3)) and (r, 2r+2, (2,2)): the problems whose planes
    intersect, with Coxeter-group Galois groups instead of at least
    alternating ones."""
    if delta(t) != 0:
        raise ValueError("is_enriched is defined for Fano problems only")
    if (t.r, t.n, t.degrees) == (1, 3, (3,)):
        return True
    return t.degrees == (2, 2) and t.n == 2 * t.r + 2


def _degree_tuples(bound, min_d=2):
    """Ascending tuples (d_1 <= d_2 <= ...) with product < bound."""
    yield ()
    d = min_d
    while d < bound:
        for rest in _degree_tuples((bound + d - 1) // d, d):
            yield (d,) + rest
        d += 1


def enumerate_fano_problems(degree_cap: int):
    """All Fano problems with degree < degree_cap, sorted by (degree, r, n).

    The crude bound prod d_i^(r+1) >= 2^(s(r+1)) bounds the search space;
    n is forced by delta = 0.
    """
    if degree_cap < 1:
        raise ValueError("degree cap must be >= 1")
    found = []
    r = 1
    while 2 ** (r + 1) < degree_cap:
        # crude bound: prod d_i^(r+1) < cap, i.e. prod d_i < cap^(1/(r+1))
        prod_bound = 1
        while (prod_bound + 1) ** (r + 1) < degree_cap:
            prod_bound += 1
        for ds in _degree_tuples(prod_bound + 1):
            if not ds:
                continue
            hit = sum(comb(d + r, r) for d in ds)
            if hit % (r + 1) != 0:
                continue
            n = r + hit // (r + 1)
            if 2 * r > n - len(ds):
                continue
            t = FanoType(r, n, ds)
            refined, _ = degree_lower_bound(t)
            if refined >= degree_cap:
                continue
            deg = degree_below_cap(t, degree_cap)
            if deg is not None:
                found.append(FanoProblem(t, deg))
        r += 1
    found.sort(key=lambda p: (p.degree, p.fano_type.r, p.fano_type.n))
    return found


# The rows of the paper's two tables, used by the CLI `tables` command.
TABLE1_TYPES = [
    FanoType(1, 4, (2, 2)),
    FanoType(1, 3, (3,)),
    FanoType(2, 6, (2, 2)),
    FanoType(3, 8, (2, 2)),
    FanoType(1, 7, (2, 2, 2, 2)),
    FanoType(1, 6, (2, 2, 3)),
    FanoType(4, 10, (2, 2)),
    FanoType(2, 8, (2, 2, 2)),
]

TABLE2_TYPES = [
    FanoType(1, 7, (2, 2, 2, 2)),
    FanoType(1, 6, (2, 2, 3)),
    FanoType(2, 8, (2, 2, 2)),
    FanoType(1, 5, (3, 3)),
    FanoType(1, 5, (2, 4)),
    FanoType(1, 10, (2, 2, 2, 2, 2, 2)),
    FanoType(1, 9, (2, 2, 2, 2, 3)),
    FanoType(2, 10, (2, 2, 2, 2)),
    FanoType(1, 8, (2, 2, 3, 3)),
    FanoType(1, 8, (2, 2, 2, 4)),
    FanoType(1, 7, (3, 3, 3)),
    FanoType(1, 7, (2, 3, 4)),
]
