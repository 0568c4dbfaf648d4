"""Exact arithmetic substrate: Gaussian rationals, sparse multivariate
polynomials and exact linear algebra.

Rationals are ``fractions.Fraction`` (always in lowest terms, positive
denominator).  A monomial is a tuple of non-negative exponents, one per
variable.  All containers here are treated as immutable after construction;
every operation returns a fresh value.
"""

from __future__ import annotations

from fractions import Fraction


class GaussianRational:
    """An element a + b*i with rational a, b.  Exact field arithmetic."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", re if isinstance(re, Fraction) else Fraction(re))
        object.__setattr__(self, "im", im if isinstance(im, Fraction) else Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    def _coerce(self, other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return -self + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def inverse(self):
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise ZeroDivisionError("inverse of zero GaussianRational")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def to_complex(self):
        return complex(self.re, self.im)

    def __str__(self):
        sign = "+" if self.im >= 0 else "-"
        a, b = self.re, abs(self.im)
        return f"{a.numerator}/{a.denominator}{sign}{b.numerator}/{b.denominator}*i"

    __repr__ = __str__

    @classmethod
    def from_string(cls, s):
        """Parse the canonical "a/b+c/d*i" form (also accepts plain "a/b")."""
        s = s.strip()
        if not s.endswith("*i"):
            return cls(Fraction(s))
        body = s[:-2]
        # split at the sign separating the two parts (skip a leading sign)
        for k in range(len(body) - 1, 0, -1):
            if body[k] in "+-" and body[k - 1] not in "+-/*e":
                re_part, im_part = body[:k], body[k] + body[k + 1 :]
                return cls(Fraction(re_part), Fraction(im_part))
        return cls(0, Fraction(body))


GQ_ZERO = GaussianRational(0)
GQ_ONE = GaussianRational(1)


def gq(re=0, im=0):
    return GaussianRational(re, im)


class SparsePoly:
    """Sparse multivariate polynomial over the Gaussian rationals.

    Terms are stored as a dict mapping exponent tuples to nonzero
    GaussianRational coefficients.
    """

    __slots__ = ("num_vars", "terms")

    def __init__(self, num_vars, terms=None):
        object.__setattr__(self, "num_vars", num_vars)
        clean = {}
        if terms:
            for mono, c in terms.items():
                if len(mono) != num_vars:
                    raise ValueError("monomial length does not match num_vars")
                if not isinstance(c, GaussianRational):
                    c = GaussianRational(c)
                if c:
                    clean[tuple(mono)] = c
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("SparsePoly is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, num_vars):
        return cls(num_vars)

    @classmethod
    def constant(cls, num_vars, c):
        return cls(num_vars, {(0,) * num_vars: c})

    @classmethod
    def variable(cls, num_vars, i):
        mono = tuple(1 if k == i else 0 for k in range(num_vars))
        return cls(num_vars, {mono: GQ_ONE})

    @classmethod
    def linear_form(cls, coeffs):
        """Sum of coeffs[i] * x_i."""
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            if not isinstance(c, GaussianRational):
                c = GaussianRational(c)
            if c:
                terms[tuple(1 if k == i else 0 for k in range(n))] = c
        return cls(n, terms)

    # -- queries ------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self):
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def is_homogeneous(self):
        degs = {sum(m) for m in self.terms}
        return len(degs) <= 1

    def coefficient(self, mono):
        if len(mono) != self.num_vars:
            raise ValueError("monomial length does not match num_vars")
        return self.terms.get(tuple(mono), GQ_ZERO)

    def __eq__(self, other):
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.num_vars == other.num_vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.num_vars, frozenset(self.terms.items())))

    # -- arithmetic ---------------------------------------------------

    def _check(self, other):
        if self.num_vars != other.num_vars:
            raise ValueError("polynomials live in different variable sets")

    def __add__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            other = SparsePoly.constant(self.num_vars, other)
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms.get(m, GQ_ZERO) + c
            if s:
                terms[m] = s
            else:
                terms.pop(m, None)
        return SparsePoly(self.num_vars, terms)

    __radd__ = __add__

    def __neg__(self):
        return SparsePoly(self.num_vars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            other = SparsePoly.constant(self.num_vars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            c = other if isinstance(other, GaussianRational) else GaussianRational(other)
            return SparsePoly(self.num_vars, {m: v * c for m, v in self.terms.items()})
        self._check(other)
        terms = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                p = c1 * c2
                s = terms.get(m)
                s = p if s is None else s + p
                if s:
                    terms[m] = s
                else:
                    terms.pop(m, None)
        return SparsePoly(self.num_vars, terms)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = SparsePoly.constant(self.num_vars, GQ_ONE)
        base = self
        while k:
            if k & 1:
                result = result * base
            base_needed = k >> 1
            if base_needed:
                base = base * base
            k = base_needed
        return result

    def diff(self, i):
        terms = {}
        for m, c in self.terms.items():
            e = m[i]
            if e == 0:
                continue
            dm = m[:i] + (e - 1,) + m[i + 1 :]
            dc = c * e
            s = terms.get(dm, GQ_ZERO) + dc
            if s:
                terms[dm] = s
            else:
                terms.pop(dm, None)
        return SparsePoly(self.num_vars, terms)

    def evaluate(self, point):
        """Exact evaluation at a sequence of GaussianRational values."""
        if len(point) != self.num_vars:
            raise ValueError("point length does not match num_vars")
        total = GQ_ZERO
        for m, c in self.terms.items():
            v = c
            for x, e in zip(point, m):
                for _ in range(e):
                    v = v * x
            total = total + v
        return total

    def substitute(self, images):
        """Exact composition p(images): one image polynomial per variable.

        All images must share a common variable set; the result lives there.
        """
        if len(images) != self.num_vars:
            raise ValueError("need one image per variable")
        if self.num_vars == 0:
            raise ValueError("cannot substitute into a 0-variable polynomial")
        n_out = images[0].num_vars
        for im in images:
            if im.num_vars != n_out:
                raise ValueError("images live in different variable sets")
        powers = [
            {0: SparsePoly.constant(n_out, GQ_ONE)} for _ in range(self.num_vars)
        ]

        def power(i, e):
            cache = powers[i]
            if e not in cache:
                k = max(cache)
                while k < e:
                    cache[k + 1] = cache[k] * images[i]
                    k += 1
            return cache[e]

        result = SparsePoly.zero(n_out)
        for m, c in self.terms.items():
            term = SparsePoly.constant(n_out, c)
            for i, e in enumerate(m):
                if e:
                    term = term * power(i, e)
            result = result + term
        return result

    # -- canonical text form ------------------------------------------

    def sorted_monomials(self):
        """Monomials in graded-lex order, largest first."""
        return sorted(self.terms, key=lambda m: (sum(m), m), reverse=True)

    def canonical_str(self):
        if not self.terms:
            return "0"
        parts = []
        for m in self.sorted_monomials():
            factors = [f"({self.terms[m]})"]
            for i, e in enumerate(m):
                if e == 1:
                    factors.append(f"x{i}")
                elif e > 1:
                    factors.append(f"x{i}^{e}")
            parts.append("*".join(factors))
        return " + ".join(parts)

    __repr__ = canonical_str

    @classmethod
    def from_string(cls, s, num_vars):
        s = s.strip()
        if s == "0":
            return cls.zero(num_vars)
        terms = {}
        for part in s.split(" + "):
            factors = part.split("*")
            # re-join the "...*i)" piece of the coefficient
            if not factors[0].endswith(")"):
                k = next(i for i, f in enumerate(factors) if f.endswith(")"))
                factors = ["*".join(factors[: k + 1])] + factors[k + 1 :]
            coeff = GaussianRational.from_string(factors[0].strip("()"))
            mono = [0] * num_vars
            for f in factors[1:]:
                if "^" in f:
                    name, e = f.split("^")
                    mono[int(name[1:])] = int(e)
                else:
                    mono[int(f[1:])] = 1
            terms[tuple(mono)] = coeff
        return cls(num_vars, terms)


def poly_mul(a, b):
    """Exact product of two sparse polynomials over a common variable set."""
    return a * b


def coefficient_of(p, mono):
    return p.coefficient(mono)


def substitute_linear(p, images):
    return p.substitute(images)


class ExactMatrix:
    """Dense matrix of Gaussian rationals with exact elimination."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries, rows=None, cols=None):
        entries = [list(row) for row in entries]
        if rows is None:
            rows = len(entries)
            cols = len(entries[0]) if entries else 0
        for row in entries:
            if len(row) != cols:
                raise ValueError("ragged matrix")
        norm = [
            [e if isinstance(e, GaussianRational) else GaussianRational(e) for e in row]
            for row in entries
        ]
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", norm)

    def __setattr__(self, name, value):
        raise AttributeError("ExactMatrix is immutable")

    @classmethod
    def identity(cls, n):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, rows, cols):
        return cls([[0] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def from_columns(cls, columns):
        rows = len(columns[0])
        return cls([[col[i] for col in columns] for i in range(rows)])

    def column(self, j):
        return [self.entries[i][j] for i in range(self.rows)]

    def matvec(self, v):
        if len(v) != self.cols:
            raise ValueError("vector length does not match cols")
        out = []
        for row in self.entries:
            acc = GQ_ZERO
            for a, x in zip(row, v):
                if a and x:
                    acc = acc + a * x
            out.append(acc)
        return out

    @staticmethod
    def _size(c):
        # pivot preference: small numerators/denominators keep growth down
        return (
            c.re.numerator.bit_length()
            + c.re.denominator.bit_length()
            + c.im.numerator.bit_length()
            + c.im.denominator.bit_length()
        )

    def _rref(self):
        """Reduced row echelon form; returns (matrix rows, pivot columns)."""
        m = [row[:] for row in self.entries]
        pivots = []
        prow = 0
        for col in range(self.cols):
            if prow >= self.rows:
                break
            best = None
            for i in range(prow, self.rows):
                if m[i][col]:
                    sz = self._size(m[i][col])
                    if best is None or sz < best[0]:
                        best = (sz, i)
            if best is None:
                continue
            i = best[1]
            m[prow], m[i] = m[i], m[prow]
            inv = m[prow][col].inverse()
            m[prow] = [e * inv for e in m[prow]]
            for k in range(self.rows):
                if k != prow and m[k][col]:
                    f = m[k][col]
                    m[k] = [a - f * b for a, b in zip(m[k], m[prow])]
            pivots.append(col)
            prow += 1
        return m, pivots

    def rank(self):
        return len(self._rref()[1])

    def kernel_basis(self):
        """Exact basis of the right kernel; empty list iff injective."""
        m, pivots = self._rref()
        pivot_set = set(pivots)
        free = [j for j in range(self.cols) if j not in pivot_set]
        basis = []
        for f in free:
            v = [GQ_ZERO] * self.cols
            v[f] = GQ_ONE
            for prow, pcol in enumerate(pivots):
                v[pcol] = -m[prow][f]
            basis.append(v)
        return basis

    def solve_affine(self, b):
        """Particular solution plus kernel basis, or None when infeasible."""
        if len(b) != self.rows:
            raise ValueError("rhs length does not match rows")
        aug = ExactMatrix(
            [list(row) + [bi] for row, bi in zip(self.entries, b)],
            self.rows,
            self.cols + 1,
        )
        m, pivots = aug._rref()
        if self.cols in pivots:
            return None
        x = [GQ_ZERO] * self.cols
        for prow, pcol in enumerate(pivots):
            x[pcol] = m[prow][self.cols]
        return x, self.kernel_basis()

    def in_column_span(self, w):
        """True iff w lies in the exact column span."""
        if len(w) != self.rows:
            raise ValueError("vector length does not match rows")
        # w in col span of M  <=>  rank unchanged after appending w as a column
        with_w = ExactMatrix(
            [list(row) + [wi] for row, wi in zip(self.entries, w)],
            self.rows,
            self.cols + 1,
        )
        return with_w.rank() == self.rank()

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.entries == other.entries

    def __repr__(self):
        return f"ExactMatrix({self.rows}x{self.cols})"


def kernel_basis(matrix):
    return matrix.kernel_basis()


def solve_affine(matrix, b):
    return matrix.solve_affine(b)


def in_column_span(matrix, w):
    return matrix.in_column_span(w)
