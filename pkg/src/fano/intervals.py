"""Outward-rounded interval types: real intervals and complex boxes.

Thin, immutable wrappers over the tuple primitives in _ia.  All arithmetic
widens by one ulp per operation, so results always contain the exact
setwise value; see _ia for the soundness argument.
"""

from __future__ import annotations

import math
from fractions import Fraction

from . import _ia

__all__ = ["RealInterval", "ComplexInterval", "ComplexBox"]


class RealInterval:
    """A closed interval [lo, hi] of binary floats."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        if hi is None:
            hi = lo
        if not lo <= hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", float(lo))
        object.__setattr__(self, "hi", float(hi))

    def __setattr__(self, name, value):
        raise AttributeError("RealInterval is immutable")

    @classmethod
    def enclosing(cls, value):
        """Smallest float interval containing an exact Fraction (or float)."""
        if isinstance(value, Fraction):
            f = float(value)
            lo = hi = f
            if Fraction(f) > value:
                lo = math.nextafter(f, -math.inf)
            elif Fraction(f) < value:
                hi = math.nextafter(f, math.inf)
            return cls(lo, hi)
        return cls(value)

    def _t(self):
        return (self.lo, self.hi)

    def __add__(self, other):
        return RealInterval(*_ia.iadd(self._t(), other._t()))

    def __sub__(self, other):
        return RealInterval(*_ia.isub(self._t(), other._t()))

    def __mul__(self, other):
        return RealInterval(*_ia.imul(self._t(), other._t()))

    def __neg__(self):
        return RealInterval(-self.hi, -self.lo)

    def contains(self, x):
        """Exact containment test; x may be a float or a Fraction."""
        if isinstance(x, Fraction):
            return Fraction(self.lo) <= x <= Fraction(self.hi)
        return self.lo <= x <= self.hi

    def contains_interval(self, other):
        return self.lo <= other.lo and other.hi <= self.hi

    def strictly_contains_interval(self, other):
        return self.lo < other.lo and other.hi < self.hi

    def intersects(self, other):
        return self.lo <= other.hi and other.lo <= self.hi

    def midpoint(self):
        return 0.5 * (self.lo + self.hi)

    def width(self):
        return self.hi - self.lo

    def __eq__(self, other):
        if not isinstance(other, RealInterval):
            return NotImplemented
        return self.lo == other.lo and self.hi == other.hi

    def __repr__(self):
        return f"[{self.lo!r}, {self.hi!r}]"


class ComplexInterval:
    """A rectangle re + i*im with real-interval sides."""

    __slots__ = ("re", "im")

    def __init__(self, re, im):
        if not isinstance(re, RealInterval):
            re = RealInterval(re)
        if not isinstance(im, RealInterval):
            im = RealInterval(im)
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)

    def __setattr__(self, name, value):
        raise AttributeError("ComplexInterval is immutable")

    @classmethod
    def point(cls, z):
        z = complex(z)
        return cls(RealInterval(z.real), RealInterval(z.imag))

    @classmethod
    def from_tuple(cls, quad):
        rlo, rhi, ilo, ihi = quad
        return cls(RealInterval(rlo, rhi), RealInterval(ilo, ihi))

    def _t(self):
        return ((self.re.lo, self.re.hi), (self.im.lo, self.im.hi))

    def as_tuple(self):
        return (self.re.lo, self.re.hi, self.im.lo, self.im.hi)

    def __add__(self, other):
        c = _ia.cadd(self._t(), other._t())
        return ComplexInterval(RealInterval(*c[0]), RealInterval(*c[1]))

    def __sub__(self, other):
        c = _ia.csub(self._t(), other._t())
        return ComplexInterval(RealInterval(*c[0]), RealInterval(*c[1]))

    def __mul__(self, other):
        c = _ia.cmul(self._t(), other._t())
        return ComplexInterval(RealInterval(*c[0]), RealInterval(*c[1]))

    def __neg__(self):
        return ComplexInterval(-self.re, -self.im)

    def contains(self, z):
        """Containment; z may be complex or a (Fraction, Fraction) pair."""
        if isinstance(z, tuple):
            return self.re.contains(z[0]) and self.im.contains(z[1])
        z = complex(z)
        return self.re.contains(z.real) and self.im.contains(z.imag)

    def contains_interval(self, other):
        return self.re.contains_interval(other.re) and self.im.contains_interval(
            other.im
        )

    def strictly_contains_interval(self, other):
        return self.re.strictly_contains_interval(
            other.re
        ) and self.im.strictly_contains_interval(other.im)

    def intersects(self, other):
        return self.re.intersects(other.re) and self.im.intersects(other.im)

    def midpoint(self):
        return complex(self.re.midpoint(), self.im.midpoint())

    def width(self):
        return max(self.re.width(), self.im.width())

    def __eq__(self, other):
        if not isinstance(other, ComplexInterval):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __repr__(self):
        return f"({self.re} + {self.im}*i)"


class ComplexBox:
    """A product of complex intervals, one per coordinate."""

    __slots__ = ("coords",)

    def __init__(self, coords):
        object.__setattr__(self, "coords", tuple(coords))
        for c in self.coords:
            if not isinstance(c, ComplexInterval):
                raise TypeError("ComplexBox expects ComplexInterval coordinates")

    def __setattr__(self, name, value):
        raise AttributeError("ComplexBox is immutable")

    @classmethod
    def around(cls, center, half_width):
        """An axis-aligned box of the given half-width about a complex point."""
        out = []
        for z in center:
            z = complex(z)
            out.append(
                ComplexInterval(
                    RealInterval(z.real - half_width, z.real + half_width),
                    RealInterval(z.imag - half_width, z.imag + half_width),
                )
            )
        return cls(out)

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def contains_point(self, z):
        """z: sequence of complex numbers or (Fraction, Fraction) pairs."""
        return all(c.contains(zi) for c, zi in zip(self.coords, z))

    def contains_box(self, other):
        return all(
            a.contains_interval(b) for a, b in zip(self.coords, other.coords)
        )

    def strictly_contains_box(self, other):
        return all(
            a.strictly_contains_interval(b)
            for a, b in zip(self.coords, other.coords)
        )

    def intersects(self, other):
        return all(a.intersects(b) for a, b in zip(self.coords, other.coords))

    def midpoint(self):
        return [c.midpoint() for c in self.coords]

    def max_width(self):
        return max(c.width() for c in self.coords)

    def __eq__(self, other):
        if not isinstance(other, ComplexBox):
            return NotImplemented
        return self.coords == other.coords

    def __repr__(self):
        return f"ComplexBox({list(self.coords)!r})"
