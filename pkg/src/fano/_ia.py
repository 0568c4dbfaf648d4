"""Low-level outward-rounded interval primitives.

Intervals are (lo, hi) float tuples, complex intervals ((rlo, rhi), (ilo, ihi)).
Hardware rounding-mode control is not portable from Python, so every
operation is computed round-to-nearest and then widened by one ulp on each
side (the rounding error of a single operation is below one ulp, so the
result always contains the exact setwise value).  The compiled kernel in
_kernels.pyx follows exactly the same rule.
"""

import math

_INF = math.inf


def down(x):
    return math.nextafter(x, -_INF)


def up(x):
    return math.nextafter(x, _INF)


def iadd(a, b):
    return (down(a[0] + b[0]), up(a[1] + b[1]))


def isub(a, b):
    return (down(a[0] - b[1]), up(a[1] - b[0]))


def imul(a, b):
    p0 = a[0] * b[0]
    p1 = a[0] * b[1]
    p2 = a[1] * b[0]
    p3 = a[1] * b[1]
    return (down(min(p0, p1, p2, p3)), up(max(p0, p1, p2, p3)))


def ineg(a):
    return (-a[1], -a[0])


def ipoint(x):
    return (x, x)


CZERO = ((0.0, 0.0), (0.0, 0.0))


def cpoint(z):
    return ((z.real, z.real), (z.imag, z.imag))


def cadd(x, y):
    return (iadd(x[0], y[0]), iadd(x[1], y[1]))


def csub(x, y):
    return (isub(x[0], y[0]), isub(x[1], y[1]))


def cneg(x):
    return (ineg(x[0]), ineg(x[1]))


def cmul(x, y):
    return (
        isub(imul(x[0], y[0]), imul(x[1], y[1])),
        iadd(imul(x[0], y[1]), imul(x[1], y[0])),
    )


def cscale(x, k):
    """Multiply a complex interval by an exact integer scalar."""
    ki = (float(k), float(k))
    return (imul(x[0], ki), imul(x[1], ki))


def cpow(x, e):
    out = ((1.0, 1.0), (0.0, 0.0))
    for _ in range(e):
        out = cmul(out, x)
    return out


def contains(a, x):
    return a[0] <= x <= a[1]


def ccontains(box, z):
    return contains(box[0], z.real) and contains(box[1], z.imag)
