"""
Exact rational vector helpers on top of sympy matrices.
"""

from fractions import Fraction
from math import gcd, lcm

import sympy

from laurent.helpers import as_number, to_fraction


def as_point(point, tolerance=1e-9):
    return tuple(to_fraction(as_number(x), tolerance) for x in point)


def dot(u, v):
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def scale(u, k):
    return tuple(a * k for a in u)


def to_matrix(rows, ncols=None):
    rows = [list(r) for r in rows]
    if not rows:
        return sympy.zeros(0, ncols or 0)
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) if isinstance(x, Fraction)
                          else sympy.Integer(x) for x in row] for row in rows])


def _to_fraction(value):
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


def rank(rows, ncols=None):
    rows = list(rows)
    if not rows:
        return 0
    return to_matrix(rows, ncols).rank()


def nullspace(rows, ncols):
    """Basis of {x : row . x = 0 for every row}, as Fraction tuples."""
    rows = list(rows)
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    return [tuple(_to_fraction(x) for x in v) for v in to_matrix(rows, ncols).nullspace()]


def pivot_columns(rows):
    rows = list(rows)
    if not rows:
        return ()
    return tuple(to_matrix(rows).rref()[1])


def determinant(rows):
    return _to_fraction(to_matrix(rows).det())


def primitive_integer(vector):
    """Smallest positive multiple of a rational vector with integer entries."""
    vector = [Fraction(x) for x in vector]
    denominator = lcm(*(x.denominator for x in vector)) if vector else 1
    integers = [int(x * denominator) for x in vector]
    divisor = 0
    for k in integers:
        divisor = gcd(divisor, abs(k))
    if divisor == 0:
        return tuple(integers)
    return tuple(k // divisor for k in integers)


def fraction_to_json(value):
    value = Fraction(value)
    return [value.numerator, value.denominator]
