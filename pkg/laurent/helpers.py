"""
Number handling shared by every app.

Exact paths carry fractions.Fraction; numeric paths carry float or complex.
Spec files encode exact numbers as [num, den] pairs, floats as JSON numbers
and complex numbers as {"re": ..., "im": ...}.
"""

from fractions import Fraction
from numbers import Rational

import sympy

from .exceptions import SpecError

# denominators tried when rationalizing a float
MAX_RATIONAL_DENOMINATOR = 10**12


def as_number(value):
    """
    Convert a spec-file or Python value into Fraction, float or complex.

    Args:
        value: int, Fraction, float, complex, "p/q" string, [num, den] pair
            or {"re": ..., "im": ...} mapping

    Returns:
        Fraction for exact input, float or complex otherwise
    """
    if isinstance(value, bool):
        raise SpecError(f"boolean is not a number: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Rational):
        return Fraction(int(value.numerator), int(value.denominator))
    if isinstance(value, float):
        return value
    if isinstance(value, complex):
        return value if value.imag else value.real
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ValueError:
            try:
                return complex(value.strip().replace(" ", ""))
            except ValueError as e:
                raise SpecError(f"not a number: {value!r}") from e
    if isinstance(value, (list, tuple)) and len(value) == 2:
        num, den = value
        if den == 0:
            raise SpecError(f"zero denominator in {value!r}")
        return Fraction(int(num), int(den))
    if isinstance(value, dict) and "re" in value:
        re = as_number(value["re"])
        im = as_number(value.get("im", 0))
        if im == 0:
            return re
        return complex(float(re), float(im))
    # sympy numbers and numpy scalars
    if isinstance(value, sympy.Basic) and value.is_Rational:
        return Fraction(int(value.p), int(value.q))
    if hasattr(value, "item"):
        return as_number(value.item())
    raise SpecError(f"not a number: {value!r}")


def number_to_json(value):
    if isinstance(value, Fraction):
        return [value.numerator, value.denominator]
    if isinstance(value, int):
        return [value, 1]
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    return float(value)


def number_to_short_json(value):
    """Integers as JSON integers and other fractions as "p/q" strings, for hand-written files."""
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else str(value)
    if isinstance(value, int):
        return value
    return number_to_json(value)


def number_to_text(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, complex):
        return f"({value.real}{value.imag:+}j)"
    return repr(float(value))


def is_exact(value):
    return isinstance(value, (int, Fraction))


def real_part(value):
    if isinstance(value, complex):
        return value.real
    return value


def imag_part(value):
    if isinstance(value, complex):
        return value.imag
    return 0


def to_fraction(value, tolerance=1e-9):
    """
    Exact rational for `value`. Floats are rationalized with the smallest
    denominator that reproduces them within `tolerance`.
    """
    value = real_part(as_number(value))
    if isinstance(value, Fraction):
        return value
    exact = Fraction(value)
    max_den = 1
    while max_den <= MAX_RATIONAL_DENOMINATOR:
        candidate = exact.limit_denominator(max_den)
        if abs(float(candidate) - value) <= tolerance:
            return candidate
        max_den *= 10
    return exact


def to_complex(value):
    if isinstance(value, complex):
        return value
    return complex(float(value), 0.0)


def to_sympy(value):
    """Exact sympy number for Fraction input, sympy Float/complex otherwise; expressions pass through."""
    if isinstance(value, sympy.Basic):
        return value
    value = as_number(value)
    if isinstance(value, Fraction):
        return sympy.Rational(value.numerator, value.denominator)
    if isinstance(value, complex):
        return sympy.Float(value.real) + sympy.I * sympy.Float(value.imag)
    return sympy.Float(value)


def parameter_symbols(nfactors, nvars):
    """
    Symbols for (s, nu) in operator coefficients: s or s1..sl, nu or nu1..nun.
    """
    if nfactors == 1:
        s = (sympy.Symbol("s"),)
    else:
        s = tuple(sympy.Symbol(f"s{i + 1}") for i in range(nfactors))
    if nvars == 1:
        nu = (sympy.Symbol("nu"),)
    else:
        nu = tuple(sympy.Symbol(f"nu{j + 1}") for j in range(nvars))
    return s, nu
