"""
Difference operators in the parameters (s, nu) of an Euler integral.

An operator is a finite sum of g(s, nu) * sigma^u with g a rational
function and sigma^u = sigma_s1^u1 ... sigma_nun^u(l+n) a product of unit
shifts. Coefficients always stand to the left of the shifts; moving one
across a shift applies the shift to it:

    sigma^u * g(s, nu) = g((s, nu) + u) * sigma^u

Applied to a function I of the parameters, (g sigma^u) I (s, nu) is
g(s, nu) * I((s, nu) + u).
"""

import logging
from fractions import Fraction
from types import MappingProxyType

import sympy

from laurent.helpers import number_to_text, parameter_symbols, to_sympy

from .exceptions import ShiftOperatorFormatError, ShiftopsError

logger = logging.getLogger(__name__)


def coefficient_value(expr):
    """A numeric sympy expression as Fraction, float or complex."""
    if expr.has(sympy.zoo, sympy.nan, sympy.oo, -sympy.oo):
        raise ShiftopsError(f"coefficient is singular ({expr})")
    if expr.is_Rational:
        return Fraction(int(expr.p), int(expr.q))
    if not expr.is_number:
        names = ", ".join(sorted(str(x) for x in expr.free_symbols))
        raise ShiftopsError(f"no value for the parameters {names}")
    value = complex(expr)
    return value if value.imag else value.real


def _needs_parentheses(c):
    if c.is_Add:
        return True
    _, denominator = sympy.fraction(c)
    return denominator != 1


def _coefficient_text(c):
    if _needs_parentheses(c):
        return f"({c})"
    return str(c)


class ShiftOperator:
    """Immutable element of the difference ring over (s_1..s_l, nu_1..nu_n)."""

    __slots__ = ("nfactors", "nvars", "_terms")

    def __init__(self, nfactors, nvars, terms=None):
        self.nfactors = int(nfactors)
        self.nvars = int(nvars)
        size = self.nfactors + self.nvars
        accumulated = {}
        for shift, c in (terms or {}).items():
            shift = tuple(int(k) for k in shift)
            if len(shift) != size:
                raise ShiftopsError(f"shift {shift} has length {len(shift)}, expected {size}")
            accumulated[shift] = accumulated.get(shift, 0) + to_sympy(c)
        cleaned = {}
        for shift, c in accumulated.items():
            c = sympy.cancel(c)
            if c != 0:
                cleaned[shift] = c
        self._terms = {u: cleaned[u] for u in sorted(cleaned)}

    @classmethod
    def constant(cls, nfactors, nvars, value):
        return cls(nfactors, nvars, {(0,) * (nfactors + nvars): value})

    @classmethod
    def sigma_s(cls, nfactors, nvars, i, power=1):
        shift = [0] * (nfactors + nvars)
        shift[i] = power
        return cls(nfactors, nvars, {tuple(shift): 1})

    @classmethod
    def sigma_nu(cls, nfactors, nvars, j, power=1):
        shift = [0] * (nfactors + nvars)
        shift[nfactors + j] = power
        return cls(nfactors, nvars, {tuple(shift): 1})

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    @property
    def shifts(self):
        return list(self._terms)

    def symbols(self):
        s, nu = parameter_symbols(self.nfactors, self.nvars)
        return s + nu

    def is_zero(self):
        return not self._terms

    # --- arithmetic ---

    def _coerce(self, other):
        if isinstance(other, ShiftOperator):
            if (other.nfactors, other.nvars) != (self.nfactors, self.nvars):
                raise ShiftopsError(
                    f"operators over ({self.nfactors}, {self.nvars}) and "
                    f"({other.nfactors}, {other.nvars}) parameters do not combine"
                )
            return other
        return ShiftOperator.constant(self.nfactors, self.nvars, other)

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self._terms)
        for u, c in other._terms.items():
            terms[u] = terms.get(u, 0) + c
        return ShiftOperator(self.nfactors, self.nvars, terms)

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, factor):
        """factor * self, with the factor standing on the left."""
        factor = to_sympy(factor)
        return ShiftOperator(self.nfactors, self.nvars, {u: c * factor for u, c in self._terms.items()})

    def shift_coefficient(self, c, u):
        """g((s, nu) + u)"""
        return to_sympy(c).xreplace({x: x + k for x, k in zip(self.symbols(), u) if k})

    def __mul__(self, other):
        other = self._coerce(other)
        terms = {}
        for u, c in self._terms.items():
            for w, c2 in other._terms.items():
                key = tuple(a + b for a, b in zip(u, w))
                terms[key] = terms.get(key, 0) + c * self.shift_coefficient(c2, u)
        return ShiftOperator(self.nfactors, self.nvars, terms)

    def __rmul__(self, other):
        return self._coerce(other) * self

    def __pow__(self, k):
        if k < 0:
            if len(self._terms) == 1 and next(iter(self._terms.values())) == 1:
                (u,) = self._terms
                return ShiftOperator(self.nfactors, self.nvars, {tuple(a * k for a in u): 1})
            raise ShiftopsError("only pure shifts have negative powers")
        result = ShiftOperator.constant(self.nfactors, self.nvars, 1)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, ShiftOperator):
            return (
                (self.nfactors, self.nvars) == (other.nfactors, other.nvars)
                and self._terms.keys() == other._terms.keys()
                and all(sympy.cancel(c - other._terms[u]) == 0 for u, c in self._terms.items())
            )
        return NotImplemented

    def __hash__(self):
        return hash((self.nfactors, self.nvars, tuple(self._terms)))

    def substitute(self, values):
        """Replace parameter symbols by numbers, e.g. {"s": Fraction(3, 2)}."""
        mapping = {sympy.Symbol(str(k)): to_sympy(v) for k, v in values.items()}
        return ShiftOperator(
            self.nfactors, self.nvars, {u: c.subs(mapping, simultaneous=True) for u, c in self._terms.items()}
        )

    # --- application ---

    def coefficients_at(self, s, nu):
        """Numeric coefficient per shift at the parameter point (s, nu)."""
        s, nu = tuple(s), tuple(nu)
        if (len(s), len(nu)) != (self.nfactors, self.nvars):
            raise ShiftopsError(
                f"point has {len(s)} s and {len(nu)} nu values, expected {self.nfactors} and {self.nvars}"
            )
        mapping = {x: to_sympy(v) for x, v in zip(self.symbols(), s + nu)}
        values = {}
        for u, c in self._terms.items():
            try:
                values[u] = coefficient_value(c.subs(mapping, simultaneous=True))
            except ShiftopsError as e:
                raise ShiftopsError(f"coefficient of shift {u} at {point_text(s, nu)}: {e.message}")
        return values

    def shifted_point(self, s, nu, u):
        l = self.nfactors
        return (
            tuple(x + k for x, k in zip(s, u[:l])),
            tuple(x + k for x, k in zip(nu, u[l:])),
        )

    def apply(self, func, s, nu):
        """
        sum of g(s, nu) * func(s + du_s, nu + du_nu) for a numeric function
        func(s, nu) of the parameter tuples.
        """
        total = 0
        for u, c in self.coefficients_at(s, nu).items():
            total += c * func(*self.shifted_point(tuple(s), tuple(nu), u))
        return total

    def apply_symbolic(self, func):
        """The same sum for a sympy function of the l + n parameter symbols."""
        symbols = self.symbols()
        total = sympy.Integer(0)
        for u, c in self._terms.items():
            total += c * func(*[x + k for x, k in zip(symbols, u)])
        return total

    # --- text and JSON ---

    def _shift_text(self, u):
        factors = []
        for k, power in enumerate(u):
            if not power:
                continue
            if k < self.nfactors:
                name = f"sigma_s[{k + 1}]"
            else:
                name = f"sigma_nu[{k - self.nfactors + 1}]"
            factors.append(name if power == 1 else f"{name}^{power}")
        return factors

    def to_text(self):
        if not self._terms:
            return "0"
        pieces = []
        for u, c in self._terms.items():
            factors = self._shift_text(u)
            negative = c.could_extract_minus_sign()
            magnitude = -c if negative else c
            if not factors:
                body = _coefficient_text(magnitude)
            elif magnitude == 1:
                body = "*".join(factors)
            else:
                body = "*".join([_coefficient_text(magnitude)] + factors)
            if not pieces:
                pieces.append(f"-{body}" if negative else body)
            else:
                pieces.append(f"- {body}" if negative else f"+ {body}")
        return " ".join(pieces)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"ShiftOperator({self.to_text()!r})"

    def to_json(self):
        l = self.nfactors
        return {
            "nfactors": self.nfactors,
            "nvars": self.nvars,
            "symbols": [str(x) for x in self.symbols()],
            "text": self.to_text(),
            "terms": [
                {"s": list(u[:l]), "nu": list(u[l:]), "coefficient": str(c)}
                for u, c in self._terms.items()
            ],
        }

    @classmethod
    def from_json(cls, data):
        try:
            nfactors, nvars = int(data["nfactors"]), int(data["nvars"])
            s, nu = parameter_symbols(nfactors, nvars)
            names = {str(x): x for x in s + nu}
            terms = {}
            for term in data["terms"]:
                shift = tuple(term["s"]) + tuple(term["nu"])
                terms[shift] = terms.get(shift, 0) + sympy.sympify(term["coefficient"], locals=names)
        except (KeyError, TypeError, ValueError, sympy.SympifyError) as e:
            raise ShiftOperatorFormatError(f"malformed shift operator: {e}")
        unknown = {str(x) for c in terms.values() for x in c.free_symbols} - set(names)
        if unknown:
            raise ShiftOperatorFormatError(f"unknown parameters in coefficients: {', '.join(sorted(unknown))}")
        logger.debug(f"from_json: {len(terms)} terms over ({nfactors}, {nvars}) parameters")
        return cls(nfactors, nvars, terms)


def point_text(s, nu):
    return f"s=({', '.join(number_to_text(x) for x in s)}), nu=({', '.join(number_to_text(x) for x in nu)})"
