"""
Linear differential operators with polynomial coefficients, kept in the
normal order  sum of c * z^a * d^b  of the Weyl algebra.

Coefficients c are sympy expressions in the parameters (s, nu); the
dependence on the variables sits in z^a. Terms are sorted by their
derivative multi-index in degree-reverse-lexicographic order, largest
first.
"""

import logging
import re
from itertools import product
from math import comb, factorial, prod
from types import MappingProxyType

import sympy

from laurent.helpers import to_sympy

from .exceptions import GkzError

logger = logging.getLogger(__name__)

# central-difference weights per derivative order, keyed by offset
STENCILS = {
    0: {0: 1.0},
    1: {-1: -0.5, 1: 0.5},
    2: {-1: 1.0, 0: -2.0, 1: 1.0},
    3: {-2: -0.5, -1: 1.0, 1: -1.0, 2: 0.5},
    4: {-2: 1.0, -1: -4.0, 0: 6.0, 1: -4.0, 2: 1.0},
}


def degrevlex_key(exponent):
    return (sum(exponent), tuple(-e for e in reversed(exponent)))


def _term_key(key):
    a, b = key
    return (degrevlex_key(b), degrevlex_key(a))


def _falling(c, i):
    return factorial(c) // factorial(c - i)


def _commute(b, c):
    """d^b z^c as a list of (z exponent, d exponent, integer factor)."""
    choices = []
    for bj, cj in zip(b, c):
        choices.append([(cj - i, bj - i, comb(bj, i) * _falling(cj, i)) for i in range(min(bj, cj) + 1)])
    result = []
    for combo in product(*choices):
        result.append((
            tuple(x for x, _, _ in combo),
            tuple(y for _, y, _ in combo),
            prod(k for _, _, k in combo),
        ))
    return result


def _coefficient_text(c):
    if c.is_Add:
        return f"({c})"
    return str(c)


class DifferentialOperator:
    """Immutable element of the Weyl algebra over named variables."""

    __slots__ = ("variables", "_terms")

    def __init__(self, variables, terms=None):
        self.variables = tuple(variables)
        n = len(self.variables)
        accumulated = {}
        for (a, b), c in (terms or {}).items():
            a = tuple(int(k) for k in a)
            b = tuple(int(k) for k in b)
            if len(a) != n or len(b) != n:
                raise GkzError(f"term exponents {a}, {b} do not match {n} variables")
            if any(k < 0 for k in a + b):
                raise GkzError(f"negative power in the term z^{a} d^{b}")
            accumulated[(a, b)] = accumulated.get((a, b), 0) + to_sympy(c)
        cleaned = {}
        for key, c in accumulated.items():
            c = sympy.expand(c)
            if c != 0:
                cleaned[key] = c
        self._terms = {k: cleaned[k] for k in sorted(cleaned, key=_term_key, reverse=True)}

    @classmethod
    def constant(cls, variables, value):
        zero = (0,) * len(variables)
        return cls(variables, {(zero, zero): value})

    @classmethod
    def variable(cls, variables, j):
        unit = tuple(int(k == j) for k in range(len(variables)))
        return cls(variables, {(unit, (0,) * len(variables)): 1})

    @classmethod
    def derivative(cls, variables, j):
        unit = tuple(int(k == j) for k in range(len(variables)))
        return cls(variables, {((0,) * len(variables), unit): 1})

    @classmethod
    def theta(cls, variables, j):
        """z_j d_j"""
        unit = tuple(int(k == j) for k in range(len(variables)))
        return cls(variables, {(unit, unit): 1})

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    @property
    def nvars(self):
        return len(self.variables)

    def is_zero(self):
        return not self._terms

    def order(self):
        return max((sum(b) for _, b in self._terms), default=0)

    def free_symbols(self):
        symbols = set()
        for c in self._terms.values():
            symbols |= c.free_symbols
        return symbols

    # --- arithmetic ---

    def _coerce(self, other):
        if isinstance(other, DifferentialOperator):
            if other.variables != self.variables:
                raise GkzError(f"operators over {self.variables} and {other.variables} do not combine")
            return other
        return DifferentialOperator.constant(self.variables, other)

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self._terms)
        for key, c in other._terms.items():
            terms[key] = terms.get(key, 0) + c
        return DifferentialOperator(self.variables, terms)

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, factor):
        factor = to_sympy(factor)
        return DifferentialOperator(self.variables, {k: c * factor for k, c in self._terms.items()})

    def __mul__(self, other):
        """Composition self . other, brought back to normal order."""
        other = self._coerce(other)
        terms = {}
        for (a, b), c in self._terms.items():
            for (a2, b2), c2 in other._terms.items():
                for a3, b3, k in _commute(b, a2):
                    key = (
                        tuple(x + y for x, y in zip(a, a3)),
                        tuple(x + y for x, y in zip(b3, b2)),
                    )
                    terms[key] = terms.get(key, 0) + c * c2 * k
        return DifferentialOperator(self.variables, terms)

    def __rmul__(self, other):
        return self._coerce(other) * self

    def __pow__(self, k):
        if k < 0:
            raise GkzError("negative powers of a differential operator are not defined")
        result = DifferentialOperator.constant(self.variables, 1)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, DifferentialOperator):
            return self.variables == other.variables and self._terms == other._terms
        return NotImplemented

    def __hash__(self):
        return hash((self.variables, tuple(self._terms.items())))

    def normalized(self):
        """Monic when the leading coefficient is a number, otherwise a sign fix."""
        if self.is_zero():
            return self
        lead = next(iter(self._terms.values()))
        if lead.is_number:
            return self.scale(1 / lead)
        if lead.could_extract_minus_sign():
            return -self
        return self

    def substitute(self, values):
        """Replace parameter symbols by numbers, e.g. {"s": Fraction(3, 2)}."""
        mapping = {sympy.Symbol(str(k)): to_sympy(v) for k, v in values.items()}
        return DifferentialOperator(self.variables, {k: c.subs(mapping) for k, c in self._terms.items()})

    # --- numeric application ---

    def apply(self, func, point, parameters=None, step=1e-5):
        """
        The operator applied to `func` at `point`, derivatives by central
        differences of width `step`. `parameters` maps coefficient symbols to
        numbers. Each stencil point is evaluated once.

        Raises:
            GkzError: unresolved symbols, or a derivative order above 4
        """
        point = [float(x) for x in point]
        if len(point) != self.nvars:
            raise GkzError(f"point has {len(point)} coordinates, expected {self.nvars}")
        operator = self.substitute(parameters or {})
        if operator.free_symbols():
            names = ", ".join(sorted(str(x) for x in operator.free_symbols()))
            raise GkzError(f"no value for the parameters {names}")
        cache = {}

        def sample(offset):
            if offset not in cache:
                cache[offset] = func([x + k * step for x, k in zip(point, offset)])
            return cache[offset]

        total = 0
        for (a, b), c in operator._terms.items():
            if any(k not in STENCILS for k in b):
                raise GkzError(f"finite differences stop at order 4, got d^{b}")
            derivative = 0
            for combo in product(*(STENCILS[k].items() for k in b)):
                offset = tuple(o for o, _ in combo)
                derivative += prod(w for _, w in combo) * sample(offset)
            derivative /= step ** sum(b)
            monomial = prod(x ** k for x, k in zip(point, a))
            total += complex(c) * monomial * derivative
        logger.debug(f"apply: {len(cache)} evaluations at {point}")
        return total

    # --- text and JSON ---

    def _derivative_name(self, j):
        name = self.variables[j]
        if re.fullmatch(r"z\d+", name):
            return f"d[{name[1:]}]"
        return f"d[{name}]"

    def to_text(self):
        if not self._terms:
            return "0"
        pieces = []
        for (a, b), c in self._terms.items():
            factors = [name if k == 1 else f"{name}^{k}" for name, k in zip(self.variables, a) if k]
            factors += [
                self._derivative_name(j) if k == 1 else f"{self._derivative_name(j)}^{k}"
                for j, k in enumerate(b) if k
            ]
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
        return f"DifferentialOperator({self.to_text()!r})"

    def to_json(self):
        return {
            "vars": list(self.variables),
            "text": self.to_text(),
            "terms": [
                {"z": list(a), "d": list(b), "coefficient": str(c)}
                for (a, b), c in self._terms.items()
            ],
        }
