"""
Sparse multivariate Laurent polynomials.

A LaurentPolynomial maps signed integer exponent vectors to nonzero
coefficients. Coefficients are Fraction in exact paths, float/complex in
numeric paths, and sympy expressions when they carry kinematic symbols
(Symanzik F polynomials before substitution).

Terms are always kept in graded-lex order: total degree first, then
x1 > x2 > ... within a degree, so "1 + x1 + x2 + x1*x2".
"""

import logging
from fractions import Fraction
from types import MappingProxyType

import numpy as np
import sympy

from .exceptions import EvaluationError, LaurentError
from .helpers import as_number, number_to_json

logger = logging.getLogger(__name__)


def grlex_key(exponent):
    return (sum(exponent), tuple(-e for e in exponent))


def normalize_coefficient(value):
    if isinstance(value, sympy.Basic):
        value = sympy.expand(value)
        if value.is_Rational:
            return Fraction(int(value.p), int(value.q))
        if value.is_number:
            value = complex(value)
            return value if value.imag else value.real
        return value
    return as_number(value)


def _is_zero(value):
    return value == 0


class LaurentPolynomial:
    """Immutable sparse Laurent polynomial in `nvars` variables."""

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars, terms=None):
        if nvars < 1:
            raise LaurentError(f"a Laurent polynomial needs at least one variable, got {nvars}")
        self.nvars = int(nvars)
        accumulated = {}
        for exponent, coefficient in (terms or {}).items():
            exponent = tuple(int(e) for e in exponent)
            if len(exponent) != self.nvars:
                raise LaurentError(
                    f"exponent {exponent} has length {len(exponent)}, expected {self.nvars}"
                )
            coefficient = normalize_coefficient(coefficient)
            if exponent in accumulated:
                coefficient = normalize_coefficient(accumulated[exponent] + coefficient)
            accumulated[exponent] = coefficient
        cleaned = {e: c for e, c in accumulated.items() if not _is_zero(c)}
        self._terms = {e: cleaned[e] for e in sorted(cleaned, key=grlex_key)}
        self._hash = None

    @classmethod
    def from_terms(cls, nvars, pairs):
        """Build from an iterable of (exponent, coefficient), summing repeats."""
        terms = {}
        for exponent, coefficient in pairs:
            exponent = tuple(exponent)
            terms[exponent] = terms.get(exponent, 0) + coefficient
        return cls(nvars, terms)

    @classmethod
    def constant(cls, nvars, value):
        return cls(nvars, {(0,) * nvars: value})

    @classmethod
    def monomial(cls, exponent, coefficient=1):
        return cls(len(exponent), {tuple(exponent): coefficient})

    @classmethod
    def variable(cls, nvars, index):
        exponent = [0] * nvars
        exponent[index] = 1
        return cls(nvars, {tuple(exponent): 1})

    # --- inspection ---

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    @property
    def support(self):
        return list(self._terms)

    @property
    def coefficients(self):
        return list(self._terms.values())

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms.items())

    def is_zero(self):
        return not self._terms

    def is_constant(self):
        return all(not any(e) for e in self._terms)

    def is_monomial(self):
        return len(self._terms) == 1

    def degree(self):
        if not self._terms:
            return 0
        return max(sum(e) for e in self._terms)

    def min_exponents(self):
        return tuple(min(e[j] for e in self._terms) for j in range(self.nvars))

    def is_homogeneous(self):
        return len({sum(e) for e in self._terms}) <= 1

    def is_exact(self):
        return all(isinstance(c, Fraction) for c in self._terms.values())

    def is_positive(self):
        """True when every coefficient is a positive real number."""
        for c in self._terms.values():
            if isinstance(c, sympy.Basic) or isinstance(c, complex):
                return False
            if not c > 0:
                return False
        return bool(self._terms)

    def free_symbols(self):
        symbols = set()
        for c in self._terms.values():
            if isinstance(c, sympy.Basic):
                symbols |= c.free_symbols
        return symbols

    # --- arithmetic ---

    def _coerce(self, other):
        if isinstance(other, LaurentPolynomial):
            if other.nvars != self.nvars:
                raise LaurentError(f"variable count mismatch: {self.nvars} vs {other.nvars}")
            return other
        return LaurentPolynomial.constant(self.nvars, other)

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self._terms)
        for e, c in other._terms.items():
            terms[e] = terms[e] + c if e in terms else c
        return LaurentPolynomial(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, LaurentPolynomial):
            other = normalize_coefficient(other)
            return LaurentPolynomial(self.nvars, {e: c * other for e, c in self._terms.items()})
        other = self._coerce(other)
        pairs = []
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                pairs.append((tuple(a + b for a, b in zip(e1, e2)), c1 * c2))
        return LaurentPolynomial.from_terms(self.nvars, pairs)

    __rmul__ = __mul__

    def __pow__(self, k):
        k = int(k)
        if k < 0:
            if not self.is_monomial():
                raise LaurentError("only monomials have Laurent inverses")
            (e, c), = self._terms.items()
            return LaurentPolynomial(self.nvars, {tuple(k * x for x in e): c ** k})
        result = LaurentPolynomial.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, exponent):
        """Multiply by the monomial x^exponent."""
        return LaurentPolynomial(
            self.nvars,
            {tuple(a + b for a, b in zip(e, exponent)): c for e, c in self._terms.items()},
        )

    def __eq__(self, other):
        if isinstance(other, LaurentPolynomial):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction, float, complex)):
            return self == LaurentPolynomial.constant(self.nvars, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, tuple(self._terms.items())))
        return self._hash

    # --- calculus and evaluation ---

    def partial(self, j):
        """Derivative with respect to x_j (0-based index)."""
        if not 0 <= j < self.nvars:
            raise LaurentError(f"variable index {j} out of range for {self.nvars} variables")
        pairs = []
        for e, c in self._terms.items():
            if e[j] == 0:
                continue
            exponent = list(e)
            exponent[j] -= 1
            pairs.append((tuple(exponent), c * e[j]))
        return LaurentPolynomial.from_terms(self.nvars, pairs)

    def euler_derivative(self, j):
        """x_j * d/dx_j, which keeps the support."""
        return LaurentPolynomial(
            self.nvars, {e: c * e[j] for e, c in self._terms.items()}
        )

    def evaluate(self, x):
        """
        Sum of c * x^alpha in canonical term order.

        Raises:
            EvaluationError: a variable with a negative exponent is zero
        """
        if len(x) != self.nvars:
            raise LaurentError(f"point has {len(x)} coordinates, expected {self.nvars}")
        total = 0
        for e, c in self._terms.items():
            term = c
            for xj, k in zip(x, e):
                if k == 0:
                    continue
                if k < 0 and xj == 0:
                    raise EvaluationError(f"division by zero: negative exponent {k} at a zero coordinate")
                term = term * xj ** k
            total = total + term
        return total

    __call__ = evaluate

    def substitute(self, values):
        """Replace kinematic symbols by numbers, e.g. {"t1": -1}."""
        mapping = {sympy.Symbol(str(k)): _to_sympy(v) for k, v in values.items()}
        terms = {}
        for e, c in self._terms.items():
            terms[e] = c.subs(mapping) if isinstance(c, sympy.Basic) else c
        return LaurentPolynomial(self.nvars, terms)

    def compile(self):
        return CompiledPolynomial(self)

    # --- text and JSON ---

    def to_text(self, variables=None):
        variables = list(variables or [f"x{j + 1}" for j in range(self.nvars)])
        if not self._terms:
            return "0"
        pieces = []
        for e, c in self._terms.items():
            negative, magnitude = _split_sign(c)
            monomial = "*".join(
                name if k == 1 else f"{name}^{k}" for name, k in zip(variables, e) if k != 0
            )
            if not monomial:
                body = _coefficient_text(magnitude, alone=True)
            elif magnitude == 1:
                body = monomial
            else:
                body = f"{_coefficient_text(magnitude, alone=False)}*{monomial}"
            if not pieces:
                pieces.append(f"-{body}" if negative else body)
            else:
                pieces.append(f"- {body}" if negative else f"+ {body}")
        return " ".join(pieces)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"LaurentPolynomial({self.to_text()!r})"

    def to_json(self, variables=None):
        variables = list(variables or [f"x{j + 1}" for j in range(self.nvars)])
        terms = []
        for e, c in self._terms.items():
            entry = {"exp": list(e)}
            if isinstance(c, Fraction):
                entry["num"] = c.numerator
                entry["den"] = c.denominator
            elif isinstance(c, sympy.Basic):
                entry["expr"] = str(c)
            else:
                entry["value"] = number_to_json(c)
            terms.append(entry)
        return {"vars": variables, "terms": terms}

    @classmethod
    def from_json(cls, data):
        variables = data["vars"]
        pairs = []
        for entry in data["terms"]:
            if "num" in entry:
                c = Fraction(int(entry["num"]), int(entry.get("den", 1)))
            elif "expr" in entry:
                c = sympy.sympify(entry["expr"])
            else:
                c = as_number(entry["value"])
            pairs.append((entry["exp"], c))
        return cls.from_terms(len(variables), pairs)


def _to_sympy(value):
    value = as_number(value)
    if isinstance(value, Fraction):
        return sympy.Rational(value.numerator, value.denominator)
    return sympy.sympify(value)


def _split_sign(c):
    if isinstance(c, sympy.Basic):
        if c.could_extract_minus_sign():
            return True, -c
        return False, c
    if isinstance(c, complex):
        return False, c
    if c < 0:
        return True, -c
    return False, c


def _coefficient_text(c, alone):
    if isinstance(c, sympy.Basic):
        text = str(c)
        if isinstance(c, (sympy.Symbol, sympy.Mul, sympy.Pow)) and not text.startswith("-"):
            return text
        return f"({text})"
    if isinstance(c, complex):
        return f"({c.real}{c.imag:+}j)"
    if isinstance(c, Fraction):
        return str(c)
    return repr(c)


class CompiledPolynomial:
    """
    numpy form of a polynomial for repeated numeric evaluation:
    an integer exponent matrix and a complex coefficient vector.
    """

    def __init__(self, polynomial):
        if polynomial.free_symbols():
            raise EvaluationError("substitute kinematic symbols before numeric evaluation")
        self.nvars = polynomial.nvars
        support = polynomial.support
        self.exponents = np.array(support, dtype=np.int64).reshape(len(support), self.nvars)
        self.coefficients = np.array(
            [complex(c) for c in polynomial.coefficients], dtype=np.complex128
        )
        self._partials = None
        self._polynomial = polynomial

    def monomials(self, x):
        x = np.asarray(x, dtype=np.complex128)
        return np.prod(x[..., None, :] ** self.exponents, axis=-1)

    def __call__(self, x):
        if not len(self.coefficients):
            return np.zeros(np.shape(x)[:-1], dtype=np.complex128)
        return self.monomials(x) @ self.coefficients

    def gradient(self, x):
        """Vector of partial derivatives at a single point."""
        if self._partials is None:
            self._partials = [self._polynomial.partial(j).compile() for j in range(self.nvars)]
        return np.array([p(x) for p in self._partials], dtype=np.complex128)
