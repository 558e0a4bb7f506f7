import hashlib
import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction

from .exceptions import SpecError
from .helpers import as_number, imag_part, number_to_json, real_part, to_fraction
from .polynomials import LaurentPolynomial

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class IntegralSpec:
    """
    The integral of f_1^{-s_1}...f_l^{-s_l} x^nu dx/x.

    `positive` marks positive-coefficient mode: the integral is taken over
    the positive orthant and every coefficient must be a positive number.
    """

    polys: tuple
    s: tuple
    nu: tuple
    variables: tuple = field(default=())
    positive: bool = True

    def __post_init__(self):
        polys = tuple(self.polys)
        object.__setattr__(self, "polys", polys)
        object.__setattr__(self, "s", tuple(as_number(v) for v in self.s))
        object.__setattr__(self, "nu", tuple(as_number(v) for v in self.nu))
        if not polys:
            raise SpecError("at least one polynomial factor is required")
        n = polys[0].nvars
        if any(f.nvars != n for f in polys):
            raise SpecError("all polynomial factors must use the same variables")
        if any(f.is_zero() for f in polys):
            raise SpecError("zero polynomial among the factors")
        if any(f.free_symbols() for f in polys):
            raise SpecError("substitute kinematic symbols before building an integral")
        if len(self.s) != len(polys):
            raise SpecError(f"{len(self.s)} exponents s for {len(polys)} factors")
        if len(self.nu) != n:
            raise SpecError(f"{len(self.nu)} exponents nu for {n} variables")
        variables = tuple(self.variables) or tuple(f"x{j + 1}" for j in range(n))
        if len(variables) != n:
            raise SpecError(f"{len(variables)} variable names for {n} variables")
        object.__setattr__(self, "variables", variables)
        if self.positive:
            for i, f in enumerate(polys):
                if not f.is_positive():
                    raise SpecError(
                        f"positive-coefficient mode: factor {i + 1} ({f.to_text(variables)}) "
                        "has a non-positive coefficient"
                    )

    @property
    def nvars(self):
        return self.polys[0].nvars

    @property
    def nfactors(self):
        return len(self.polys)

    def is_exact(self):
        return all(isinstance(v, Fraction) for v in self.s + self.nu) and all(
            f.is_exact() for f in self.polys
        )

    def is_real(self):
        return all(imag_part(v) == 0 for v in self.s + self.nu)

    def real_s(self, tolerance=1e-9):
        return tuple(to_fraction(real_part(v), tolerance) for v in self.s)

    def real_nu(self, tolerance=1e-9):
        return tuple(to_fraction(real_part(v), tolerance) for v in self.nu)

    def with_parameters(self, s=None, nu=None):
        return IntegralSpec(
            self.polys,
            self.s if s is None else tuple(s),
            self.nu if nu is None else tuple(nu),
            self.variables,
            self.positive,
        )

    def scaled(self, delta):
        """Exponents (s/delta, nu/delta) of the delta-rescaled integral."""
        delta = as_number(delta)
        if isinstance(delta, float):
            delta = Fraction(delta)
        if delta == 1:
            return self
        return self.with_parameters(
            tuple(v / delta for v in self.s), tuple(v / delta for v in self.nu)
        )

    def shifted(self, shift):
        """Parameters moved by an integer vector (Δs, Δnu)."""
        l = self.nfactors
        return self.with_parameters(
            tuple(v + d for v, d in zip(self.s, shift[:l])),
            tuple(v + d for v, d in zip(self.nu, shift[l:])),
        )

    def to_json(self):
        return {
            "vars": list(self.variables),
            "f": [f.to_text(self.variables) for f in self.polys],
            "s": [number_to_json(v) for v in self.s],
            "nu": [number_to_json(v) for v in self.nu],
            "positive": self.positive,
        }

    def cache_key(self):
        payload = json.dumps(self.to_json(), sort_keys=True)
        return hashlib.sha256(payload.encode()).hexdigest()[:32]


def spec_from_texts(texts, variables, s, nu, positive=True, symbols=None):
    """Build an IntegralSpec from expression strings; `symbols` maps kinematic names to values."""
    from .parsing import parse

    symbols = symbols or {}
    polys = []
    for text in texts:
        f = parse(text, variables, symbols=list(symbols))
        if symbols:
            f = f.substitute(symbols)
        polys.append(f)
    return IntegralSpec(tuple(polys), tuple(s), tuple(nu), tuple(variables), positive)


def polys_only(polys):
    """Check a bare list of factors the way IntegralSpec would, without exponents."""
    polys = tuple(polys)
    if not polys:
        raise SpecError("at least one polynomial factor is required")
    if any(not isinstance(f, LaurentPolynomial) for f in polys):
        raise SpecError("factors must be Laurent polynomials")
    if any(f.nvars != polys[0].nvars for f in polys):
        raise SpecError("all polynomial factors must use the same variables")
    if any(f.is_zero() for f in polys):
        raise SpecError("zero polynomial among the factors")
    return polys
