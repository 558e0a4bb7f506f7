"""
Shift relations of Euler integrals.

Functions:
    - annihilator_generators: the l + n difference operators killing the
      integral of any spec, from its polynomial factors
    - pochhammer: rising factorial (gamma)_a for any integer a
    - beta_reduction: c^{a,b} with [x^b (1-x)^-a dx/x] = c^{a,b} [dx/x] on (0,1)
    - beta_contiguity_walk: the same coefficient by one-step shifts
    - to_positive_chart: move a unit-interval beta operator to f = 1 + y
    - verify_shift: numeric check of S . I = 0 against quadrature
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

import sympy

from convergence.methods import check_convergence
from eulerlab.settings_utils import get_default_seed, get_setting
from integrate.methods import evaluate
from integrate.quadrature import GAUSS, MONTE_CARLO
from laurent.generators import beta_spec
from laurent.helpers import as_number, number_to_json, parameter_symbols, to_sympy

from .exceptions import BetaReductionError, PochhammerError, ShiftopsError, ShiftVerificationRefused
from .operators import ShiftOperator, point_text

logger = logging.getLogger(__name__)

TOLERANCE_FACTOR = 10


def _is_zero(value):
    if isinstance(value, sympy.Basic):
        return value.is_zero is True
    return value == 0


def _exact(value):
    if isinstance(value, sympy.Basic):
        return value
    return as_number(value)


@dataclass(frozen=True)
class Pochhammer:
    """
    (gamma)_a = gamma (gamma+1) ... (gamma+a-1) for a > 0, 1 for a = 0 and
    1 / ((gamma-1) (gamma-2) ... (gamma+a)) for a < 0.
    """

    base: object
    steps: int

    def factors(self):
        gamma = _exact(self.base)
        if self.steps >= 0:
            return [gamma + k for k in range(self.steps)]
        return [gamma - k for k in range(1, -self.steps + 1)]

    def value(self):
        factors = self.factors()
        product = Fraction(1) if not isinstance(self.base, sympy.Basic) else sympy.Integer(1)
        for x in factors:
            product = product * x
        if self.steps >= 0:
            return product
        for x in factors:
            if _is_zero(x):
                raise PochhammerError(f"({self.base})_{self.steps} has the zero factor {x} in its denominator")
        return 1 / product

    def to_text(self):
        return f"({self.base})_{self.steps}"


def pochhammer(gamma, a):
    """
    Raises:
        PochhammerError: a < 0 and one of gamma-1, ..., gamma+a vanishes
    """
    return Pochhammer(gamma, int(a)).value()


def annihilator_generators(spec):
    """
    1 - sigma_si f_i(sigma_nu) for every factor, then
    sigma_nuj^-1 nu_j - sum_i s_i sigma_si (d f_i / d x_j)(sigma_nu) for every
    variable. Exponents of the factors become shifts in nu.
    """
    l, n = spec.nfactors, spec.nvars
    s_symbols, nu_symbols = parameter_symbols(l, n)
    operators = []
    for i, f in enumerate(spec.polys):
        terms = {(0,) * (l + n): 1}
        for alpha, c in f.terms.items():
            shift = tuple(int(k == i) for k in range(l)) + tuple(alpha)
            terms[shift] = terms.get(shift, 0) - to_sympy(c)
        operators.append(ShiftOperator(l, n, terms))
    for j in range(n):
        down = ShiftOperator.sigma_nu(l, n, j, -1)
        op = down * ShiftOperator.constant(l, n, nu_symbols[j])
        for i, f in enumerate(spec.polys):
            terms = {}
            for alpha, c in f.partial(j).terms.items():
                shift = tuple(int(k == i) for k in range(l)) + tuple(alpha)
                terms[shift] = terms.get(shift, 0) + to_sympy(c)
            op = op - ShiftOperator(l, n, terms).scale(s_symbols[i])
        operators.append(op)
    logger.info(f"annihilator_generators: {l} + {n} operators")
    return operators


def _parameters(s, nu):
    if s is None or nu is None:
        (s_symbol,), (nu_symbol,) = parameter_symbols(1, 1)
        return s_symbol if s is None else to_sympy(s), nu_symbol if nu is None else to_sympy(nu)
    return _exact(s), _exact(nu)


def _finish(value, symbolic):
    if symbolic:
        return sympy.cancel(value)
    return value


def beta_reduction(a, b, s=None, nu=None):
    """
    c^{a,b} = (1-s)_{-a} (nu)_b / (1+nu-s)_{b-a}, the coefficient of
    x^nu (1-x)^-s x^b (1-x)^-a dx/x against x^nu (1-x)^-s dx/x on (0,1).
    Symbolic in s and nu when they are not given.

    Raises:
        BetaReductionError: the coefficient has a pole at (s, nu)
    """
    a, b = int(a), int(b)
    s, nu = _parameters(s, nu)
    symbolic = isinstance(s, sympy.Basic) or isinstance(nu, sympy.Basic)
    try:
        numerator = pochhammer(1 - s, -a) * pochhammer(nu, b)
        denominator = pochhammer(1 + nu - s, b - a)
    except PochhammerError as e:
        raise BetaReductionError(f"c^({a},{b}) is singular at s={s}, nu={nu}: {e.message}")
    if _is_zero(denominator):
        raise BetaReductionError(f"c^({a},{b}) has a pole at s={s}, nu={nu}: (1+nu-s)_{b - a} = 0")
    return _finish(numerator / denominator, symbolic)


def _step_ratio(direction, s, nu):
    """
    Numerator and denominator of I(next) / I(s, nu) for one unit step of
    I(s, nu) = B(nu, 1 - s), and the next point.
    """
    if direction == "s+":
        return s - nu, s, (s + 1, nu)
    if direction == "s-":
        return 1 - s, 1 + nu - s, (s - 1, nu)
    if direction == "nu+":
        return nu, 1 + nu - s, (s, nu + 1)
    return nu - s, nu - 1, (s, nu - 1)


def beta_contiguity_walk(a, b, s=None, nu=None, order=None):
    """
    c^{a,b} as a product of one-step ratios along a lattice path from
    (s, nu) to (s + a, nu + b). `order` is a string of "s" and "n" steps,
    e.g. "nsn" for (a, b) = (1, 2); by default the nu steps come first.

    Raises:
        ShiftopsError: the order does not have |a| s-steps and |b| n-steps
        BetaReductionError: a step passes through a pole
    """
    a, b = int(a), int(b)
    if order is None:
        order = "n" * abs(b) + "s" * abs(a)
    if sorted(order) != sorted("n" * abs(b) + "s" * abs(a)):
        raise ShiftopsError(f"walk order {order!r} does not have {abs(a)} s-steps and {abs(b)} n-steps")
    s, nu = _parameters(s, nu)
    symbolic = isinstance(s, sympy.Basic) or isinstance(nu, sympy.Basic)
    directions = {"s": "s+" if a > 0 else "s-", "n": "nu+" if b > 0 else "nu-"}
    value = sympy.Integer(1) if symbolic else Fraction(1)
    point = (s, nu)
    for step in order:
        numerator, denominator, following = _step_ratio(directions[step], *point)
        if _is_zero(denominator):
            raise BetaReductionError(
                f"the walk step {directions[step]} at s={point[0]}, nu={point[1]} divides by zero"
            )
        value = value * numerator / denominator
        point = following
    logger.debug(f"beta_contiguity_walk: ({a}, {b}) along {order!r}")
    return _finish(value, symbolic)


def unit_interval_point(s, nu):
    """(s~, nu) with x^nu (1-x)^-s dx/x on (0,1) equal to y^nu (1+y)^-s~ dy/y on (0, inf)."""
    return nu + 1 - s, nu


def to_positive_chart(op):
    """
    The unit-interval operator in (s, nu) written for f = 1 + y in (s~, nu):
    sigma_s -> sigma_s~^-1, sigma_nu -> sigma_s~ sigma_nu, s -> nu + 1 - s~.
    """
    if (op.nfactors, op.nvars) != (1, 1):
        raise ShiftopsError("the unit-interval chart is defined for the one-variable beta family")
    (s,), (nu,) = parameter_symbols(1, 1)
    terms = {}
    for (a, b), c in op.terms.items():
        terms[(b - a, b)] = c.xreplace({s: nu + 1 - s})
    return ShiftOperator(1, 1, terms)


def beta_unit_integral(s, nu, method=GAUSS, samples=None, seed=None):
    """x^nu (1-x)^-s dx/x on (0,1), evaluated in the positive chart."""
    s_tilde, nu = unit_interval_point(_exact(s), _exact(nu))
    return evaluate(beta_spec(s_tilde, nu), samples=samples, seed=seed, method=method)


@dataclass
class ShiftTerm:
    shift: tuple
    s: tuple
    nu: tuple
    coefficient: object
    estimate: complex = 0
    std_error: float = 0.0

    def to_json(self):
        return {
            "shift": list(self.shift),
            "s": [number_to_json(x) for x in self.s],
            "nu": [number_to_json(x) for x in self.nu],
            "coefficient": number_to_json(self.coefficient),
            "estimate": number_to_json(self.estimate),
            "std_error": self.std_error,
        }


@dataclass
class ShiftVerification:
    operator: ShiftOperator
    spec: object
    method: str
    seed: int
    total: complex = 0
    error: float = 0.0
    threshold: float = 0.0
    terms: list = field(default_factory=list)
    skipped: list = field(default_factory=list)

    @property
    def passed(self):
        return abs(self.total) <= self.threshold

    def to_json(self):
        return {
            "spec": self.spec.to_json(),
            "operator": self.operator.to_json(),
            "method": self.method,
            "seed": self.seed,
            "total": number_to_json(self.total),
            "error": self.error,
            "threshold": self.threshold,
            "passed": self.passed,
            "terms": [t.to_json() for t in self.terms],
            "skipped": [list(u) for u in self.skipped],
        }


def _real_if_possible(value):
    value = complex(value)
    return value.real if value.imag == 0 else value


def verify_shift(spec, op, samples=None, seed=None, method=MONTE_CARLO, threads=None):
    """
    Evaluate sum of g_u(s, nu) I(s + u) with every I from quadrature. The
    relation holds when the sum is below 10 propagated standard errors, or
    below EULER_SHIFT_REL_TOL times the sum of |g_u I| for deterministic rules.

    Raises:
        ShiftopsError: not a positive-coefficient spec, or the operator has the wrong arity
        ShiftVerificationRefused: a shifted point lies outside the convergence domain
    """
    if not spec.positive:
        raise ShiftopsError("shift relations are verified in positive-coefficient mode only")
    if (op.nfactors, op.nvars) != (spec.nfactors, spec.nvars):
        raise ShiftopsError(
            f"operator acts on ({op.nfactors}, {op.nvars}) parameters, spec has ({spec.nfactors}, {spec.nvars})"
        )
    if seed is None:
        seed = get_default_seed()
    report = ShiftVerification(operator=op, spec=spec, method=method, seed=seed)

    for u, c in op.coefficients_at(spec.s, spec.nu).items():
        if c == 0:
            report.skipped.append(u)
            continue
        shifted = spec.shifted(u)
        convergence = check_convergence(shifted)
        if not convergence.converges:
            raise ShiftVerificationRefused(
                f"shift {u} moves to {point_text(shifted.s, shifted.nu)}, where the integral "
                f"does not converge ({', '.join(convergence.reasons)})",
                point=(shifted.s, shifted.nu),
            )
        report.terms.append(ShiftTerm(u, shifted.s, shifted.nu, c))

    variance, scale = 0.0, 0.0
    for k, term in enumerate(report.terms):
        shifted = spec.with_parameters(term.s, term.nu)
        result = evaluate(shifted, samples=samples, seed=seed + k, method=method, threads=threads, check=False)
        term.estimate = _real_if_possible(result.value)
        term.std_error = abs(complex(result.error))
        weight = abs(complex(term.coefficient))
        report.total += complex(term.coefficient) * complex(term.estimate)
        variance += (weight * term.std_error) ** 2
        scale += weight * abs(complex(term.estimate))

    report.total = _real_if_possible(report.total)
    report.error = math.sqrt(variance)
    relative = get_setting("EULER_SHIFT_REL_TOL", 1e-8)
    report.threshold = max(TOLERANCE_FACTOR * report.error, relative * scale)
    logger.info(
        f"verify_shift: |S.I| = {abs(report.total):.3e}, threshold {report.threshold:.3e}, "
        f"{'passed' if report.passed else 'failed'} ({len(report.terms)} terms, {method})"
    )
    return report
