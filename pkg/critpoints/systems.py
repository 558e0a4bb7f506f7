"""
Critical-point equations of the log-likelihood

    log L = sum_j nu_j log x_j - sum_i s_i log f_i

Functions:
    - critical_system: rational equations g_j and their cleared polynomial form
    - polynomial_expression: a Laurent polynomial as a sympy expression
    - toric_hessian: M_jk = x_j d_j (x_k d_k log L) and det(-M)
    - moment_map: x -> (x_j sum_i s_i f_i^-1 d_j f_i)
    - critical_likelihood: log L on the principal branch
    - univariate_roots: companion-matrix roots of a one-variable cleared system
"""

import logging
from dataclasses import dataclass

import numpy as np
import sympy
from scipy.special import logsumexp, softmax

from eulerlab.settings_utils import get_setting
from laurent.exceptions import EvaluationError
from laurent.helpers import to_complex, to_sympy
from laurent.polynomials import LaurentPolynomial

from .exceptions import CriticalPointError, DegenerateSystemError

logger = logging.getLogger(__name__)


class Factor:
    """Support matrix and coefficient vector of one f_i."""

    def __init__(self, polynomial):
        self.polynomial = polynomial
        support = polynomial.support
        self.exponents = np.array(support, dtype=np.int64).reshape(len(support), polynomial.nvars)
        self.coefficients = np.array([complex(c) for c in polynomial.coefficients], dtype=np.complex128)
        self.positive = polynomial.is_positive()
        if self.positive:
            self.log_coefficients = np.log(self.coefficients.real)

    def terms(self, x):
        x = np.asarray(x, dtype=np.complex128)
        return self.coefficients * np.prod(x ** self.exponents, axis=1)

    def weights(self, x):
        """c_a x^a / f(x) and f(x)."""
        terms = self.terms(x)
        total = terms.sum()
        return terms / total, total

    def log_weights(self, z):
        """Softmax weights and log f(e^z), for positive coefficients."""
        logits = self.log_coefficients + self.exponents @ np.asarray(z, dtype=float)
        return softmax(logits), logsumexp(logits)


def factors(spec):
    return [Factor(f) for f in spec.polys]


def parameters(spec):
    s = np.array([to_complex(v) for v in spec.s], dtype=np.complex128)
    nu = np.array([to_complex(v) for v in spec.nu], dtype=np.complex128)
    return s, nu


def _weight_moments(weights, exponents):
    mean = weights @ exponents
    second = (exponents.T * weights) @ exponents
    return mean, second - np.outer(mean, mean)


@dataclass
class CriticalSystem:
    """
    g_j = nu_j / x_j - sum_i s_i (d_j f_i) / f_i and the cleared
    p_j = x^m_j * (nu_j prod f - sum_i s_i x_j d_j f_i prod_{k != i} f_k),
    where x^m_j only removes negative exponents.
    """

    spec: object
    cleared_polynomials: list
    excluded_locus: LaurentPolynomial
    clearing_exponents: list

    @property
    def nvars(self):
        return self.spec.nvars

    def is_degenerate(self):
        return all(p.is_zero() for p in self.cleared_polynomials)

    def degrees(self):
        return [p.degree() for p in self.cleared_polynomials]

    def rational_equations(self, x):
        """g(x) as a complex vector."""
        x = np.asarray(x, dtype=np.complex128)
        s, nu = parameters(self.spec)
        g = nu / x
        for s_i, factor in zip(s, factors(self.spec)):
            w, f = factor.weights(x)
            g = g - s_i * (w @ factor.exponents) / x
        return g

    def symbolic_equations(self, cleared=False):
        """
        g_j as sympy expressions in the spec's variable names, or with
        cleared=True the numerators of g_j over a common denominator.
        """
        x = sympy.symbols(list(self.spec.variables))
        f = [polynomial_expression(p, x) for p in self.spec.polys]
        equations = []
        for j in range(self.nvars):
            g = to_sympy(self.spec.nu[j]) / x[j]
            for s_i, f_i in zip(self.spec.s, f):
                g -= to_sympy(s_i) * sympy.diff(f_i, x[j]) / f_i
            if cleared:
                g = sympy.expand(sympy.fraction(sympy.together(g))[0])
            equations.append(g)
        return equations

    def residual(self, x):
        return float(np.max(np.abs(self.rational_equations(x))))

    def to_json(self):
        names = self.spec.variables
        return {
            "cleared": [p.to_text(names) for p in self.cleared_polynomials],
            "excluded_locus": self.excluded_locus.to_text(names),
            "degrees": self.degrees(),
            "degenerate": self.is_degenerate(),
            "equations": [str(g) for g in self.symbolic_equations()],
        }


def polynomial_expression(polynomial, x):
    return sympy.Add(*(
        to_sympy(c) * sympy.Mul(*(v**e for v, e in zip(x, a)))
        for a, c in polynomial.terms.items()
    ))


def critical_system(spec):
    n = spec.nvars
    product = LaurentPolynomial.constant(n, 1)
    for f in spec.polys:
        product = product * f
    cofactors = []
    for i in range(spec.nfactors):
        cofactor = LaurentPolynomial.constant(n, 1)
        for k, f in enumerate(spec.polys):
            if k != i:
                cofactor = cofactor * f
        cofactors.append(cofactor)

    cleared, shifts = [], []
    for j in range(n):
        p = product * spec.nu[j]
        for i, f in enumerate(spec.polys):
            p = p - f.euler_derivative(j) * cofactors[i] * spec.s[i]
        shift = tuple(max(0, -k) for k in p.min_exponents()) if not p.is_zero() else (0,) * n
        cleared.append(p.shift(shift))
        shifts.append(shift)

    locus = product
    for j in range(n):
        locus = locus * LaurentPolynomial.variable(n, j)
    system = CriticalSystem(spec, cleared, locus, shifts)
    if system.is_degenerate():
        logger.warning("critical_system: every equation vanishes identically")
    else:
        logger.debug(f"critical_system: degrees {system.degrees()}")
    return system


def on_excluded_locus(spec, x, tolerance=None):
    if tolerance is None:
        tolerance = get_setting("EULER_EXCLUDED_TOL", 1e-10)
    x = np.asarray(x, dtype=np.complex128)
    if np.any(np.abs(x) <= tolerance):
        return True
    return any(abs(factor.terms(x).sum()) <= tolerance for factor in factors(spec))


@dataclass
class ToricHessian:
    matrix: np.ndarray
    determinant: complex
    # det(-M), the Hessian of -log L
    value: complex

    @property
    def degenerate(self):
        return abs(self.value) <= get_setting("EULER_EXCLUDED_TOL", 1e-10)


def toric_hessian(spec, x):
    """
    M = -sum_i s_i Cov_i(alpha) with the weights c_a x^a / f_i(x).

    Raises:
        EvaluationError: x on the excluded locus
    """
    x = np.asarray(x, dtype=np.complex128)
    if on_excluded_locus(spec, x):
        raise EvaluationError(f"toric Hessian requested on the excluded locus at {x.tolist()}")
    s, _ = parameters(spec)
    n = spec.nvars
    M = np.zeros((n, n), dtype=np.complex128)
    for s_i, factor in zip(s, factors(spec)):
        w, _ = factor.weights(x)
        _, covariance = _weight_moments(w, factor.exponents.astype(np.complex128))
        M -= s_i * covariance
    return ToricHessian(M, complex(np.linalg.det(M)), complex(np.linalg.det(-M)))


def log_coordinates_hessian(spec, z):
    """Real toric Hessian at x = e^z for positive coefficients and real s."""
    s = np.array([float(v.real if isinstance(v, complex) else v) for v in spec.s])
    n = spec.nvars
    M = np.zeros((n, n))
    for s_i, factor in zip(s, factors(spec)):
        w, _ = factor.log_weights(z)
        _, covariance = _weight_moments(w, factor.exponents.astype(float))
        M -= s_i * covariance
    return M


def moment_map(polys, s, x):
    """
    mu(x)_j = sum_i s_i E_i[alpha_j], the weighted mean exponent.

    Raises:
        CriticalPointError: nonpositive x or s
    """
    x = np.asarray(x, dtype=float)
    s = np.asarray([float(v) for v in s], dtype=float)
    if np.any(x <= 0) or np.any(s <= 0):
        raise CriticalPointError("the moment map needs strictly positive x and s")
    if len(s) != len(polys):
        raise CriticalPointError(f"{len(s)} exponents s for {len(polys)} factors")
    z = np.log(x)
    mu = np.zeros(len(x))
    for s_i, f in zip(s, polys):
        factor = Factor(f)
        if not factor.positive:
            raise CriticalPointError("the moment map is defined for positive-coefficient factors")
        w, _ = factor.log_weights(z)
        mu += s_i * (w @ factor.exponents)
    return mu


def moment_map_jacobian(polys, s, x):
    """x_j d mu_k / d x_j = sum_i s_i Cov_i, positive definite on the orthant."""
    z = np.log(np.asarray(x, dtype=float))
    n = len(z)
    J = np.zeros((n, n))
    for s_i, f in zip(s, polys):
        factor = Factor(f)
        w, _ = factor.log_weights(z)
        _, covariance = _weight_moments(w, factor.exponents.astype(float))
        J += float(s_i) * covariance
    return J


def critical_likelihood(spec, x):
    x = np.asarray(x, dtype=np.complex128)
    s, nu = parameters(spec)
    value = nu @ np.log(x)
    for s_i, factor in zip(s, factors(spec)):
        value -= s_i * np.log(factor.terms(x).sum())
    return complex(value)


def univariate_roots(system):
    """
    Roots of the cleared polynomial of a one-variable system, by numpy's
    companion matrix, with excluded-locus roots removed.

    Raises:
        DegenerateSystemError: more than one variable, or a vanishing equation
    """
    if system.nvars != 1:
        raise DegenerateSystemError("companion roots are only available for one variable")
    (p,) = system.cleared_polynomials
    if p.is_zero():
        raise DegenerateSystemError("the cleared equation vanishes identically")
    degree = p.degree()
    coefficients = np.zeros(degree + 1, dtype=np.complex128)
    for (k,), c in p:
        coefficients[degree - k] = complex(c)
    roots = np.roots(coefficients)
    return [r for r in roots if not on_excluded_locus(system.spec, [r])]
