"""
Integrands of the two physics families.

Functions:
    - moduli_matrix / moduli_minors: positive parametrization of M_{0,m}
    - moduli_spec: the string-amplitude integral over M_{0,m}
    - feynman_spec: Lee-Pomeransky integrand U + F at numeric kinematics
    - beta_spec: the beta integral in the positive chart or on (0,1)
"""

import logging
from fractions import Fraction

from .exceptions import LaurentError
from .integrals import IntegralSpec
from .polynomials import LaurentPolynomial
from .graphs import symanzik

logger = logging.getLogger(__name__)


def moduli_matrix(m):
    """
    The 2 x m matrix with rows (1, ..., 1, 0) and
    (0, 1, 1+x1, 1+x1+x2, ..., 1+x1+...+xn, 1), n = m - 3.
    """
    if m < 4:
        raise LaurentError(f"moduli spaces M_0,m need m >= 4, got {m}")
    n = m - 3
    one = LaurentPolynomial.constant(n, 1)
    zero = LaurentPolynomial(n)
    top = [one] * (m - 1) + [zero]
    bottom = [zero, one]
    partial = one
    for j in range(n):
        partial = partial + LaurentPolynomial.variable(n, j)
        bottom.append(partial)
    bottom.append(one)
    return [top, bottom]


def moduli_minors(m, with_labels=False):
    """
    2x2 minors f_ij (1 <= i, i + 1 < j < m, 1-based columns) of the moduli
    matrix, dropping constants and single-variable minors.
    """
    top, bottom = moduli_matrix(m)
    minors = []
    for i in range(1, m + 1):
        for j in range(i + 2, m):
            f = top[i - 1] * bottom[j - 1] - top[j - 1] * bottom[i - 1]
            if f.is_zero() or f.is_constant():
                continue
            if f.is_monomial() and sum(abs(e) for e in f.support[0]) == 1:
                continue
            minors.append(((i, j), f))
    logger.debug(f"moduli_minors: m={m} gives {len(minors)} factors")
    if with_labels:
        return minors
    return [f for _, f in minors]


def moduli_spec(m, s=None, nu=None):
    polys = moduli_minors(m)
    n = m - 3
    s = tuple(s) if s is not None else (Fraction(1),) * len(polys)
    nu = tuple(nu) if nu is not None else (Fraction(1),) * n
    return IntegralSpec(tuple(polys), s, nu)


def feynman_spec(graph, kinematics, s, nu):
    """
    G^{-s} x^nu dx/x with G = U + F and the kinematic symbols of F replaced
    by the numbers in `kinematics`, e.g. {"t1": -1, "t2": -1, "t3": -1}.
    """
    U, F = symanzik(graph)
    G = U + F.substitute(kinematics)
    return IntegralSpec((G,), (s,), tuple(nu))


def beta_spec(s, nu, unit_interval=False):
    """
    Positive chart: f = 1 + y, integral Gamma(nu) Gamma(s - nu) / Gamma(s).
    Unit interval: f = 1 - x on (0,1), not a positive-coefficient spec.
    """
    if unit_interval:
        f = LaurentPolynomial(1, {(0,): 1, (1,): -1})
        return IntegralSpec((f,), (s,), (nu,), ("x",), positive=False)
    f = LaurentPolynomial(1, {(0,): 1, (1,): 1})
    return IntegralSpec((f,), (s,), (nu,), ("y",))
