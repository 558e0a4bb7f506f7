"""
Numerical evaluation of Euler-Mellin integrals over the positive orthant.

Functions:
    - evaluate: the integral at (s, nu) by sector Monte Carlo, the n <= 2
      Gauss-Jacobi rule or the saddle-point sampler
    - evaluate_idelta: I(delta) = delta^-n * integral at (s/delta, nu/delta)
"""

import logging
import math

from convergence.methods import check_convergence
from eulerlab.settings_utils import get_default_seed, get_setting

from .exceptions import IntegrationError
from .quadrature import GAUSS, MONTE_CARLO, SADDLE, combine_sectors, gauss_jacobi, monte_carlo
from .saddle import saddle_point_estimate
from .sectors import sector_decompose

logger = logging.getLogger(__name__)

METHODS = (MONTE_CARLO, GAUSS, SADDLE)
DEFAULT_SAMPLES = 100000


def _has_small_rates(sectors):
    threshold = get_setting("EULER_SMALL_RATE", 1e-2)
    rates = [float(r) for sector in sectors for r in sector.rates]
    return min(rates) < threshold * max(rates)


def evaluate(spec, samples=None, seed=None, method=MONTE_CARLO, threads=None, check=True):
    """
    Integral of f^-s x^nu dx/x over the positive orthant.

    Raises:
        IntegrationError: not positive-coefficient mode, or nu outside int P(s)
        QuadratureError: a backend could not be applied
    """
    if method not in METHODS:
        raise IntegrationError(f"unknown quadrature method {method!r}, expected one of {', '.join(METHODS)}")
    if not spec.positive:
        raise IntegrationError("numerical evaluation over the positive orthant needs positive coefficients")
    if check:
        report = check_convergence(spec)
        if not report.converges:
            raise IntegrationError(
                f"the integral does not converge ({', '.join(report.reasons)}); "
                "shift the parameters into int P(s) first"
            )
    samples = int(samples or DEFAULT_SAMPLES)
    if seed is None:
        seed = get_default_seed()

    if method == SADDLE:
        return saddle_point_estimate(spec, samples, seed, threads=threads).rescaled(0.0)

    sectors = sector_decompose(spec)
    small_rates = _has_small_rates(sectors)
    if small_rates:
        logger.warning(
            "evaluate: some importance-sampling rates are small relative to the others; "
            "nu is close to the boundary of P(s) and the variance may be large"
        )
    if method == GAUSS:
        estimates = gauss_jacobi(spec, sectors)
        samples = sum(e.samples for e in estimates)
    else:
        estimates = monte_carlo(spec, sectors, samples, seed, threads=threads)
        samples = sum(e.samples for e in estimates)
    result = combine_sectors(estimates, samples, seed, method, small_rates)
    logger.info(f"evaluate: {result.estimate} +- {result.std_error} ({method}, {len(sectors)} sectors)")
    return result


def evaluate_idelta(spec, delta, samples=None, seed=None, method=MONTE_CARLO, threads=None):
    """I(delta); delta = 1 gives exactly evaluate(spec)."""
    if float(delta) <= 0:
        raise IntegrationError(f"delta must be positive, got {delta}")
    scaled = spec.scaled(delta)
    result = evaluate(scaled, samples=samples, seed=seed, method=method, threads=threads)
    if delta == 1:
        return result
    return result.rescaled(-spec.nvars * math.log(float(delta)))
