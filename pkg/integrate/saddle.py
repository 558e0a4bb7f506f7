"""
Importance sampler centred at the positive critical point, for exponents
that make the integrand sharply peaked (the delta -> 0 regime).

In z = log x the integral is the integral of L(e^z) dz. The proposal is a
multivariate Student t around log a with the inverse of the toric Hessian
of -log L as its shape, and weights are reported relative to L(a).
"""

import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy.special import logsumexp
from scipy.stats import multivariate_t

from critpoints.newton import positive_critical_point
from critpoints.systems import factors, log_coordinates_hessian
from eulerlab.settings_utils import get_setting, get_thread_count

from .quadrature import SADDLE, QuadratureResult, SectorEstimate, _combine

logger = logging.getLogger(__name__)

DEGREES_OF_FREEDOM = 4


def _log_likelihood(spec_factors, s, nu, Z):
    value = Z @ nu
    for s_i, factor in zip(s, spec_factors):
        value = value - s_i * logsumexp(factor.log_coefficients + Z @ factor.exponents.T, axis=1)
    return value


def saddle_point_estimate(spec, samples, seed, threads=None):
    """
    Raises:
        CriticalPointError: the positive critical point does not exist
    """
    critical = positive_critical_point(spec)
    spec_factors = factors(spec)
    s = np.array([float(v) for v in spec.s])
    nu = np.array([float(v) for v in spec.nu])
    shape = np.linalg.inv(-log_coordinates_hessian(spec, critical.z))
    proposal = multivariate_t(loc=critical.z, shape=shape, df=DEGREES_OF_FREEDOM)
    peak = critical.log_likelihood

    batch_size = get_setting("EULER_BATCH_SIZE", 65536)
    threads = threads or get_setting("EULER_THREADS", None) or get_thread_count()
    samples = max(2, int(samples))
    work = [(b, min(batch_size, samples - start)) for b, start in enumerate(range(0, samples, batch_size))]

    def run(item):
        b, size = item
        rng = np.random.default_rng(np.random.SeedSequence([int(seed), 0x5AD, b]))
        Z = proposal.rvs(size=size, random_state=rng).reshape(size, spec.nvars)
        log_weights = _log_likelihood(spec_factors, s, nu, Z) - peak - proposal.logpdf(Z).reshape(size)
        values = np.exp(log_weights)
        return values.sum(), (values * values).sum(), 0.0, 0.0, size

    with ThreadPoolExecutor(max_workers=threads) as executor:
        moments = list(executor.map(run, work))
    mean, error = _combine(moments, samples)
    logger.info(f"saddle_point_estimate: L(a)^-1 * I = {mean.real} +- {error.real}, {samples} samples")
    return QuadratureResult(
        estimate=mean.real,
        std_error=error.real,
        samples=samples,
        seed=seed,
        method=SADDLE,
        sectors=[SectorEstimate(0, mean.real, error.real, samples)],
        log_scale=peak,
    )

