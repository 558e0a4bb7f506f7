"""
Quadrature backends for the sector integrals.

    - monte_carlo: importance sampling with Exp(rate_k) in every sector
      coordinate, batches seeded by (seed, sector, batch)
    - gauss_jacobi: tensor rule in t = exp(-z) for n <= 2, where the
      exponential weight becomes the Jacobi weight t^(rate - 1)
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.special import roots_jacobi

from eulerlab.settings_utils import get_setting, get_thread_count

from .exceptions import QuadratureError
from .sectors import SectorIntegrand

logger = logging.getLogger(__name__)

MONTE_CARLO = "sectors"
GAUSS = "gauss"
SADDLE = "saddle"


def _complex_json(value):
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    return value


@dataclass
class SectorEstimate:
    index: int
    estimate: complex
    # componentwise standard errors, real + 1j * imaginary
    std_error: complex
    samples: int
    lower: float = None
    upper: float = None

    def to_json(self):
        data = {
            "index": self.index,
            "estimate": _complex_json(self.estimate),
            "std_error": _complex_json(self.std_error),
            "samples": self.samples,
        }
        if self.lower is not None:
            data["bounds"] = [self.lower, self.upper]
        return data


@dataclass
class QuadratureResult:
    """
    value = exp(log_scale) * estimate. log_scale stays nonzero only when the
    scale factor is not representable as a float.
    """

    estimate: complex
    std_error: complex
    samples: int
    seed: int
    method: str
    sectors: list = field(default_factory=list)
    log_scale: float = 0.0
    small_rates: bool = False

    @property
    def value(self):
        return math.exp(self.log_scale) * self.estimate

    @property
    def error(self):
        return math.exp(self.log_scale) * self.std_error

    def rescaled(self, log_factor):
        """The result multiplied by exp(log_factor)."""
        total = self.log_scale + log_factor
        if abs(total) > 600:
            return replace(self, log_scale=total)
        factor = math.exp(total)
        sectors = [
            replace(e, estimate=e.estimate * factor, std_error=e.std_error * factor,
                    lower=None if e.lower is None else e.lower * factor,
                    upper=None if e.upper is None else e.upper * factor)
            for e in self.sectors
        ]
        return replace(
            self,
            estimate=self.estimate * factor,
            std_error=self.std_error * factor,
            sectors=sectors,
            log_scale=0.0,
        )

    def to_json(self):
        return {
            "estimate": _complex_json(self.estimate),
            "std_error": _complex_json(self.std_error),
            "log_scale": self.log_scale,
            "samples": self.samples,
            "seed": self.seed,
            "method": self.method,
            "small_rates": self.small_rates,
            "sectors": [e.to_json() for e in self.sectors],
        }


def _real_if_possible(value):
    value = complex(value)
    return value.real if value.imag == 0 else value


def _batch_moments(integrand, rates, seed, sector, batch, size):
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), sector, batch]))
    Z = rng.exponential(scale=1.0 / rates, size=(size, len(rates)))
    values = integrand(Z)
    re, im = values.real, np.imag(values)
    return re.sum(), (re * re).sum(), im.sum(), (im * im).sum(), size


def _combine(moments, count):
    re_sum = sum(m[0] for m in moments)
    re_sq = sum(m[1] for m in moments)
    im_sum = sum(m[2] for m in moments)
    im_sq = sum(m[3] for m in moments)
    mean = complex(re_sum, im_sum) / count
    if count > 1:
        var_re = max(re_sq / count - mean.real ** 2, 0.0) * count / (count - 1)
        var_im = max(im_sq / count - mean.imag ** 2, 0.0) * count / (count - 1)
    else:
        var_re = var_im = 0.0
    return mean, complex(math.sqrt(var_re / count), math.sqrt(var_im / count))


def monte_carlo(spec, sectors, samples, seed, threads=None):
    """
    Importance-sampled estimate of every sector integral.

    The samples are split evenly over the sectors. Each (sector, batch)
    pair draws from its own seed sequence and the reduction runs in sector
    then batch order, so the estimate does not depend on `threads`.
    """
    batch_size = get_setting("EULER_BATCH_SIZE", 65536)
    threads = threads or get_setting("EULER_THREADS", None) or get_thread_count()
    per_sector = max(2, math.ceil(samples / len(sectors)))

    integrands = [SectorIntegrand(spec, sector) for sector in sectors]
    rates = [np.array([float(r) for r in sector.rates]) for sector in sectors]
    work = []
    for k in range(len(sectors)):
        for b, start in enumerate(range(0, per_sector, batch_size)):
            work.append((k, b, min(batch_size, per_sector - start)))

    def run(item):
        k, b, size = item
        return _batch_moments(integrands[k], rates[k], seed, k, b, size)

    with ThreadPoolExecutor(max_workers=threads) as executor:
        moments = list(executor.map(run, work))

    estimates = []
    for k, sector in enumerate(sectors):
        mine = [m for (j, _, _), m in zip(work, moments) if j == k]
        mean, error = _combine(mine, per_sector)
        scale = float(sector.envelope_volume())
        estimate = SectorEstimate(k, _real_if_possible(mean * scale), _real_if_possible(error * scale), per_sector)
        if spec.is_real():
            estimate.lower, estimate.upper = integrands[k].bounds(spec)
        estimates.append(estimate)
        logger.debug(f"monte_carlo: sector {k} estimate {estimate.estimate} +- {estimate.std_error}")
    return estimates


def _jacobi_rule(rate, nodes):
    """Nodes in z and weights for the integral of exp(-rate z) h(z) over z >= 0."""
    if rate <= 0:
        raise QuadratureError(f"nonpositive rate {rate} in the Gauss-Jacobi rule")
    u, w = roots_jacobi(nodes, 0.0, rate - 1.0)
    t = (1.0 + u) / 2.0
    return -np.log(t), w * 2.0 ** (-rate)


def gauss_jacobi(spec, sectors, nodes=None):
    """
    Deterministic tensor rule for n <= 2; the integrand is a rational
    function of t = exp(-z) because every shifted exponent pairs to a
    nonnegative integer with the sector rays.
    """
    if spec.nvars > 2:
        raise QuadratureError(f"the Gauss-Jacobi backend handles n <= 2, got n = {spec.nvars}")
    nodes = nodes or get_setting("EULER_GAUSS_NODES", 64)
    estimates = []
    for k, sector in enumerate(sectors):
        integrand = SectorIntegrand(spec, sector)
        rules = [_jacobi_rule(float(rate), nodes) for rate in sector.rates]
        grids = np.meshgrid(*[z for z, _ in rules], indexing="ij")
        weights = np.ones_like(grids[0])
        for axis, (_, w) in enumerate(rules):
            shape = [1] * len(rules)
            shape[axis] = nodes
            weights = weights * w.reshape(shape)
        Z = np.stack([g.ravel() for g in grids], axis=1)
        total = complex(np.sum(weights.ravel() * integrand(Z))) * sector.determinant
        estimate = SectorEstimate(k, _real_if_possible(total), 0.0, nodes ** spec.nvars)
        if spec.is_real():
            estimate.lower, estimate.upper = integrand.bounds(spec)
        estimates.append(estimate)
    return estimates


def combine_sectors(estimates, samples, seed, method, small_rates=False):
    """Sum of the sector estimates with errors added in quadrature."""
    total = sum((complex(e.estimate) for e in estimates), 0j)
    var_re = sum(complex(e.std_error).real ** 2 for e in estimates)
    var_im = sum(complex(e.std_error).imag ** 2 for e in estimates)
    return QuadratureResult(
        estimate=_real_if_possible(total),
        std_error=_real_if_possible(complex(math.sqrt(var_re), math.sqrt(var_im))),
        samples=samples,
        seed=seed,
        method=method,
        sectors=list(estimates),
        small_rates=small_rates,
    )
