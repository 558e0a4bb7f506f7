"""
Complex critical points of log L and the Euler characteristic count.

The cleared critical equations are solved by total-degree homotopy; the
endpoints are filtered against the excluded locus x_1...x_n f_1...f_l = 0,
certified on the rational equations at 30 digits and deduplicated.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np
from tqdm import tqdm

from eulerlab.settings_utils import get_default_seed, get_setting
from laurent.integrals import IntegralSpec, polys_only
from polytope.geometry import weighted_sum

from .cache_utils import (
    get_cached_critical_points,
    get_critical_cache_key,
    set_cached_critical_points,
)
from .exceptions import (
    DegenerateSystemError,
    InconsistentCountError,
    NonGenericParametersError,
)
from .homotopy import DIVERGED, ENDGAME_DIGITS, FAILED, SINGULAR, MpPolynomial, mp_number, solve_total_degree
from .systems import critical_system, on_excluded_locus, toric_hessian

logger = logging.getLogger(__name__)

# a failed path this close to the excluded locus is an extraneous root of the cleared system
NEAR_LOCUS = 1e-4
LARGE_NORM = 1e4


@dataclass
class CriticalPointSet:
    points: list = field(default_factory=list)
    residuals: list = field(default_factory=list)
    # H of -log L per point
    hessians: list = field(default_factory=list)
    paths: int = 0
    failures: int = 0
    diverged: int = 0
    excluded: int = 0
    seed: int = 0

    @property
    def count(self):
        return len(self.points)

    def positive_points(self, tolerance=1e-8):
        return [
            x for x in self.points
            if np.all(np.abs(x.imag) < tolerance) and np.all(x.real > 0)
        ]

    def to_json(self):
        return {
            "count": self.count,
            "points": [[{"re": v.real, "im": v.imag} for v in x] for x in self.points],
            "residuals": list(self.residuals),
            "hessians": [{"re": h.real, "im": h.imag} for h in self.hessians],
            "paths": self.paths,
            "failures": self.failures,
            "diverged": self.diverged,
            "excluded": self.excluded,
            "seed": self.seed,
        }


def certified_residual(spec, x, digits=ENDGAME_DIGITS):
    """max_j |g_j(x)| evaluated at `digits` precision."""
    with mpmath.workdps(digits):
        point = [mpmath.mpc(v.real, v.imag) for v in np.asarray(x, dtype=np.complex128)]
        s = [mp_number(v) for v in spec.s]
        nu = [mp_number(v) for v in spec.nu]
        values = [MpPolynomial(f)(point) for f in spec.polys]
        worst = mpmath.mpf(0)
        for j in range(spec.nvars):
            g = nu[j] / point[j]
            for i, f in enumerate(spec.polys):
                g -= s[i] * MpPolynomial(f.partial(j))(point) / values[i]
            worst = max(worst, abs(g))
        return float(worst)


def _sort_key(x):
    return tuple((round(v.real, 8), round(v.imag, 8)) for v in x)


def _check_dimension(spec):
    P = weighted_sum(spec.polys, [1] * spec.nfactors)
    if not P.is_full_dimensional():
        raise DegenerateSystemError(
            "the Minkowski sum of the Newton polytopes is lower-dimensional; "
            "the critical locus is positive-dimensional"
        )


def all_critical_points(spec, seed=None, use_cache=True, threads=None):
    """
    All isolated critical points of log L off the excluded locus.

    Raises:
        DegenerateSystemError: vanishing equations or degenerate polytopes
        NonGenericParametersError: a degenerate critical point was found
    """
    if seed is None:
        seed = get_default_seed()
    cache_key = get_critical_cache_key(spec, seed)
    if use_cache:
        cached = get_cached_critical_points(cache_key)
        if cached is not None:
            return cached

    system = critical_system(spec)
    if system.is_degenerate():
        raise DegenerateSystemError("the critical equations vanish identically (s = nu = 0?)")
    _check_dimension(spec)

    result = CriticalPointSet(seed=seed)
    if any(d == 0 for d in system.degrees()):
        logger.info("all_critical_points: a nonzero constant equation, no critical points")
        return result

    residual_tol = get_setting("EULER_RESIDUAL_TOL", 1e-8)
    dedupe_tol = get_setting("EULER_DEDUPE_TOL", 1e-6)
    paths = solve_total_degree(system.cleared_polynomials, seed, threads=threads)
    result.paths = len(paths)

    candidates = []
    for path in paths:
        if path.status == DIVERGED:
            result.diverged += 1
            continue
        if path.status == FAILED:
            if on_excluded_locus(spec, path.x, NEAR_LOCUS):
                result.excluded += 1
            elif path.t > 0.99 and np.linalg.norm(path.x) > LARGE_NORM:
                result.diverged += 1
            else:
                result.failures += 1
            continue
        if path.status == SINGULAR:
            if on_excluded_locus(spec, path.x, NEAR_LOCUS):
                result.excluded += 1
                continue
            raise NonGenericParametersError(
                f"path {path.index} ends at a singular critical point {path.x.tolist()} "
                f"(winding number {path.winding}); perturb (s, nu) to generic values"
            )
        if on_excluded_locus(spec, path.x):
            result.excluded += 1
            continue
        residual = certified_residual(spec, path.x)
        if residual >= residual_tol:
            logger.debug(f"all_critical_points: path {path.index} rejected, residual {residual:.3e}")
            result.excluded += 1
            continue
        candidates.append((path.x, residual))

    for x, residual in sorted(candidates, key=lambda item: _sort_key(item[0])):
        if any(np.max(np.abs(x - y)) < dedupe_tol for y in result.points):
            continue
        hessian = toric_hessian(spec, x)
        if hessian.degenerate:
            raise NonGenericParametersError(
                f"degenerate critical point at {x.tolist()}; perturb (s, nu) to generic values"
            )
        result.points.append(x)
        result.residuals.append(residual)
        result.hessians.append(hessian.value)

    if result.failures:
        logger.warning(
            f"all_critical_points: {result.failures} of {result.paths} paths failed; "
            "the count may be incomplete"
        )
    logger.info(
        f"all_critical_points: {result.count} points from {result.paths} paths "
        f"({result.diverged} diverged, {result.excluded} excluded)"
    )
    if use_cache:
        set_cached_critical_points(cache_key, result)
    return result


def random_parameters(rng, nfactors, nvars):
    """Generic rational (s, nu) with large denominators."""
    s = tuple(Fraction(int(rng.integers(100, 3000)), int(rng.integers(97, 1009))) for _ in range(nfactors))
    nu = tuple(Fraction(int(rng.integers(100, 3000)), int(rng.integers(97, 1009))) for _ in range(nvars))
    return s, nu


def euler_characteristic(polys, trials=None, seed=None, threads=None):
    """
    (-1)^n chi of the very affine variety, as the critical point count
    at `trials` random generic parameter draws.

    Raises:
        InconsistentCountError: the counts differ between draws
    """
    polys = polys_only(polys)
    if trials is None:
        trials = get_setting("EULER_COUNT_TRIALS", 5)
    if seed is None:
        seed = get_default_seed()
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), 0xE7]))
    counts = []
    for trial in tqdm(range(trials), desc="trials", disable=not get_setting("EULER_PROGRESS", False)):
        s, nu = random_parameters(rng, len(polys), polys[0].nvars)
        spec = IntegralSpec(polys, s, nu, positive=False)
        points = all_critical_points(spec, seed=seed + trial, use_cache=False, threads=threads)
        counts.append(points.count)
        logger.debug(f"euler_characteristic: trial {trial} count {points.count}")
    if len(set(counts)) != 1:
        raise InconsistentCountError(
            f"critical point counts disagree across draws: {counts}", counts=counts
        )
    logger.info(f"euler_characteristic: {counts[0]} over {trials} draws")
    return counts[0]
