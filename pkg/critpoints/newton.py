"""
The unique positive critical point of log L, found by damped Newton
iteration on the strictly concave function z -> log L(e^z).
"""

import logging
from dataclasses import dataclass

import numpy as np

from convergence.methods import check_convergence
from eulerlab.settings_utils import get_setting

from .exceptions import CriticalPointError, NonConvergenceError
from .systems import factors, log_coordinates_hessian

logger = logging.getLogger(__name__)

# scaled by max(1, |nu|, sum s) in positive_critical_point
GRADIENT_TOL = 1e-12
ARMIJO = 1e-4


@dataclass
class PositiveCriticalPoint:
    point: np.ndarray
    z: np.ndarray
    # H of -log L at the point, positive
    hessian: float
    log_likelihood: float
    steps: int
    # max |grad| at the point and the bound it met
    gradient: float = 0.0
    tolerance: float = GRADIENT_TOL

    def to_json(self):
        return {
            "point": self.point.tolist(),
            "hessian": self.hessian,
            "log_likelihood": self.log_likelihood,
            "steps": self.steps,
            "gradient": self.gradient,
            "tolerance": self.tolerance,
        }


def _real_parameters(spec):
    if not spec.positive:
        raise CriticalPointError("the positive critical point needs positive-coefficient mode")
    if not spec.is_real():
        raise CriticalPointError("the positive critical point needs real s and nu")
    s = np.array([float(v) for v in spec.s])
    nu = np.array([float(v) for v in spec.nu])
    if np.any(s <= 0):
        raise CriticalPointError(f"s must be positive, got {s.tolist()}")
    return s, nu


def _objective(spec_factors, s, nu, z):
    value = nu @ z
    gradient = nu.copy()
    for s_i, factor in zip(s, spec_factors):
        w, log_f = factor.log_weights(z)
        value -= s_i * log_f
        gradient -= s_i * (w @ factor.exponents)
    return value, gradient


def positive_critical_point(spec, check=True):
    """
    Maximize nu.z - sum_i s_i log f_i(e^z) from z = 0.

    Raises:
        CriticalPointError: mode, sign or interiority preconditions fail
        NonConvergenceError: no convergence within EULER_NEWTON_MAX_STEPS
    """
    s, nu = _real_parameters(spec)
    if check:
        report = check_convergence(spec)
        if not report.converges:
            raise CriticalPointError(
                f"nu is not interior to P(s) ({', '.join(report.reasons)}); "
                "there is no positive critical point"
            )
    spec_factors = factors(spec)
    max_steps = get_setting("EULER_NEWTON_MAX_STEPS", 200)
    tolerance = GRADIENT_TOL * max(1.0, float(np.max(np.abs(nu))), float(s.sum()))

    z = np.zeros(spec.nvars)
    value, gradient = _objective(spec_factors, s, nu, z)
    for step in range(1, max_steps + 1):
        if np.max(np.abs(gradient)) < tolerance:
            break
        M = log_coordinates_hessian(spec, z)
        direction = np.linalg.solve(-M, gradient)
        slope = gradient @ direction
        t = 1.0
        while True:
            candidate = z + t * direction
            new_value, new_gradient = _objective(spec_factors, s, nu, candidate)
            if new_value >= value + ARMIJO * t * slope or t < 1e-12:
                break
            t *= 0.5
        z, value, gradient = candidate, new_value, new_gradient
        logger.debug(f"positive_critical_point: step {step}, |grad| {np.max(np.abs(gradient)):.3e}, t {t}")
    else:
        if np.max(np.abs(gradient)) >= tolerance:
            raise NonConvergenceError(
                f"Newton iteration did not converge in {max_steps} steps "
                f"(|gradient| = {np.max(np.abs(gradient)):.3e}); nu may lie outside int P(s)",
                steps=max_steps,
            )

    M = log_coordinates_hessian(spec, z)
    H = float(np.linalg.det(-M))
    logger.info(f"positive_critical_point: a={np.exp(z).tolist()} H={H} after {step} steps")
    return PositiveCriticalPoint(
        np.exp(z), z, H, float(value), step, float(np.max(np.abs(gradient))), tolerance
    )
