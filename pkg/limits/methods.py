"""
The two limits of the delta-rescaled integral

    I(delta) = delta^-n * integral of (f^-s x^nu)^(1/delta) dx/x

Functions:
    - field_theory_limit: delta -> infinity, as Vol((P(s) - nu)°) and as the
      sum of 1/H over all complex critical points
    - high_energy_limit: delta -> 0+, H(a)^-1/2 at the positive critical point
    - high_energy_normalized: (2 pi delta)^(-n/2) L(a)^(-1/delta) J(delta) from
      an estimate of I(delta), with J(delta) = delta^n I(delta)
    - limit_sweep: I(delta) over a list of deltas
"""

import cmath
import csv
import io
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

from tqdm import tqdm

from convergence.methods import check_convergence
from critpoints.exceptions import InconsistentCountError
from critpoints.methods import all_critical_points, euler_characteristic
from critpoints.newton import positive_critical_point
from eulerlab.settings_utils import get_default_seed, get_setting
from integrate.methods import evaluate_idelta
from integrate.quadrature import GAUSS, MONTE_CARLO, SADDLE
from laurent.helpers import number_to_json
from polytope.geometry import polar_dual, weighted_sum

from .exceptions import LimitError

logger = logging.getLogger(__name__)

AGREEMENT_TOL = 1e-6
RATIONAL_TOL = 1e-9


def _complex_json(value):
    value = complex(value)
    return {"re": value.real, "im": value.imag}


@dataclass
class HighEnergyLimit:
    point: list
    log_likelihood: float
    hessian: float
    # H(a)^(-1/2), with (-r)^(1/2) = i r^(1/2) for negative H
    prefactor: complex

    def to_json(self):
        return {
            "point": list(self.point),
            "log_likelihood": self.log_likelihood,
            "hessian": self.hessian,
            "prefactor": self.prefactor if isinstance(self.prefactor, float) else _complex_json(self.prefactor),
        }


@dataclass
class LimitReport:
    spec: object
    dual_volume_normalized: Fraction
    dual_volume_euclidean: Fraction
    critical_sum: complex
    critical_count: int
    expected_count: int = None
    unreliable: bool = False
    rational_guess: Fraction = None
    high_energy: HighEnergyLimit = None
    notes: list = field(default_factory=list)

    @property
    def agreement_gap(self):
        return abs(complex(self.critical_sum) - float(self.dual_volume_normalized))

    def to_json(self):
        return {
            "spec": self.spec.to_json(),
            "dual_volume_normalized": str(self.dual_volume_normalized),
            "dual_volume_euclidean": str(self.dual_volume_euclidean),
            "critical_sum": _complex_json(self.critical_sum),
            "critical_count": self.critical_count,
            "expected_count": self.expected_count,
            "agreement_gap": self.agreement_gap,
            "unreliable": self.unreliable,
            "rational_guess": None if self.rational_guess is None else str(self.rational_guess),
            "high_energy": None if self.high_energy is None else self.high_energy.to_json(),
            "notes": list(self.notes),
        }


def _require_interior(spec):
    if not spec.positive:
        raise LimitError("the limits are defined for positive-coefficient integrands")
    report = check_convergence(spec)
    if not report.converges:
        raise LimitError(
            f"nu is not interior to P(s) ({', '.join(report.reasons)}); the limits are undefined"
        )
    return report


def dual_volume(spec):
    """
    Vol((P(Re s) - Re nu)°) as (n!-normalized, Euclidean) exact rationals.

    Raises:
        LimitError: nu not interior to P(s)
    """
    _require_interior(spec)
    tolerance = get_setting("EULER_FLOAT_TOL", 1e-9)
    s = spec.real_s(tolerance)
    nu = spec.real_nu(tolerance)
    P = weighted_sum(spec.polys, s)
    dual = polar_dual(P.translate(tuple(-x for x in nu)))
    normalized = dual.normalized_volume()
    return normalized, normalized / math.factorial(spec.nvars)


def critical_sum(points):
    """sum of 1/H_{-log L} over a CriticalPointSet."""
    return sum((1 / complex(h) for h in points.hessians), 0j)


def rational_guess(value, max_denominator=10**6, tolerance=RATIONAL_TOL):
    """The nearest small-denominator rational, or None if none is within `tolerance`."""
    value = complex(value)
    if abs(value.imag) > tolerance:
        return None
    candidate = Fraction(value.real).limit_denominator(max_denominator)
    if abs(float(candidate) - value.real) <= tolerance * max(1.0, abs(value.real)):
        return candidate
    return None


def field_theory_limit(spec, seed=None, verify_count=True, threads=None):
    """
    Both routes to lim I(delta) as delta -> infinity.

    The report is marked unreliable when the two routes disagree, or when
    the critical point count differs from the Euler characteristic.

    Raises:
        LimitError: nu not interior to P(s)
    """
    normalized, euclidean = dual_volume(spec)
    if seed is None:
        seed = get_default_seed()
    points = all_critical_points(spec, seed=seed, threads=threads)
    total = critical_sum(points)
    report = LimitReport(
        spec=spec,
        dual_volume_normalized=normalized,
        dual_volume_euclidean=euclidean,
        critical_sum=total,
        critical_count=points.count,
        rational_guess=rational_guess(total),
    )
    if verify_count:
        try:
            report.expected_count = euler_characteristic(spec.polys, seed=seed, threads=threads)
        except InconsistentCountError as e:
            report.notes.append(f"Euler characteristic undetermined: counts {e.counts}")
            report.unreliable = True
        else:
            if report.expected_count != points.count:
                report.unreliable = True
                report.notes.append(
                    f"{points.count} critical points but |chi| = {report.expected_count}"
                )
    if points.failures:
        report.unreliable = True
        report.notes.append(f"{points.failures} homotopy paths failed")
    if report.agreement_gap >= AGREEMENT_TOL:
        report.unreliable = True
        report.notes.append(f"routes disagree by {report.agreement_gap:.3e}")
    if abs(complex(total).imag) >= 1e-8:
        report.notes.append(f"critical sum has imaginary part {complex(total).imag:.3e}")
    if report.unreliable:
        logger.warning(f"field_theory_limit: unreliable report ({'; '.join(report.notes)})")
    logger.info(f"field_theory_limit: Vol = {normalized}, sum 1/H = {total}")
    return report


def inverse_square_root(H):
    if H > 0:
        return H ** -0.5
    # (-r)^(1/2) = e^(i pi/2) r^(1/2)
    return 1 / (1j * math.sqrt(-H)) if H < 0 else cmath.inf


def high_energy_limit(spec):
    """
    Raises:
        CriticalPointError: s not real positive or nu not interior to P(s)
    """
    critical = positive_critical_point(spec)
    result = HighEnergyLimit(
        point=critical.point.tolist(),
        log_likelihood=critical.log_likelihood,
        hessian=critical.hessian,
        prefactor=inverse_square_root(critical.hessian),
    )
    logger.info(f"high_energy_limit: a = {result.point}, H^-1/2 = {result.prefactor}")
    return result


def high_energy_normalized(spec, delta, result, log_likelihood=None):
    """
    (2 pi delta)^(-n/2) L(a)^(-1/delta) J(delta) and its standard error, from
    a QuadratureResult for I(delta).
    """
    if log_likelihood is None:
        log_likelihood = positive_critical_point(spec).log_likelihood
    n = spec.nvars
    delta = float(delta)
    log_factor = (
        -n / 2 * math.log(2 * math.pi * delta)
        - log_likelihood / delta
        + n * math.log(delta)
        + result.log_scale
    )
    factor = math.exp(log_factor)
    return factor * complex(result.estimate).real, factor * complex(result.std_error).real


@dataclass
class SweepRow:
    delta: Fraction
    estimate: float
    std_error: float
    method: str
    # (2 pi delta)^(-n/2) L(a)^(-1/delta) J(delta), when the positive point exists
    normalized: float = None
    normalized_error: float = None

    def to_json(self):
        return {
            "delta": number_to_json(self.delta),
            "estimate": self.estimate,
            "std_error": self.std_error,
            "method": self.method,
            "normalized": self.normalized,
            "normalized_error": self.normalized_error,
        }


def sweep_method(spec, delta):
    if delta < 1 and spec.is_real():
        return SADDLE
    return GAUSS if spec.nvars <= 2 else MONTE_CARLO


def limit_sweep(spec, deltas, samples=None, seed=None, method=None, threads=None, progress=None):
    """
    I(delta) for every delta, with the high-energy normalization alongside.

    Raises:
        LimitError: nu not interior to P(s)
        QuadratureError: propagated from the integration backends
    """
    _require_interior(spec)
    if seed is None:
        seed = get_default_seed()
    if progress is None:
        progress = get_setting("EULER_PROGRESS", False)
    log_likelihood = None
    if spec.is_real():
        log_likelihood = positive_critical_point(spec).log_likelihood

    rows = []
    for delta in tqdm(list(deltas), desc="deltas", disable=not progress):
        chosen = method or sweep_method(spec, delta)
        result = evaluate_idelta(spec, delta, samples=samples, seed=seed, method=chosen, threads=threads)
        value, error = complex(result.value), complex(result.error)
        row = SweepRow(delta, value.real, error.real, chosen)
        if log_likelihood is not None:
            row.normalized, row.normalized_error = high_energy_normalized(spec, delta, result, log_likelihood)
        rows.append(row)
        logger.debug(f"limit_sweep: delta {delta} -> {row.estimate} +- {row.std_error}")
    return rows


def sweep_to_csv(rows):
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(["delta", "estimate", "std_error", "method", "normalized", "normalized_error"])
    for row in rows:
        writer.writerow([
            float(row.delta), row.estimate, row.std_error, row.method,
            "" if row.normalized is None else row.normalized,
            "" if row.normalized_error is None else row.normalized_error,
        ])
    return buffer.getvalue()
