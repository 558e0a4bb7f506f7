"""
Absolute convergence of Euler-Mellin integrals and the Gamma-factor skeleton
of their meromorphic continuation.

The integral of f^-s x^nu dx/x over the positive orthant converges exactly
when every Re(s_i) > 0 and Re(nu) lies in the interior of
P(s) = Re(s_1) Newt(f_1) + ... + Re(s_l) Newt(f_l).
For other coefficient signs this is only the sufficient domain.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import numpy as np

from eulerlab.settings_utils import get_setting
from laurent.integrals import polys_only
from polytope.exceptions import DegenerateConeError
from polytope.geometry import cone_facets, contains_interior, weighted_sum
from polytope.helpers import dot

from .exceptions import ConvergenceError

logger = logging.getLogger(__name__)

# reason codes of a negative report
NONPOSITIVE_S = "nonpositive_s"
DEGENERATE = "degenerate"
OUTSIDE = "outside"
BOUNDARY = "boundary"

SKELETON_CHECKS = 3


@dataclass(frozen=True)
class GammaFactor:
    """Gamma(r.nu - w.s)"""

    r: tuple
    w: tuple

    def argument(self, s, nu):
        return dot(self.r, nu) - dot(self.w, s)

    def offset(self, s):
        """The facet r.p >= w.s of P(s)."""
        return dot(self.w, s)

    def to_text(self):
        pieces = [(k, f"nu{j + 1}") for j, k in enumerate(self.r) if k]
        pieces += [(-k, f"s{i + 1}") for i, k in enumerate(self.w) if k]
        # positive terms first, so "s1 - nu1" rather than "-nu1 + s1"
        pieces.sort(key=lambda item: item[0] < 0)
        text = ""
        for k, name in pieces:
            magnitude = abs(k)
            body = name if magnitude == 1 else f"{magnitude}*{name}"
            if not text:
                text = f"-{body}" if k < 0 else body
            else:
                text += f" - {body}" if k < 0 else f" + {body}"
        return f"Gamma({text or '0'})"

    def to_json(self):
        return {"r": list(self.r), "w": [[x.numerator, x.denominator] for x in self.w]}


@dataclass
class GammaSkeleton:
    factors: list

    def __len__(self):
        return len(self.factors)

    def arguments(self, s, nu):
        return [g.argument(s, nu) for g in self.factors]

    def to_text(self):
        return " * ".join(g.to_text() for g in self.factors)

    def to_json(self):
        return {"factors": [g.to_json() for g in self.factors], "text": self.to_text()}


@dataclass
class ConvergenceReport:
    converges: bool
    polytope: object = None
    violated_facets: list = field(default_factory=list)
    reasons: list = field(default_factory=list)
    # positive-coefficient mode: a negative answer is proven divergence
    decisive: bool = True

    @property
    def boundary(self):
        return BOUNDARY in self.reasons

    def to_json(self):
        return {
            "converges": self.converges,
            "reasons": list(self.reasons),
            "boundary": self.boundary,
            "decisive": self.decisive,
            "polytope": self.polytope.to_json() if self.polytope is not None else None,
            "violated_facets": [
                dict(g.to_json(), text=g.to_text()) for g in self.violated_facets
            ],
        }


def cayley_columns(polys):
    """Points (e_i, alpha) for alpha in the support of f_i, block by block."""
    l = len(polys)
    columns = []
    for i, f in enumerate(polys):
        indicator = tuple(int(k == i) for k in range(l))
        for alpha in f.support:
            columns.append(indicator + tuple(alpha))
    return columns


def _primitive_factor(normal, l):
    w_prime, r = normal[:l], normal[l:]
    divisor = 0
    for k in r:
        divisor = gcd(divisor, abs(int(k)))
    r = tuple(int(k) // divisor for k in r)
    w = tuple(Fraction(-int(k), divisor) for k in w_prime)
    return GammaFactor(r, w)


def gamma_skeleton(polys, check_seed=0):
    """
    s-independent facets (r, w) of P(s), read off the facets of the cone
    over the Cayley configuration: (w', r) with w'_i + r.alpha >= 0 on
    block i becomes r.p >= w.s with w = -w'. Facets with r = 0 (the s_i >= 0
    walls) and facets not attained on every block are dropped.

    Raises:
        ConvergenceError: the Minkowski sum of the Newton polytopes is lower-dimensional
    """
    polys = polys_only(polys)
    l = len(polys)
    columns = cayley_columns(polys)
    try:
        normals = cone_facets(columns)
    except DegenerateConeError as e:
        raise ConvergenceError(
            f"degenerate Newton polytopes: the Minkowski sum is not full-dimensional ({e})"
        ) from e

    blocks = []
    start = 0
    for f in polys:
        blocks.append(columns[start:start + len(f)])
        start += len(f)

    factors = []
    for normal in normals:
        if not any(normal[l:]):
            continue
        if not all(min(dot(normal, c) for c in block) == 0 for block in blocks):
            continue
        factors.append(_primitive_factor(normal, l))
    factors.sort(key=lambda g: (g.r, g.w))
    skeleton = GammaSkeleton(factors)
    _validate_skeleton(polys, skeleton, check_seed)
    logger.debug(f"gamma_skeleton: {len(factors)} factors from {len(normals)} Cayley facets")
    return skeleton


def _validate_skeleton(polys, skeleton, seed):
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), 0x5C]))
    for _ in range(SKELETON_CHECKS):
        s = tuple(Fraction(int(rng.integers(1, 98)), int(rng.integers(1, 14))) for _ in polys)
        P = weighted_sum(polys, s)
        expected = {(g.r, g.offset(s)) for g in skeleton.factors}
        actual = {(f.normal, f.offset) for f in P.facets}
        if expected != actual:
            raise ConvergenceError(
                f"Gamma skeleton disagrees with the facets of P(s) at s={[str(x) for x in s]}"
            )


def check_convergence(spec):
    """
    Decide whether Re(nu) lies in int(P(s)) with every Re(s_i) > 0.

    Outside positive-coefficient mode the report is marked non-decisive: a
    negative answer only means the point is outside the sufficient domain.
    """
    tolerance = get_setting("EULER_FLOAT_TOL", 1e-9)
    s = spec.real_s(tolerance)
    nu = spec.real_nu(tolerance)
    report = ConvergenceReport(converges=False, decisive=spec.positive)

    if any(x <= 0 for x in s):
        report.reasons.append(NONPOSITIVE_S)
        logger.info(f"check_convergence: nonpositive Re(s) {[str(x) for x in s]}")
        return report

    P = weighted_sum(spec.polys, s)
    report.polytope = P
    if not P.is_full_dimensional():
        report.reasons.append(DEGENERATE)
        return report

    skeleton = gamma_skeleton(spec.polys)
    for g in skeleton.factors:
        slack = dot(g.r, nu) - g.offset(s)
        if slack <= 0:
            report.violated_facets.append(g)
            if slack < 0 and OUTSIDE not in report.reasons:
                report.reasons.append(OUTSIDE)
    if report.violated_facets and OUTSIDE not in report.reasons:
        report.reasons.append(BOUNDARY)

    report.converges = not report.violated_facets
    if report.converges != contains_interior(P, nu):
        raise ConvergenceError("facet test and skeleton test disagree on interior membership")
    logger.info(
        f"check_convergence: nu={[str(x) for x in nu]} {'inside' if report.converges else 'not inside'} "
        f"int P(s), {len(report.violated_facets)} violated facets"
    )
    return report
