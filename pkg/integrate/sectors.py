"""
Sector decomposition of the Euler-Mellin integral over the normal fan of P(s).

After x = exp(y) the integral runs over R^n, which the cones -C_v of the
normal fan cover up to measure zero. Each cone is split into simplicial
pieces y = -A z, z >= 0, and on a piece every factor is written as
f_i(e^y) = e^{y.v_i} g_i(y) with c_{i,v_i} <= g_i(y) <= M_i.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import logsumexp

from laurent.helpers import imag_part, real_part
from polytope.exceptions import NotFullDimensionalError
from polytope.geometry import convex_hull, normal_fan, weighted_sum
from polytope.helpers import determinant, dot, fraction_to_json, primitive_integer, scale, sub

from .exceptions import IntegrationError, QuadratureError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Sector:
    index: int
    vertex: tuple
    # columns of A, primitive integer rays of a simplicial piece of C_v
    rays: tuple
    determinant: int
    # r_k . (Re nu - v), positive inside the convergence domain
    rates: tuple
    # the vertex v_i of Newt(f_i) selected on this sector
    factor_vertices: tuple

    @property
    def dim(self):
        return len(self.vertex)

    def matrix(self):
        return np.array(self.rays, dtype=float).T

    def envelope_volume(self):
        """|det A| / prod(rates): the normalized volume of B_{v - nu} on this piece."""
        total = Fraction(self.determinant)
        for rate in self.rates:
            total /= rate
        return total

    def to_json(self):
        return {
            "index": self.index,
            "vertex": [fraction_to_json(x) for x in self.vertex],
            "rays": [list(r) for r in self.rays],
            "determinant": self.determinant,
            "rates": [fraction_to_json(x) for x in self.rates],
            "factor_vertices": [list(v) for v in self.factor_vertices],
        }


def _simplicial_pieces(rays, direction):
    """
    Stellar subdivision of pos(rays) from its lexicographically least ray,
    computed as a pulling triangulation of the cross-section where the
    functional `direction` equals 1.
    """
    n = len(rays[0])
    if len(rays) == n:
        return [tuple(rays)]
    section = convex_hull([scale(r, Fraction(1) / dot(direction, r)) for r in rays])
    by_point = {v: primitive_integer(v) for v in section.vertices}
    least = min(rays)
    apex = next(k for k, v in enumerate(section.vertices) if by_point[v] == least)
    pieces = []
    for simplex in section.triangulation(apex=apex):
        pieces.append(tuple(by_point[section.vertices[k]] for k in simplex))
    return pieces


def _selected_vertex(polynomial, direction):
    values = [(dot(direction, alpha), alpha) for alpha in polynomial.support]
    best = min(value for value, _ in values)
    selected = [alpha for value, alpha in values if value == best]
    if len(selected) != 1:
        raise QuadratureError(f"sector direction {direction} selects a face, not a vertex")
    return selected[0]


def sector_decompose(spec):
    """
    One sector per (vertex of P(Re s), simplicial piece of its cone).

    Raises:
        IntegrationError: P(s) lower-dimensional or some Re(s_i) <= 0
        QuadratureError: a rate came out nonpositive
    """
    s = spec.real_s()
    nu = spec.real_nu()
    if any(x <= 0 for x in s):
        raise IntegrationError(f"sector decomposition needs Re(s) > 0, got {[str(x) for x in s]}")
    P = weighted_sum(spec.polys, s)
    try:
        fan = normal_fan(P)
    except NotFullDimensionalError as e:
        raise IntegrationError(f"degenerate polytope P(s): {e.message}") from e

    sectors = []
    for v, vertex in enumerate(P.vertices):
        rays = sorted(fan.cones[v].rays)
        offset = sub(nu, vertex)
        for piece in _simplicial_pieces(rays, offset):
            rates = tuple(dot(r, offset) for r in piece)
            if any(rate <= 0 for rate in rates):
                raise QuadratureError(
                    f"nonpositive rate {[str(x) for x in rates]} at vertex {[str(x) for x in vertex]}; "
                    "nu is not interior to P(s)"
                )
            direction = tuple(sum(r[k] for r in piece) for k in range(P.ambient_dim))
            factor_vertices = tuple(_selected_vertex(f, direction) for f in spec.polys)
            det = abs(determinant(piece))
            sectors.append(Sector(len(sectors), vertex, tuple(piece), int(det), rates, factor_vertices))
    logger.info(f"sector_decompose: {len(P.vertices)} vertices, {len(sectors)} simplicial sectors")
    return sectors


class SectorIntegrand:
    """
    G(z) on a sector, so that the sector integral is
    |det A| * integral over z >= 0 of exp(-rates.z) G(z) dz.
    """

    def __init__(self, spec, sector):
        self.sector = sector
        self.s = np.array([complex(real_part(v), imag_part(v)) for v in spec.s])
        self.real = spec.is_real()
        self.A = sector.matrix()
        self.shifted = []
        for f, vi in zip(spec.polys, sector.factor_vertices):
            E = np.array(f.support, dtype=float).reshape(len(f), f.nvars) - np.array(vi, dtype=float)
            log_c = np.log(np.array([float(c) for c in f.coefficients]))
            self.shifted.append((E, log_c))
        nu_imag = np.array([float(imag_part(v)) for v in spec.nu])
        s_imag = np.array([float(imag_part(v)) for v in spec.s])
        vertices = np.array(sector.factor_vertices, dtype=float).reshape(len(spec.polys), spec.nvars)
        # Im(nu) - sum_i Im(s_i) v_i, the oscillating part of the exponent
        self.phase = nu_imag - s_imag @ vertices

    def log_g(self, Y):
        return [logsumexp(log_c + Y @ E.T, axis=1) for E, log_c in self.shifted]

    def __call__(self, Z):
        """G at the rows of Z."""
        Y = -Z @ self.A.T
        exponent = np.zeros(len(Z), dtype=np.complex128)
        for s_i, log_g in zip(self.s, self.log_g(Y)):
            exponent -= s_i * log_g
        if not self.real:
            exponent += 1j * (Y @ self.phase)
            return np.exp(exponent)
        return np.exp(exponent.real)

    def bounds(self, spec):
        """
        Sandwich bounds on the sector integral from c_{i,v_i} <= g_i <= M_i,
        for real exponents.
        """
        volume = float(self.sector.envelope_volume())
        lower = upper = volume
        for f, vi, s_i in zip(spec.polys, self.sector.factor_vertices, spec.real_s()):
            coefficients = dict(f.terms)
            total = float(sum(coefficients.values()))
            lower *= total ** (-float(s_i))
            upper *= float(coefficients[vi]) ** (-float(s_i))
        return lower, upper
