"""
Exact rational convex polytopes in small dimension.

Faces follow the minimization convention: the face selected by a direction y
is where y.q is smallest, so facet inequalities read r.p >= c with r the
inward primitive integer normal.

Functions:
    - convex_hull, newton_polytope, minkowski_sum, weighted_sum
    - contains_interior, normal_fan, polar_dual, normalized_volume, dual_cells
    - cone_facets: inward facet normals of a cone pos(generators)
    - cone_exponential_integral: exact integral of exp(y.v) over a pointed cone
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from eulerlab.settings_utils import get_setting
from .exceptions import (
    DegenerateConeError,
    DimensionGuardError,
    NotFullDimensionalError,
    PolytopeError,
)
from .helpers import (
    add,
    as_point,
    determinant,
    dot,
    fraction_to_json,
    nullspace,
    pivot_columns,
    primitive_integer,
    rank,
    scale,
    sub,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Facet:
    """The inequality normal . p >= offset."""

    normal: tuple
    offset: Fraction

    def slack(self, point):
        return dot(self.normal, point) - self.offset

    def to_json(self):
        return {"normal": list(self.normal), "offset": fraction_to_json(self.offset)}


@dataclass(frozen=True)
class Cone:
    rays: tuple

    @property
    def dim(self):
        return rank(self.rays)

    def is_simplicial(self):
        return len(self.rays) == self.dim

    def contains(self, y):
        """Membership through the cone's own inequalities, exact."""
        facets = cone_facets(self.rays)
        return all(dot(r, y) >= 0 for r in facets)

    def to_json(self):
        return {"rays": [list(r) for r in self.rays]}


class Polytope:
    """
    V-representation plus lazily cross-validated H-representation.

    Build through convex_hull(); lower-dimensional polytopes keep their
    facets relative to the affine hull, expressed in the coordinates listed
    in `frame`.
    """

    def __init__(self, vertices, ambient_dim, dim, frame, relative_facets):
        self.vertices = tuple(vertices)
        self.ambient_dim = ambient_dim
        self.dim = dim
        self.frame = frame
        self._relative_facets = relative_facets

    def __repr__(self):
        return f"Polytope(dim={self.dim}, ambient={self.ambient_dim}, vertices={len(self.vertices)})"

    def __eq__(self, other):
        if not isinstance(other, Polytope):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and set(self.vertices) == set(other.vertices)

    def __hash__(self):
        return hash((self.ambient_dim, frozenset(self.vertices)))

    def is_full_dimensional(self):
        return self.dim == self.ambient_dim

    def project(self, point):
        return tuple(point[k] for k in self.frame)

    @cached_property
    def facet_vertex_sets(self):
        """Vertex indices on each (relative) facet."""
        projected = [self.project(v) for v in self.vertices]
        return [
            frozenset(k for k, q in enumerate(projected) if dot(normal, q) == offset)
            for normal, offset in self._relative_facets
        ]

    @property
    def facets(self):
        if not self.is_full_dimensional():
            raise NotFullDimensionalError(
                f"polytope of dimension {self.dim} in R^{self.ambient_dim} has no facet description"
            )
        return [Facet(tuple(n), Fraction(c)) for n, c in self._relative_facets]

    def contains(self, point):
        point = as_point(point)
        if self.is_full_dimensional():
            return all(f.slack(point) >= 0 for f in self.facets)
        if rank([sub(point, self.vertices[0])] + [sub(v, self.vertices[0]) for v in self.vertices[1:]]) != self.dim:
            return False
        q = self.project(point)
        return all(dot(n, q) >= c for n, c in self._relative_facets)

    def translate(self, vector):
        vector = as_point(vector)
        if self.is_full_dimensional():
            facets = [(n, c + dot(n, vector)) for n, c in self._relative_facets]
            return Polytope([add(v, vector) for v in self.vertices], self.ambient_dim, self.dim, self.frame, facets)
        return convex_hull([add(v, vector) for v in self.vertices])

    def dilate(self, factor):
        factor = as_point([factor])[0]
        if factor <= 0:
            raise PolytopeError(f"dilation factor must be positive, got {factor}")
        facets = [(n, c * factor) for n, c in self._relative_facets]
        return Polytope([scale(v, factor) for v in self.vertices], self.ambient_dim, self.dim, self.frame, facets)

    def face_dimension(self, vertex_indices):
        indices = sorted(vertex_indices)
        if not indices:
            return -1
        base = self.vertices[indices[0]]
        return rank([sub(self.vertices[k], base) for k in indices[1:]], self.ambient_dim)

    def _subfaces(self, face, dim):
        candidates = set()
        for facet in self.facet_vertex_sets:
            meet = face & facet
            if meet and meet != face:
                candidates.add(frozenset(meet))
        return [g for g in candidates if self.face_dimension(g) == dim - 1]

    def triangulation(self, apex=None):
        """
        Pulling triangulation: cone from the apex (lexicographically smallest
        vertex unless given) over a triangulation of every facet missing it.
        Returns tuples of vertex indices.
        """
        if self.dim == 0:
            return [(0,)]
        memo = {}
        order = sorted(range(len(self.vertices)), key=lambda k: self.vertices[k])
        rank_of = {k: i for i, k in enumerate(order)}

        def pull(face, dim, chosen=None):
            key = (face, dim, chosen)
            if key in memo:
                return memo[key]
            if dim == 0:
                result = [(next(iter(face)),)]
            else:
                top = chosen if chosen is not None else min(face, key=rank_of.get)
                result = []
                for sub_face in sorted(self._subfaces(face, dim), key=lambda g: sorted(rank_of[k] for k in g)):
                    if top in sub_face:
                        continue
                    for simplex in pull(sub_face, dim - 1):
                        result.append((top,) + simplex)
            memo[key] = result
            return result

        return pull(frozenset(range(len(self.vertices))), self.dim, apex)

    def normalized_volume(self):
        """n! times the Euclidean volume; zero for lower-dimensional polytopes."""
        if not self.is_full_dimensional():
            return Fraction(0)
        total = Fraction(0)
        for simplex in self.triangulation():
            base = self.vertices[simplex[0]]
            total += abs(determinant([sub(self.vertices[k], base) for k in simplex[1:]]))
        return total

    def to_json(self):
        data = {"vertices": [[fraction_to_json(x) for x in v] for v in self.vertices]}
        if self.is_full_dimensional():
            data["facets"] = [f.to_json() for f in self.facets]
        data["dim"] = self.dim
        return data


def _hyperplane(points, subset, d):
    """Primitive normal and offset of the hyperplane through points[subset], or None."""
    base = points[subset[0]]
    kernel = nullspace([sub(points[k], base) for k in subset[1:]], d)
    if len(kernel) != 1:
        return None
    normal = primitive_integer(kernel[0])
    return normal, dot(normal, base)


def _supporting(points, hyperplane):
    normal, offset = hyperplane
    slacks = [dot(normal, p) - offset for p in points]
    if all(x >= 0 for x in slacks):
        return normal, offset
    if all(x <= 0 for x in slacks):
        return tuple(-k for k in normal), -offset
    return None


def _enumerate_facets(points, d):
    facets = {}
    for subset in combinations(range(len(points)), d):
        hyperplane = _hyperplane(points, subset, d)
        if hyperplane is None:
            continue
        supporting = _supporting(points, hyperplane)
        if supporting is not None:
            facets[supporting] = None
    return list(facets)


def _qhull_facets(points, d):
    try:
        hull = ConvexHull(np.array([[float(x) for x in p] for p in points]))
    except QhullError as e:
        logger.debug(f"qhull rejected the input ({e}), enumerating hyperplanes")
        return None
    if (hull.neighbors < 0).any():
        return None
    facets = {}
    for simplex in hull.simplices:
        hyperplane = _hyperplane(points, tuple(int(k) for k in simplex), d)
        if hyperplane is None:
            return None
        supporting = _supporting(points, hyperplane)
        if supporting is None:
            return None
        facets[supporting] = None
    return list(facets)


def _full_dimensional_facets(points, d):
    if d == 1:
        values = [p[0] for p in points]
        return [((1,), min(values)), ((-1,), -max(values))]
    facets = None
    if len(points) > d + 1:
        facets = _qhull_facets(points, d)
    if facets is None:
        facets = _enumerate_facets(points, d)
    return facets


def convex_hull(points):
    """
    Irredundant hull of a nonempty list of rational points.

    Raises:
        DimensionGuardError: ambient dimension above EULER_MAX_DIM
    """
    points = sorted({as_point(p) for p in points})
    if not points:
        raise PolytopeError("convex hull of an empty point set")
    n = len(points[0])
    if any(len(p) != n for p in points):
        raise PolytopeError("points of different dimensions")
    max_dim = get_setting("EULER_MAX_DIM", 6)
    if n > max_dim:
        raise DimensionGuardError(f"ambient dimension {n} exceeds the guard of {max_dim}")
    base = points[0]
    frame = pivot_columns([sub(p, base) for p in points[1:]])
    d = len(frame)
    if d == 0:
        return Polytope(points[:1], n, 0, (), [])
    projected = [tuple(p[k] for k in frame) for p in points]
    facets = _full_dimensional_facets(projected, d)

    vertices = []
    for p, q in zip(points, projected):
        tight = [normal for normal, offset in facets if dot(normal, q) == offset]
        if len(tight) >= d and rank(tight) == d:
            vertices.append(p)
    logger.debug(f"convex_hull: {len(points)} points -> {len(vertices)} vertices, {len(facets)} facets, dim {d}")
    return Polytope(vertices, n, d, tuple(frame), facets)


def newton_polytope(polynomial):
    if polynomial.is_zero():
        raise PolytopeError("the zero polynomial has no Newton polytope")
    return convex_hull(polynomial.support)


def _as_polytope(item):
    if isinstance(item, Polytope):
        return item
    return newton_polytope(item)


def minkowski_sum(P, Q):
    if P.ambient_dim != Q.ambient_dim:
        raise PolytopeError(f"dimension mismatch: {P.ambient_dim} vs {Q.ambient_dim}")
    return convex_hull([add(p, q) for p in P.vertices for q in Q.vertices])


def weighted_sum(polys, weights, tolerance=1e-9):
    """
    sum_i w_i * P_i for polytopes or Laurent polynomials (their Newton polytopes).
    Float weights are rationalized within `tolerance`.
    """
    polys = list(polys)
    weights = as_point(weights, tolerance)
    if len(polys) != len(weights) or not polys:
        raise PolytopeError(f"{len(polys)} polytopes for {len(weights)} weights")
    for w in weights:
        if w <= 0:
            raise PolytopeError(f"weights must be positive, got {w}")
    total = None
    for item, w in zip(polys, weights):
        dilated = _as_polytope(item).dilate(w)
        total = dilated if total is None else minkowski_sum(total, dilated)
    return total


def contains_interior(P, point):
    if not P.is_full_dimensional():
        raise NotFullDimensionalError(f"interior test needs a full-dimensional polytope, got dim {P.dim}")
    point = as_point(point)
    return all(f.slack(point) > 0 for f in P.facets)


class NormalFan:
    """C_v for each vertex v, generated by the inward normals of the facets through v."""

    def __init__(self, polytope):
        self.polytope = polytope
        facets = polytope.facets
        self.rays = {k: f.normal for k, f in enumerate(facets)}
        self.cones = {}
        self.cone_facets = {}
        for v, vertex in enumerate(polytope.vertices):
            indices = tuple(k for k, f in enumerate(facets) if f.slack(vertex) == 0)
            self.cone_facets[v] = indices
            self.cones[v] = Cone(tuple(facets[k].normal for k in indices))

    def __len__(self):
        return len(self.cones)

    def select(self, direction):
        """
        Vertex indices minimizing direction . q. More than one index means
        the direction is not generic and selects a higher-dimensional face.
        """
        direction = as_point(direction)
        values = [dot(direction, v) for v in self.polytope.vertices]
        best = min(values)
        return [k for k, x in enumerate(values) if x == best]


def normal_fan(P):
    if not P.is_full_dimensional():
        raise NotFullDimensionalError(f"normal fan needs a full-dimensional polytope, got dim {P.dim}")
    return NormalFan(P)


def polar_dual(P):
    """
    {y : y.p >= -1 for all p in P}; the vertex dual to facet r.p >= c is r/(-c).

    Raises:
        PolytopeError: origin not in the interior (translate by -nu first)
    """
    if not P.is_full_dimensional():
        raise NotFullDimensionalError("polar dual needs a full-dimensional polytope")
    facets = P.facets
    if any(f.offset >= 0 for f in facets):
        raise PolytopeError("origin is not interior to the polytope; translate it by -nu before dualizing")
    return convex_hull([scale(f.normal, Fraction(1) / -f.offset) for f in facets])


def normalized_volume(P):
    return P.normalized_volume()


def dual_cells(P, base):
    """
    B_v = {y in C_v : y.(v - base) >= -1} for every vertex v, keyed by vertex.
    Their normalized volumes add up to that of (P - base)°.
    """
    base = as_point(base)
    if not contains_interior(P, base):
        raise PolytopeError(f"base point {tuple(str(x) for x in base)} is not interior to the polytope")
    fan = normal_fan(P)
    cells = {}
    origin = tuple(Fraction(0) for _ in base)
    for v, vertex in enumerate(P.vertices):
        w = sub(vertex, base)
        points = [origin] + [scale(r, Fraction(1) / -dot(r, w)) for r in fan.cones[v].rays]
        cells[vertex] = convex_hull(points)
    return cells


def cone_facets(generators):
    """
    Inward primitive normals r of the facets of pos(generators), r.g >= 0.

    Works on a cross-section when some coordinate functional is positive on
    every generator, otherwise enumerates hyperplanes through the origin.

    Raises:
        DegenerateConeError: the generators do not span the space
    """
    generators = [as_point(g) for g in generators]
    if not generators:
        raise DegenerateConeError("a cone needs at least one generator")
    d = len(generators[0])
    if rank(generators) != d:
        raise DegenerateConeError(f"cone generators span less than R^{d}")
    if d == 1:
        signs = {g[0] > 0 for g in generators if g[0] != 0}
        if len(signs) == 2:
            raise DegenerateConeError("the cone is a line, not pointed")
        return [(1,) if True in signs else (-1,)]

    functional = _positive_functional(generators)
    if functional is None:
        facets = set()
        for subset in combinations(range(len(generators)), d - 1):
            kernel = nullspace([generators[k] for k in subset], d)
            if len(kernel) != 1:
                continue
            r = primitive_integer(kernel[0])
            signs = [dot(r, g) for g in generators]
            if all(x >= 0 for x in signs):
                facets.add(r)
            elif all(x <= 0 for x in signs):
                facets.add(tuple(-k for k in r))
        return sorted(facets)

    section = convex_hull([scale(g, Fraction(1) / dot(functional, g)) for g in generators])
    facets = set()
    for tight in section.facet_vertex_sets:
        rows = [section.vertices[k] for k in tight]
        kernel = nullspace(rows, d)
        r = primitive_integer(kernel[0])
        interior = section.vertices[min(set(range(len(section.vertices))) - tight)]
        if dot(r, interior) < 0:
            r = tuple(-k for k in r)
        facets.add(r)
    return sorted(facets)


def _positive_functional(generators):
    d = len(generators[0])
    # indicator blocks of Cayley configurations: a prefix sum is 1 on every column
    for width in range(1, d + 1):
        functional = tuple(Fraction(int(k < width)) for k in range(d))
        if all(dot(functional, g) > 0 for g in generators):
            return functional
    total = tuple(sum(g[k] for g in generators) for k in range(d))
    if all(dot(total, g) > 0 for g in generators):
        return total
    return None


def cone_exponential_integral(generators, v):
    """
    Integral of exp(y.v) over pos(generators), exactly: the normalized volume
    of {y in C : y.v >= -1}, which is the hull of 0 and the scaled rays.

    Raises:
        PolytopeError: v is not negative on every generator
    """
    generators = [as_point(g) for g in generators]
    v = as_point(v)
    values = [dot(g, v) for g in generators]
    if any(x >= 0 for x in values):
        raise PolytopeError("y.v must be negative on every ray of the cone")
    origin = tuple(Fraction(0) for _ in v)
    truncated = convex_hull([origin] + [scale(g, Fraction(1) / -x) for g, x in zip(generators, values)])
    return truncated.normalized_volume()
