import random
from fractions import Fraction

import numpy as np
from django.test import SimpleTestCase, override_settings

from laurent.generators import moduli_minors
from laurent.graphs import Graph, symanzik
from laurent.parsing import parse
from laurent.polynomials import LaurentPolynomial

from .exceptions import (
    DegenerateConeError,
    DimensionGuardError,
    NotFullDimensionalError,
    PolytopeError,
)
from .geometry import (
    cone_exponential_integral,
    cone_facets,
    contains_interior,
    convex_hull,
    dual_cells,
    minkowski_sum,
    newton_polytope,
    normal_fan,
    polar_dual,
    weighted_sum,
)

F = Fraction


def pentagon():
    return weighted_sum(moduli_minors(5), (1, 1, 1))


def as_set(points):
    return {tuple(F(x) for x in p) for p in points}


class ConvexHullTestCase(SimpleTestCase):
    def test_triangle(self):
        P = newton_polytope(parse("1+x1+x2", ["x1", "x2"]))
        self.assertEqual(set(P.vertices), as_set([(0, 0), (1, 0), (0, 1)]))
        self.assertEqual(len(P.facets), 3)

    def test_redundant_points_are_dropped(self):
        P = convex_hull([(0, 0), (2, 0), (0, 2), (2, 2), (1, 1), (1, 0), (2, 1)])
        self.assertEqual(set(P.vertices), as_set([(0, 0), (2, 0), (0, 2), (2, 2)]))

    def test_triangle_feynman_octahedron(self):
        U, F_ = symanzik(Graph.triangle())
        G = U + F_.substitute({"t1": -1, "t2": -1, "t3": -1})
        P = newton_polytope(G)
        expected = [(1, 1, 0), (0, 0, 1), (0, 1, 1), (1, 0, 1), (0, 1, 0), (1, 0, 0)]
        self.assertEqual(set(P.vertices), as_set(expected))
        self.assertEqual(P.dim, 3)
        self.assertEqual(P.normalized_volume(), 4)

    def test_single_point(self):
        P = convex_hull([(1, 2)])
        self.assertEqual(P.dim, 0)
        self.assertEqual(len(P.vertices), 1)
        with self.assertRaises(NotFullDimensionalError):
            P.facets

    def test_segment_in_the_plane(self):
        P = convex_hull([(0, 0), (1, 1), (2, 2), (3, 3)])
        self.assertEqual(P.dim, 1)
        self.assertEqual(set(P.vertices), as_set([(0, 0), (3, 3)]))
        self.assertTrue(P.contains((1, 1)))
        self.assertFalse(P.contains((1, 0)))
        self.assertEqual(P.normalized_volume(), 0)

    def test_hull_and_facets_agree(self):
        """Every vertex satisfies all facets, with equality on at least dim of them"""
        rng = random.Random(11)
        for _ in range(20):
            points = [tuple(rng.randint(-3, 3) for _ in range(3)) for _ in range(12)]
            P = convex_hull(points)
            if not P.is_full_dimensional():
                continue
            for v in P.vertices:
                slacks = [f.slack(v) for f in P.facets]
                self.assertTrue(all(x >= 0 for x in slacks))
                self.assertGreaterEqual(sum(x == 0 for x in slacks), 3)
            for p in points:
                self.assertTrue(P.contains(p))

    @override_settings(EULER_MAX_DIM=2)
    def test_dimension_guard(self):
        with self.assertRaises(DimensionGuardError):
            convex_hull([(0, 0, 0), (1, 0, 0)])

    def test_empty(self):
        with self.assertRaises(PolytopeError):
            convex_hull([])


class MinkowskiSumTestCase(SimpleTestCase):
    def test_pentagon(self):
        P = pentagon()
        self.assertEqual(set(P.vertices), as_set([(1, 0), (3, 0), (1, 2), (0, 2), (0, 1)]))
        facets = {(f.normal, f.offset) for f in P.facets}
        expected = {((0, 1), 0), ((1, 0), 0), ((1, 1), 1), ((-1, -1), -3), ((0, -1), -2)}
        self.assertEqual(facets, expected)

    def test_origin_is_identity(self):
        P = pentagon()
        self.assertEqual(minkowski_sum(P, convex_hull([(0, 0)])), P)

    def test_unit_square(self):
        P = minkowski_sum(convex_hull([(0, 0), (1, 0)]), convex_hull([(0, 0), (0, 1)]))
        self.assertEqual(set(P.vertices), as_set([(0, 0), (1, 0), (0, 1), (1, 1)]))
        self.assertEqual(P.normalized_volume(), 2)

    def test_product_compatibility(self):
        """Newton polytope of a product is the Minkowski sum of the factors"""
        rng = random.Random(5)
        for _ in range(20):
            f, g = (
                LaurentPolynomial(2, {
                    (rng.randint(-2, 2), rng.randint(-2, 2)): rng.randint(1, 5) for _ in range(3)
                })
                for _ in range(2)
            )
            self.assertEqual(newton_polytope(f * g), minkowski_sum(newton_polytope(f), newton_polytope(g)))

    def test_dimension_mismatch(self):
        with self.assertRaises(PolytopeError):
            minkowski_sum(convex_hull([(0,)]), convex_hull([(0, 0)]))


class WeightedSumTestCase(SimpleTestCase):
    def test_dilation(self):
        P = weighted_sum(moduli_minors(5), (2, 2, 2))
        self.assertEqual(set(P.vertices), as_set([(2, 0), (6, 0), (2, 4), (0, 4), (0, 2)]))

    def test_single_weight_one(self):
        P = pentagon()
        self.assertEqual(weighted_sum([P], [1]), P)

    def test_float_weights_are_rationalized(self):
        P = weighted_sum([convex_hull([(0,), (1,)])], [0.5])
        self.assertEqual(set(P.vertices), {(F(0),), (F(1, 2),)})

    def test_nonpositive_weight(self):
        with self.assertRaises(PolytopeError):
            weighted_sum(moduli_minors(5), (1, 0, 1))


class InteriorTestCase(SimpleTestCase):
    def test_examples(self):
        P = pentagon()
        self.assertTrue(contains_interior(P, (1, 1)))
        self.assertFalse(contains_interior(P, (2, 2)))
        self.assertFalse(contains_interior(P, (1, 0)))

    def test_lower_dimensional(self):
        with self.assertRaises(NotFullDimensionalError):
            contains_interior(convex_hull([(0, 0), (1, 1)]), (0, 0))


class NormalFanTestCase(SimpleTestCase):
    def test_pentagon(self):
        fan = normal_fan(pentagon())
        self.assertEqual(len(fan), 5)
        self.assertEqual(len(fan.rays), 5)
        for cone in fan.cones.values():
            self.assertEqual(cone.dim, 2)

    def test_unit_square(self):
        square = convex_hull([(0, 0), (1, 0), (0, 1), (1, 1)])
        fan = normal_fan(square)
        self.assertEqual(len(fan), 4)
        origin = square.vertices.index((F(0), F(0)))
        self.assertEqual(set(fan.cones[origin].rays), {(1, 0), (0, 1)})

    def test_segment(self):
        fan = normal_fan(convex_hull([(0,), (3,)]))
        self.assertEqual({c.rays for c in fan.cones.values()}, {((1,),), ((-1,),)})

    def test_random_directions_select_one_vertex(self):
        P = pentagon()
        fan = normal_fan(P)
        rng = random.Random(2)
        for _ in range(100):
            y = (F(rng.randint(-100, 100), 7), F(rng.randint(-100, 100), 11))
            if y == (0, 0):
                continue
            selected = fan.select(y)
            if len(selected) == 1:
                self.assertTrue(fan.cones[selected[0]].contains(y))

    def test_ties_report_a_face(self):
        fan = normal_fan(pentagon())
        self.assertEqual(len(fan.select((0, 1))), 2)


class PolarDualTestCase(SimpleTestCase):
    def test_pentagon(self):
        dual = polar_dual(pentagon().translate((-1, -1)))
        self.assertEqual(
            set(dual.vertices), as_set([(1, 1), (1, 0), (0, -1), (-1, -1), (0, 1)])
        )
        self.assertEqual(dual.normalized_volume(), 5)

    def test_beta_segment(self):
        s, nu = F(3), F(1)
        P = convex_hull([(0,), (s,)]).translate((-nu,))
        dual = polar_dual(P)
        self.assertEqual(set(dual.vertices), {(-1 / (s - nu),), (1 / nu,)})

    def test_square_to_cross_polytope(self):
        dual = polar_dual(convex_hull([(-1, -1), (1, -1), (-1, 1), (1, 1)]))
        self.assertEqual(set(dual.vertices), as_set([(1, 0), (-1, 0), (0, 1), (0, -1)]))

    def test_origin_not_interior(self):
        with self.assertRaises(PolytopeError):
            polar_dual(pentagon())

    def test_double_dual(self):
        rng = random.Random(17)
        checked = 0
        while checked < 20:
            points = [tuple(rng.randint(-3, 3) for _ in range(2)) for _ in range(7)]
            P = convex_hull(points)
            if not P.is_full_dimensional() or not contains_interior(P, (0, 0)):
                continue
            self.assertEqual(polar_dual(polar_dual(P)), P)
            checked += 1


class VolumeTestCase(SimpleTestCase):
    def test_unit_simplices(self):
        for n in range(1, 5):
            points = [tuple(0 for _ in range(n))] + [tuple(int(i == j) for j in range(n)) for i in range(n)]
            self.assertEqual(convex_hull(points).normalized_volume(), 1)

    def test_unimodular_invariance(self):
        P = pentagon()
        sheared = convex_hull([(v[0] + 2 * v[1], v[1]) for v in P.vertices])
        self.assertEqual(sheared.normalized_volume(), P.normalized_volume())

    def test_cube(self):
        cube = convex_hull([(a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1)])
        self.assertEqual(cube.normalized_volume(), 6)


class DualCellsTestCase(SimpleTestCase):
    def test_pentagon(self):
        cells = dual_cells(pentagon(), (1, 1))
        self.assertEqual(len(cells), 5)
        self.assertEqual(sum(B.normalized_volume() for B in cells.values()), 5)

    def test_beta_segment(self):
        s, nu = F(5), F(2)
        cells = dual_cells(convex_hull([(0,), (s,)]), (nu,))
        self.assertEqual(
            {B.normalized_volume() for B in cells.values()}, {1 / nu, 1 / (s - nu)}
        )

    def test_symmetric_square(self):
        cells = dual_cells(convex_hull([(-1, -1), (1, -1), (-1, 1), (1, 1)]), (0, 0))
        self.assertEqual({B.normalized_volume() for B in cells.values()}, {F(1)})
        self.assertEqual(len(cells), 4)

    def test_base_not_interior(self):
        with self.assertRaises(PolytopeError):
            dual_cells(pentagon(), (2, 2))


class ConeTestCase(SimpleTestCase):
    def test_cone_facets_of_orthant(self):
        self.assertEqual(cone_facets([(1, 0, 0), (0, 1, 0), (0, 0, 1)]), [(0, 0, 1), (0, 1, 0), (1, 0, 0)])

    def test_cone_facets_without_positive_prefix(self):
        facets = cone_facets([(1, 1), (-1, 1)])
        self.assertEqual(set(facets), {(1, 1), (-1, 1)})

    def test_degenerate(self):
        with self.assertRaises(DegenerateConeError):
            cone_facets([(1, 0), (2, 0)])

    def test_exponential_integral_matches_sampling(self):
        """Integral of exp(y.v) over a simplicial cone, exact against Monte Carlo"""
        rng = np.random.default_rng(3)
        checked = 0
        while checked < 20:
            A = rng.integers(-3, 4, size=(2, 2))
            if round(abs(np.linalg.det(A))) == 0:
                continue
            v = rng.integers(-3, 4, size=2)
            values = A.T @ v
            if (values >= 0).any():
                continue
            exact = cone_exponential_integral([tuple(int(x) for x in col) for col in A.T], tuple(int(x) for x in v))
            # y = A z with z ~ Exp(rate), rate just below the decay rate
            rates = -0.9 * values
            z = rng.exponential(1.0 / rates, size=(20000, 2))
            weights = abs(np.linalg.det(A)) * np.exp(z @ values + z @ rates) / np.prod(rates)
            mean = weights.mean()
            error = weights.std(ddof=1) / np.sqrt(len(weights))
            self.assertLess(abs(mean - float(exact)), 3 * error + 1e-12)
            checked += 1

    def test_exponential_integral_needs_decay(self):
        with self.assertRaises(PolytopeError):
            cone_exponential_integral([(1, 0), (0, 1)], (1, -1))
