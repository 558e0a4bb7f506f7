import math
import random
from fractions import Fraction

import numpy as np
import sympy
from django.test import SimpleTestCase

from laurent.generators import beta_spec, moduli_minors, moduli_spec
from laurent.integrals import IntegralSpec
from laurent.parsing import parse
from laurent.polynomials import LaurentPolynomial
from polytope.geometry import contains_interior, weighted_sum

from .cache_utils import clear_critical_cache, get_cached_critical_points, get_critical_cache_key
from .exceptions import CriticalPointError, DegenerateSystemError
from .homotopy import DIVERGED, FINISHED, SINGULAR, solve_total_degree
from .methods import all_critical_points, euler_characteristic
from .newton import positive_critical_point
from .systems import (
    critical_likelihood,
    critical_system,
    log_coordinates_hessian,
    moment_map,
    moment_map_jacobian,
    toric_hessian,
    univariate_roots,
)

F = Fraction
SQRT5 = math.sqrt(5)


class CriticalSystemTestCase(SimpleTestCase):
    def test_unit_interval_beta(self):
        spec = beta_spec(F(1, 2), F(1, 3), unit_interval=True)
        system = critical_system(spec)
        (p,) = system.cleared_polynomials
        # nu (1 - x) + s x
        self.assertEqual(p, parse("1/3 - 1/3*x + 1/2*x", ["x"]))
        x = 0.3
        self.assertAlmostEqual(system.rational_equations([x])[0], (1 / 3) / x + 0.5 / (1 - x))

    def test_symbolic_equations(self):
        spec = beta_spec(F(1, 2), F(1, 3), unit_interval=True)
        system = critical_system(spec)
        x = sympy.Symbol(spec.variables[0])
        (g,) = system.symbolic_equations()
        self.assertEqual(sympy.simplify(g - (sympy.Rational(1, 3) / x + sympy.Rational(1, 2) / (1 - x))), 0)
        (p,) = system.symbolic_equations(cleared=True)
        self.assertEqual(sympy.solve(p, x), [-2])
        self.assertEqual(system.to_json()["equations"], [str(g)])

    def test_moduli_equations(self):
        system = critical_system(moduli_spec(5))
        x = np.array([0.7, 1.3])
        g1 = 1 / x[0] - 1 / (1 + x[0]) - 1 / (1 + x[0] + x[1]) - 1 / (x[0] + x[1])
        g2 = 1 / x[1] - 1 / (1 + x[0] + x[1]) - 1 / (x[0] + x[1])
        np.testing.assert_allclose(system.rational_equations(x), [g1, g2])
        self.assertEqual(system.degrees(), [3, 3])

    def test_zero_parameters_are_degenerate(self):
        spec = IntegralSpec(moduli_minors(5), (0, 0, 0), (0, 0))
        self.assertTrue(critical_system(spec).is_degenerate())
        with self.assertRaises(DegenerateSystemError):
            all_critical_points(spec, seed=0, use_cache=False)

    def test_laurent_factors_are_cleared(self):
        spec = IntegralSpec((parse("x^-1 + 2 + x", ["x"]),), (1,), (F(1, 2),))
        (p,) = critical_system(spec).cleared_polynomials
        self.assertGreaterEqual(min(e[0] for e in p.support), 0)


class PositiveCriticalPointTestCase(SimpleTestCase):
    def test_beta(self):
        result = positive_critical_point(beta_spec(3, 1))
        self.assertAlmostEqual(result.point[0], 0.5, places=12)
        self.assertAlmostEqual(result.hessian, 2 / 3, places=12)

    def test_beta_symbolic_family(self):
        """a = nu/(s - nu) and H = nu(s - nu)/s at rational points"""
        rng = random.Random(8)
        for _ in range(10):
            s = F(rng.randint(20, 90), rng.randint(2, 9))
            nu = s * F(rng.randint(1, 9), 10)
            result = positive_critical_point(beta_spec(s, nu))
            self.assertAlmostEqual(result.point[0], float(nu / (s - nu)), delta=1e-12 * float(nu / (s - nu)) + 1e-12)
            self.assertAlmostEqual(result.hessian, float(nu * (s - nu) / s), delta=1e-12 * float(s))

    def test_moduli(self):
        result = positive_critical_point(moduli_spec(5, nu=(1, 1)))
        np.testing.assert_allclose(result.point, [(SQRT5 - 1) / 2, 1.0], atol=1e-10)
        self.assertAlmostEqual(result.hessian, (25 - 11 * SQRT5) / 2, places=8)

    def test_outside_polytope(self):
        with self.assertRaises(CriticalPointError):
            positive_critical_point(moduli_spec(5, nu=(2, 2)))

    def test_unit_interval_chart_rejected(self):
        with self.assertRaises(CriticalPointError):
            positive_critical_point(beta_spec(F(1, 2), F(1, 3), unit_interval=True))

    def test_likelihood_at_maximum(self):
        result = positive_critical_point(beta_spec(3, 1))
        expected = math.log(0.5) - 3 * math.log(1.5)
        self.assertAlmostEqual(result.log_likelihood, expected, places=12)
        self.assertAlmostEqual(critical_likelihood(beta_spec(3, 1), [0.5]).real, expected, places=12)

    def test_reports_gradient_tolerance(self):
        result = positive_critical_point(beta_spec(3, 1))
        self.assertAlmostEqual(result.tolerance, 3e-12, delta=1e-24)
        self.assertLess(result.gradient, result.tolerance)
        self.assertEqual(result.to_json()["tolerance"], result.tolerance)
        unit = positive_critical_point(moduli_spec(5, nu=(1, 1)))
        self.assertAlmostEqual(unit.tolerance, 3e-12, delta=1e-24)


class ToricHessianTestCase(SimpleTestCase):
    def test_beta(self):
        h = toric_hessian(beta_spec(3, 1), [0.5])
        self.assertAlmostEqual(h.value.real, 2 / 3)

    def test_no_factor_dependence_is_degenerate(self):
        spec = IntegralSpec((LaurentPolynomial.constant(1, 2),), (1,), (1,))
        h = toric_hessian(spec, [1.7])
        self.assertEqual(h.determinant, 0)
        self.assertTrue(h.degenerate)

    def test_concavity(self):
        """log L is strictly concave in log coordinates"""
        spec = moduli_spec(5, s=(F(1, 2), F(3, 2), 2), nu=(1, 1))
        rng = np.random.default_rng(1)
        for _ in range(100):
            z = rng.normal(scale=2.0, size=2)
            self.assertTrue(np.all(np.linalg.eigvalsh(log_coordinates_hessian(spec, z)) < 0))


class MomentMapTestCase(SimpleTestCase):
    def test_beta(self):
        self.assertAlmostEqual(moment_map([parse("1+y", ["y"])], [3], [0.5])[0], 1.0)

    def test_fixed_point(self):
        spec = moduli_spec(5, nu=(1, 1))
        a = positive_critical_point(spec).point
        np.testing.assert_allclose(moment_map(spec.polys, [1, 1, 1], a), [1, 1], atol=1e-8)

    def test_image_in_interior(self):
        polys = moduli_minors(5)
        s = (1, 2, F(1, 2))
        P = weighted_sum(polys, s)
        rng = np.random.default_rng(6)
        for _ in range(100):
            x = np.exp(rng.normal(scale=1.5, size=2))
            mu = moment_map(polys, s, x)
            self.assertTrue(contains_interior(P, tuple(F(v) for v in mu)))
            self.assertTrue(np.all(np.linalg.eigvalsh(moment_map_jacobian(polys, s, x)) > 0))

    def test_nonpositive_input(self):
        with self.assertRaises(CriticalPointError):
            moment_map(moduli_minors(5), [1, 1, 1], [-1, 1])


class HomotopyTestCase(SimpleTestCase):
    def test_double_root_is_singular(self):
        paths = solve_total_degree([parse("x^2 - 2*x + 1", ["x"])], seed=0, threads=1)
        self.assertEqual([p.status for p in paths], [SINGULAR, SINGULAR])
        for path in paths:
            self.assertEqual(path.winding, 2)
            self.assertLess(abs(path.x[0] - 1), 1e-6)

    def test_path_to_infinity(self):
        names = ["x", "y"]
        paths = solve_total_degree([parse("x*y - 1", names), parse("x - 2", names)], seed=0, threads=1)
        self.assertEqual(sorted(p.status for p in paths), sorted([DIVERGED, FINISHED]))
        (finished,) = [p for p in paths if p.status == FINISHED]
        np.testing.assert_allclose(finished.x, [2, 0.5], atol=1e-10)
        self.assertTrue(finished.refined)

    def test_seed_reproducible(self):
        system = critical_system(moduli_spec(5, nu=(1, 1))).cleared_polynomials
        one = solve_total_degree(system, seed=5, threads=1)
        four = solve_total_degree(system, seed=5, threads=4)
        self.assertEqual([p.status for p in one], [p.status for p in four])
        for a, b in zip(one, four):
            np.testing.assert_array_equal(a.x, b.x)


class AllCriticalPointsTestCase(SimpleTestCase):
    def test_moduli_two_points(self):
        result = all_critical_points(moduli_spec(5, nu=(1, 1)), seed=1)
        self.assertEqual(result.count, 2)
        self.assertEqual(result.failures, 0)
        self.assertEqual(result.count + result.diverged + result.excluded, result.paths)
        expected = [((-SQRT5 - 1) / 2, 1.0), ((SQRT5 - 1) / 2, 1.0)]
        found = sorted((x[0].real, x[1].real) for x in result.points)
        np.testing.assert_allclose(found, expected, atol=1e-8)
        for x in result.points:
            self.assertLess(np.max(np.abs(x.imag)), 1e-8)
        hessians = sorted(h.real for h in result.hessians)
        np.testing.assert_allclose(hessians, [(25 - 11 * SQRT5) / 2, (25 + 11 * SQRT5) / 2], atol=1e-8)
        self.assertTrue(all(r < 1e-8 for r in result.residuals))

    def test_positive_point_is_unique(self):
        spec = moduli_spec(5, s=(F(3, 2), 1, F(2, 3)), nu=(F(1, 2), F(3, 4)))
        positive = all_critical_points(spec, seed=2).positive_points()
        self.assertEqual(len(positive), 1)
        np.testing.assert_allclose(positive[0].real, positive_critical_point(spec).point, atol=1e-8)

    def test_beta_single_point(self):
        result = all_critical_points(beta_spec(3, 1), seed=0)
        self.assertEqual(result.count, 1)
        self.assertAlmostEqual(result.points[0][0], 0.5)

    def test_matches_companion_roots(self):
        spec = IntegralSpec(
            (parse("1 + x + 3*x^2", ["x"]), parse("2 + x", ["x"])), (F(5, 7), F(3, 11)), (F(2, 13),)
        )
        roots = sorted(univariate_roots(critical_system(spec)), key=lambda r: (r.real, r.imag))
        result = all_critical_points(spec, seed=3, use_cache=False)
        found = sorted((x[0] for x in result.points), key=lambda r: (r.real, r.imag))
        self.assertEqual(len(found), len(roots))
        for a, b in zip(found, roots):
            self.assertLess(abs(a - b), 1e-8)

    def test_thread_count_does_not_change_result(self):
        spec = moduli_spec(5, s=(F(7, 3), F(2, 5), 1), nu=(F(1, 3), F(5, 4)))
        one = all_critical_points(spec, seed=4, use_cache=False, threads=1)
        four = all_critical_points(spec, seed=4, use_cache=False, threads=4)
        self.assertEqual(one.count, four.count)
        for a, b in zip(one.points, four.points):
            np.testing.assert_array_equal(a, b)

    def test_cache_round_trip(self):
        spec = beta_spec(5, 2)
        result = all_critical_points(spec, seed=9)
        cached = get_cached_critical_points(get_critical_cache_key(spec, 9))
        self.assertEqual(cached.to_json(), result.to_json())
        self.assertGreaterEqual(clear_critical_cache(), 1)
        self.assertIsNone(get_cached_critical_points(get_critical_cache_key(spec, 9)))


class EulerCharacteristicTestCase(SimpleTestCase):
    def test_moduli_counts(self):
        """|chi(M_0,m)| = (m - 3)!"""
        for m, expected in ((4, 1), (5, 2), (6, 6)):
            self.assertEqual(euler_characteristic(moduli_minors(m), trials=5, seed=m), expected)
