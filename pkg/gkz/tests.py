import math
from fractions import Fraction

import numpy as np
import sympy
from django.test import SimpleTestCase
from scipy.special import beta as beta_function

from critpoints.methods import euler_characteristic
from integrate.methods import evaluate
from laurent.generators import feynman_spec
from laurent.graphs import Graph
from laurent.integrals import IntegralSpec
from laurent.parsing import parse_support
from laurent.polynomials import LaurentPolynomial

from .exceptions import GkzError, TorusRecipeError
from .methods import (
    TorusRecipe,
    cayley,
    cayley_volume,
    check_nonresonant,
    euler_operators,
    gkz_system,
    specialize,
    toric_binomials,
    torus_action,
    torus_character,
)
from .operators import DifferentialOperator

F = Fraction
s, nu1, nu2, nu3 = sympy.symbols("s nu1 nu2 nu3")
TRIANGLE_TEXT = "x1 + x2 + x3 + x2*x3 + x1*x3 + x1*x2"
TRIANGLE_MATRIX = [
    [1, 1, 1, 1, 1, 1],
    [1, 0, 0, 0, 1, 1],
    [0, 1, 0, 1, 0, 1],
    [0, 0, 1, 1, 1, 0],
]


def triangle_cayley():
    return cayley([parse_support(TRIANGLE_TEXT, ["x1", "x2", "x3"])])


def beta_cayley():
    return cayley([[(0,), (1,)]])


def z_ops(count):
    variables = tuple(f"z{k + 1}" for k in range(count))
    d = [DifferentialOperator.derivative(variables, k) for k in range(count)]
    theta = [DifferentialOperator.theta(variables, k) for k in range(count)]
    return variables, d, theta


def beta_integral(z, s_value=F(3, 2), nu_value=F(1, 2)):
    f = LaurentPolynomial(1, {(0,): float(z[0]), (1,): float(z[1])})
    spec = IntegralSpec((f,), (s_value,), (nu_value,))
    return evaluate(spec, method="gauss").estimate


class DifferentialOperatorTestCase(SimpleTestCase):
    def test_weyl_relation(self):
        variables = ("z1",)
        d = DifferentialOperator.derivative(variables, 0)
        z = DifferentialOperator.variable(variables, 0)
        self.assertEqual(d * z - z * d, DifferentialOperator.constant(variables, 1))
        self.assertEqual(d * z, DifferentialOperator.theta(variables, 0) + 1)

    def test_second_order_normal_order(self):
        variables = ("t",)
        d = DifferentialOperator.derivative(variables, 0)
        theta = DifferentialOperator.theta(variables, 0)
        t = DifferentialOperator.variable(variables, 0)
        self.assertEqual(d * theta, t * d ** 2 + d)

    def test_text(self):
        variables = ("t1", "t2")
        d = [DifferentialOperator.derivative(variables, k) for k in range(2)]
        t1 = DifferentialOperator.variable(variables, 0)
        op = t1 * d[0] ** 2 - d[1].scale(F(3, 2)) + nu2
        self.assertEqual(op.to_text(), "t1*d[t1]^2 - 3/2*d[t2] + nu2")
        self.assertEqual(d[0].scale(s + 1).to_text(), "(s + 1)*d[t1]")
        self.assertEqual(z_ops(2)[1][1].to_text(), "d[2]")

    def test_normalized(self):
        variables, d, _ = z_ops(2)
        self.assertEqual((d[0].scale(-3) + 6).normalized(), d[0] - 2)
        self.assertEqual((d[0].scale(-s) + 1).normalized(), d[0].scale(s) - 1)

    def test_apply_matches_derivatives(self):
        variables, d, theta = z_ops(2)
        op = theta[0] + d[1] ** 2 + 3
        value = op.apply(lambda z: z[0] ** 3 * math.exp(z[1]), [2.0, 0.5], step=1e-4)
        exact = 3 * 8 * math.exp(0.5) + 8 * math.exp(0.5) + 3 * 8 * math.exp(0.5)
        self.assertAlmostEqual(value.real, exact, delta=1e-5 * exact)

    def test_apply_needs_parameters(self):
        variables, d, _ = z_ops(1)
        with self.assertRaises(GkzError):
            (d[0] + s).apply(lambda z: z[0], [1.0])
        self.assertAlmostEqual((d[0] + s).apply(lambda z: z[0], [1.0], {"s": 2}).real, 3.0)


class CayleyTestCase(SimpleTestCase):
    def test_triangle(self):
        A = triangle_cayley()
        self.assertEqual([list(r) for r in A.rows], TRIANGLE_MATRIX)
        self.assertEqual(A.rank, 4)

    def test_beta(self):
        self.assertEqual([list(r) for r in beta_cayley().rows], [[1, 1], [0, 1]])

    def test_indicator_block(self):
        A = cayley([[(0,)], [(0,)]])
        self.assertEqual([list(r) for r in A.rows], [[1, 0], [0, 1], [0, 0]])
        self.assertEqual(toric_binomials(A), [])

    def test_empty_support(self):
        with self.assertRaises(GkzError):
            cayley([[(0,)], []])


class ToricBinomialsTestCase(SimpleTestCase):
    def test_triangle(self):
        A = triangle_cayley()
        variables, d, _ = z_ops(6)
        expected = [d[0] * d[3] - d[2] * d[5], d[1] * d[4] - d[2] * d[5]]
        self.assertEqual(toric_binomials(A), expected)

    def test_beta_has_none(self):
        self.assertEqual(toric_binomials(beta_cayley()), [])

    def test_twisted_cubic(self):
        A = cayley([[(0,), (1,), (2,)]])
        variables, d, _ = z_ops(3)
        (binomial,) = toric_binomials(A)
        self.assertIn(binomial, (d[0] * d[2] - d[1] ** 2, d[1] ** 2 - d[0] * d[2]))

    def test_kernel_certificate(self):
        A = cayley([parse_support("1 + x1 + x2 + x1*x2 + x1^2", ["x1", "x2"])])
        for binomial in toric_binomials(A, degree_bound=6):
            (_, u), (_, v) = binomial.terms
            w = [a - b for a, b in zip(u, v)]
            self.assertTrue(all(sum(r * x for r, x in zip(row, w)) == 0 for row in A.rows))


class EulerOperatorsTestCase(SimpleTestCase):
    def test_triangle(self):
        _, _, theta = z_ops(6)
        expected = [
            sum(theta[1:], theta[0]) + s,
            theta[0] + theta[4] + theta[5] + nu1,
            theta[1] + theta[3] + theta[5] + nu2,
            theta[2] + theta[3] + theta[4] + nu3,
        ]
        self.assertEqual(euler_operators(triangle_cayley()), expected)

    def test_beta(self):
        _, _, theta = z_ops(2)
        s_value, nu_value = F(3, 2), F(1, 2)
        self.assertEqual(
            euler_operators(beta_cayley(), (s_value,), (nu_value,)),
            [theta[0] + theta[1] + s_value, theta[1] + nu_value],
        )

    def test_single_monomial(self):
        A = cayley([[(2, -1)]])
        _, _, theta = z_ops(1)
        expected = [theta[0] + s, theta[0].scale(2) + nu1, -theta[0] + nu2]
        self.assertEqual(euler_operators(A), expected)

    def test_beta_annihilates_integral(self):
        """Both Euler operators kill I(z1, z2) at (s, nu) = (3/2, 1/2)."""
        system = gkz_system([[(0,), (1,)]], (F(3, 2),), (F(1, 2),))
        self.assertEqual(system.binomials, [])
        self.assertEqual(system.to_json()["beta_convention"], "beta = -(s, nu)")
        for op in system.euler_ops:
            value = op.apply(beta_integral, [1.0, 1.0], step=1e-4)
            self.assertLess(abs(value), 1e-6)

    def test_beta_integral_closed_form(self):
        expected = beta_function(0.5, 1.0) * 2.0 ** (0.5 - 1.5) * 3.0 ** -0.5
        self.assertAlmostEqual(beta_integral([2.0, 3.0]), expected, places=10)

    def test_homogeneity(self):
        A = beta_cayley()
        system = gkz_system([[(0,), (1,)]], (F(3, 2),), (F(1, 2),))
        z = (1.3, 0.7)
        reference = beta_integral(z)
        rng = np.random.default_rng(5)
        for u in rng.uniform(0.3, 3.0, size=(5, 2)):
            moved = beta_integral(torus_action(A, u, z))
            self.assertAlmostEqual(moved, (torus_character(system.beta, u) * reference).real, places=10)


class NonResonanceTestCase(SimpleTestCase):
    def test_beta(self):
        report = check_nonresonant(beta_cayley(), (-F(1, 2), -F(1, 3)))
        self.assertTrue(report.nonresonant)
        self.assertEqual(sorted(report.facets), [(0, 1), (1, -1)])
        self.assertIsNone(report.witness)

    def test_integer_beta(self):
        report = check_nonresonant(beta_cayley(), (-2, -1))
        self.assertFalse(report.nonresonant)
        self.assertIsNotNone(report.witness)

    def test_triangle_physics_point(self):
        system = gkz_system([parse_support(TRIANGLE_TEXT, ["x1", "x2", "x3"])], (2,), (1, 1, 1))
        report = check_nonresonant(system.cayley, system.beta)
        self.assertFalse(report.nonresonant)

    def test_symbolic_beta(self):
        with self.assertRaises(GkzError):
            check_nonresonant(beta_cayley(), (-s, -nu1))


class SpecializeTestCase(SimpleTestCase):
    def test_triangle(self):
        system = gkz_system([parse_support(TRIANGLE_TEXT, ["x1", "x2", "x3"])])
        recipe = TorusRecipe(
            fixed=(0, 1, 2),
            scales={3: -1, 4: -1, 5: -1},
            names={3: "t1", 4: "t2", 5: "t3"},
        )
        t = ("t1", "t2", "t3")
        d = [DifferentialOperator.derivative(t, k) for k in range(3)]
        x = [DifferentialOperator.variable(t, k) for k in range(3)]
        P1 = x[0] * d[0] ** 2 - x[2] * d[2] ** 2 + d[0].scale(1 - s + nu2 + nu3) - d[2].scale(1 - s + nu1 + nu2)
        P2 = x[1] * d[1] ** 2 - x[2] * d[2] ** 2 + d[1].scale(1 - s + nu1 + nu3) - d[2].scale(1 - s + nu1 + nu2)
        P3 = x[0] * d[0] + x[1] * d[1] + x[2] * d[2] + nu1 + nu2 + nu3 - s
        self.assertEqual(specialize(system, recipe), [P1, P2, P3])

    def test_recipe_from_json(self):
        recipe = TorusRecipe.from_json({"fixed": [1, 2, 3], "scale": {"4": -1}, "names": {"4": "t1"}})
        self.assertEqual(recipe.fixed, (0, 1, 2))
        self.assertEqual(recipe.scales, {3: -1})
        self.assertEqual(recipe.to_json()["fixed"], [1, 2, 3])

    def test_recipe_json_keeps_input_form(self):
        data = {"fixed": [1, 2, 3], "scale": {"4": -1, "5": "1/2", "6": 3}, "names": {"4": "t1", "5": "t2", "6": "t3"}}
        self.assertEqual(TorusRecipe.from_json(data).to_json(), data)
        self.assertEqual(TorusRecipe.from_json(TorusRecipe.from_json(data).to_json()).scales, {3: -1, 4: Fraction(1, 2), 5: 3})

    def test_beta(self):
        system = gkz_system([[(0,), (1,)]])
        (op,) = specialize(system, TorusRecipe(fixed=(0,)))
        self.assertEqual(op.to_text(), "z2*d[2] + nu")

    def test_dependent_columns(self):
        A_supports = [[(0,), (1,), (2,)]]
        system = gkz_system(A_supports)
        with self.assertRaises(TorusRecipeError):
            specialize(system, TorusRecipe(fixed=(0, 1, 2)))


class CayleyVolumeTestCase(SimpleTestCase):
    def test_beta(self):
        f = LaurentPolynomial(1, {(0,): 1, (1,): 1})
        self.assertEqual(cayley_volume(beta_cayley()), 1)
        self.assertEqual(euler_characteristic([f], seed=1), 1)

    def test_triangle(self):
        spec = feynman_spec(Graph.triangle(), {"t1": -1, "t2": -1, "t3": -1}, 2, (1, 1, 1))
        self.assertEqual(cayley_volume(triangle_cayley()), 4)
        self.assertEqual(euler_characteristic(spec.polys, seed=1), 4)
