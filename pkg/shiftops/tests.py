from fractions import Fraction
from itertools import permutations

import numpy as np
import sympy
from django.test import SimpleTestCase
from scipy.special import beta as beta_function

from laurent.generators import beta_spec, moduli_spec
from laurent.integrals import IntegralSpec
from laurent.polynomials import LaurentPolynomial

from .exceptions import (
    BetaReductionError,
    PochhammerError,
    ShiftopsError,
    ShiftOperatorFormatError,
    ShiftVerificationRefused,
)
from .methods import (
    annihilator_generators,
    beta_contiguity_walk,
    beta_reduction,
    beta_unit_integral,
    pochhammer,
    to_positive_chart,
    unit_interval_point,
    verify_shift,
)
from .operators import ShiftOperator

F = Fraction
s, nu = sympy.symbols("s nu")


def sigma_s(power=1):
    return ShiftOperator.sigma_s(1, 1, 0, power)


def sigma_nu(power=1):
    return ShiftOperator.sigma_nu(1, 1, 0, power)


def positive_beta(s_value, nu_value):
    """Gamma(nu) Gamma(s - nu) / Gamma(s), the integral of y^nu (1+y)^-s dy/y"""
    return float(beta_function(float(nu_value), float(s_value - nu_value)))


def same(left, right):
    return sympy.cancel(sympy.sympify(left) - sympy.sympify(right)) == 0


class PochhammerTestCase(SimpleTestCase):
    def test_values(self):
        self.assertEqual(pochhammer(F(7, 3), 0), 1)
        self.assertEqual(pochhammer(3, 2), 12)
        self.assertEqual(pochhammer(3, -1), F(1, 2))
        self.assertEqual(pochhammer(0, 3), 0)

    def test_zero_factor(self):
        with self.assertRaises(PochhammerError):
            pochhammer(2, -2)

    def test_symbolic(self):
        self.assertTrue(same(pochhammer(s, 2), s ** 2 + s))
        self.assertTrue(same(pochhammer(s, -2), 1 / ((s - 1) * (s - 2))))

    def test_cocycle(self):
        rng = np.random.default_rng(17)
        for _ in range(20):
            gamma = F(int(rng.integers(-40, 40)), 7)
            if gamma.denominator == 1:
                gamma += F(1, 7)
            for a in range(-3, 4):
                for b in range(-3, 4):
                    left = pochhammer(gamma, a) * pochhammer(gamma + a, b)
                    self.assertEqual(left, pochhammer(gamma, a + b), msg=f"gamma={gamma}, a={a}, b={b}")


class BetaReductionTestCase(SimpleTestCase):
    def test_one_one(self):
        self.assertTrue(same(beta_reduction(1, 1), -nu / s))

    def test_trivial(self):
        self.assertEqual(beta_reduction(0, 0, F(1, 2), F(1, 3)), 1)

    def test_walk_oracle(self):
        self.assertEqual(
            beta_reduction(2, 1, F(1, 2), F(1, 3)),
            beta_contiguity_walk(2, 1, F(1, 2), F(1, 3)),
        )

    def test_walk_order_independent(self):
        point = (F(2, 7), F(3, 11))
        for a in range(-2, 3):
            for b in range(-2, 3):
                expected = beta_reduction(a, b, *point)
                steps = "s" * abs(a) + "n" * abs(b)
                for order in set(permutations(steps)):
                    walked = beta_contiguity_walk(a, b, *point, order="".join(order))
                    self.assertEqual(walked, expected, msg=f"(a, b) = ({a}, {b}) along {order}")

    def test_symbolic_walk(self):
        for a, b in [(-2, 1), (2, -2), (1, 2)]:
            self.assertTrue(same(beta_contiguity_walk(a, b), beta_reduction(a, b)))

    def test_pole(self):
        with self.assertRaises(BetaReductionError):
            beta_reduction(0, 1, 1, 0)
        with self.assertRaises(BetaReductionError):
            beta_reduction(-1, 0, 1, 0)

    def test_bad_order(self):
        with self.assertRaises(ShiftopsError):
            beta_contiguity_walk(1, 1, F(1, 2), F(1, 3), order="ss")

    def test_master_integrals(self):
        cases = [
            ((F(-1, 2), F(1, 3)), (1, 1)),
            ((F(-3, 2), F(1, 2)), (2, 0)),
            ((F(1, 4), F(5, 2)), (-1, -2)),
            ((F(-1), F(3, 4)), (1, 2)),
            ((F(-5, 2), F(3, 2)), (0, -1)),
        ]
        for (s_value, nu_value), (a, b) in cases:
            base = beta_unit_integral(s_value, nu_value).estimate
            moved = beta_unit_integral(s_value + a, nu_value + b).estimate
            c = beta_reduction(a, b, s_value, nu_value)
            self.assertAlmostEqual(moved, float(c) * base, delta=1e-9 * abs(moved))

    def test_unit_interval_chart(self):
        self.assertEqual(unit_interval_point(F(1, 2), F(1, 3)), (F(5, 6), F(1, 3)))
        value = beta_unit_integral(F(-1, 2), F(1, 3)).estimate
        self.assertAlmostEqual(value, float(beta_function(1 / 3, 3 / 2)), places=10)


class ShiftOperatorTestCase(SimpleTestCase):
    def test_noncommutation(self):
        """sigma * g = g(shifted) * sigma, checked on a symbolic test function"""
        integral = sympy.Function("I")
        rng = np.random.default_rng(3)
        for _ in range(5):
            c = [sympy.Rational(int(k), 5) for k in rng.integers(-9, 10, size=4)]
            g = c[0] + c[1] * s + c[2] * nu + c[3] * s * nu
            for shift in [(1, 0), (0, 1), (-1, 0), (0, -1)]:
                sigma = ShiftOperator(1, 1, {shift: 1})
                moved = g.xreplace({s: s + shift[0], nu: nu + shift[1]})
                self.assertEqual(sigma * g, ShiftOperator(1, 1, {shift: moved}))
                left = (sigma * g).apply_symbolic(integral)
                right = (ShiftOperator.constant(1, 1, g) * sigma).apply_symbolic(integral)
                point = integral(s + shift[0], nu + shift[1])
                self.assertTrue(same(left - moved * point, 0))
                self.assertTrue(same(right - g * point, 0))

    def test_inverse_shift(self):
        self.assertEqual(sigma_s() * sigma_s() ** -1, ShiftOperator.constant(1, 1, 1))
        self.assertEqual(sigma_nu(-2), sigma_nu() ** -2)

    def test_text(self):
        op = 1 - sigma_s() + sigma_s() * sigma_nu()
        self.assertEqual(op.to_text(), "1 - sigma_s[1] + sigma_s[1]*sigma_nu[1]")
        op = sigma_nu(-1) * nu + sigma_s().scale(s)
        self.assertEqual(op.to_text(), "(nu - 1)*sigma_nu[1]^-1 + s*sigma_s[1]")
        self.assertEqual(sigma_s().scale(F(1, 2)).to_text(), "(1/2)*sigma_s[1]")
        self.assertEqual(ShiftOperator(1, 1).to_text(), "0")

    def test_json(self):
        op = sigma_nu(-1) * nu - sigma_s().scale(s / (s - nu))
        self.assertEqual(ShiftOperator.from_json(op.to_json()), op)
        with self.assertRaises(ShiftOperatorFormatError):
            ShiftOperator.from_json({"nfactors": 1, "nvars": 1, "terms": [{"s": [1], "nu": [0], "coefficient": "t"}]})

    def test_apply(self):
        op = sigma_nu(-1) * nu - sigma_s().scale(s)
        value = op.apply(lambda a, b: positive_beta(a[0], b[0]), (F(3),), (F(3, 2),))
        self.assertLess(abs(value), 1e-12)

    def test_arity(self):
        with self.assertRaises(ShiftopsError):
            sigma_s() + ShiftOperator.sigma_s(2, 1, 0)


class AnnihilatorGeneratorsTestCase(SimpleTestCase):
    def test_unit_interval_beta(self):
        S1, S2 = annihilator_generators(beta_spec(F(1, 2), F(1, 3), unit_interval=True))
        self.assertEqual(S1, 1 - sigma_s() * (1 - sigma_nu()))
        self.assertEqual(S2, sigma_nu(-1) * nu + sigma_s().scale(s))

    def test_positive_beta(self):
        J1, J2 = annihilator_generators(beta_spec(3, F(3, 2)))
        self.assertEqual(J1.to_text(), "1 - sigma_s[1] - sigma_s[1]*sigma_nu[1]")
        self.assertEqual(J2.to_text(), "(nu - 1)*sigma_nu[1]^-1 - s*sigma_s[1]")

    def test_constant_factor(self):
        spec = IntegralSpec((LaurentPolynomial.constant(1, 3),), (1,), (1,))
        J1, _ = annihilator_generators(spec)
        self.assertEqual(J1, 1 - sigma_s().scale(3))

    def test_moduli(self):
        ops = annihilator_generators(moduli_spec(5))
        self.assertEqual(len(ops), 5)
        self.assertEqual(ops[0].to_text(), "1 - sigma_s[1] - sigma_s[1]*sigma_nu[1]")
        self.assertEqual(ops[2].to_text(), "1 - sigma_s[3]*sigma_nu[2] - sigma_s[3]*sigma_nu[1]")
        self.assertEqual(
            ops[3].to_text(),
            "(nu1 - 1)*sigma_nu[1]^-1 - s3*sigma_s[3] - s2*sigma_s[2] - s1*sigma_s[1]",
        )
        self.assertEqual(ops[4].to_text(), "(nu2 - 1)*sigma_nu[2]^-1 - s3*sigma_s[3] - s2*sigma_s[2]")


class VerifyShiftTestCase(SimpleTestCase):
    def test_beta_generators(self):
        spec = beta_spec(3, F(3, 2))
        for op in annihilator_generators(spec):
            report = verify_shift(spec, op, method="gauss")
            self.assertTrue(report.passed, msg=op.to_text())
            self.assertEqual(report.to_json()["passed"], True)

    def test_beta_monte_carlo(self):
        spec = beta_spec(3, F(3, 2))
        for op in annihilator_generators(spec):
            report = verify_shift(spec, op, samples=20000, seed=3)
            self.assertTrue(report.passed, msg=op.to_text())
            self.assertGreater(report.error, 0)

    def test_extended_domain_relation(self):
        """(nu - 1) I(s, nu - 1) = s I(s + 1, nu) at (s, nu) = (3, 3/2)"""
        self.assertAlmostEqual(0.5 * positive_beta(3, 0.5), 3 * positive_beta(4, 1.5), places=12)
        spec = beta_spec(3, F(3, 2))
        op = sigma_nu(-1) * nu - sigma_s().scale(s)
        report = verify_shift(spec, op, method="gauss")
        self.assertTrue(report.passed)
        self.assertEqual([t.shift for t in report.terms], [(0, -1), (1, 0)])
        self.assertAlmostEqual(report.terms[0].estimate, positive_beta(3, 0.5), places=10)

    def test_refused_outside_domain(self):
        unit = beta_spec(F(1, 2), F(1, 3), unit_interval=True)
        S1 = to_positive_chart(annihilator_generators(unit)[0])
        spec = beta_spec(*unit_interval_point(F(1, 2), F(1, 3)))
        with self.assertRaises(ShiftVerificationRefused) as ctx:
            verify_shift(spec, S1, method="gauss")
        self.assertEqual(ctx.exception.point, ((F(-1, 6),), (F(1, 3),)))

    def test_unit_interval_relation(self):
        unit = beta_spec(F(-1, 2), F(1, 3), unit_interval=True)
        S1 = to_positive_chart(annihilator_generators(unit)[0])
        self.assertEqual(S1, 1 - sigma_s(-1) + sigma_nu())
        spec = beta_spec(*unit_interval_point(F(-1, 2), F(1, 3)))
        self.assertTrue(verify_shift(spec, S1, method="gauss").passed)

    def test_moduli(self):
        spec = moduli_spec(5, s=(3, 3, 3), nu=(3, 3))
        for op in annihilator_generators(spec):
            report = verify_shift(spec, op, samples=20000, seed=7)
            self.assertTrue(report.passed, msg=op.to_text())

    def test_zero_operator(self):
        report = verify_shift(beta_spec(3, F(3, 2)), ShiftOperator(1, 1))
        self.assertTrue(report.passed)
        self.assertEqual(report.terms, [])

    def test_zero_coefficients_skipped(self):
        op = ShiftOperator(1, 1, {(0, 0): 1, (0, -5): nu - F(3, 2)})
        report = verify_shift(beta_spec(3, F(3, 2)), op, method="gauss")
        self.assertEqual(report.skipped, [(0, -5)])
        self.assertFalse(report.passed)

    def test_positive_mode_only(self):
        unit = beta_spec(F(-1, 2), F(1, 3), unit_interval=True)
        with self.assertRaises(ShiftopsError):
            verify_shift(unit, annihilator_generators(unit)[0])
