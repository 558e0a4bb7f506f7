import random
from fractions import Fraction

import sympy
from django.test import SimpleTestCase

from .exceptions import EvaluationError, GraphError, LaurentError, LaurentParseError, SpecError
from .generators import beta_spec, feynman_spec, moduli_minors, moduli_spec
from .graphs import Graph, symanzik
from .integrals import IntegralSpec
from .parsing import parse, parse_support
from .polynomials import LaurentPolynomial


class ParseTestCase(SimpleTestCase):
    def test_parse_simple_sum(self):
        f = parse("1+x1+x2", ["x1", "x2"])
        self.assertEqual(dict(f.terms), {(0, 0): 1, (1, 0): 1, (0, 1): 1})

    def test_parse_zero(self):
        self.assertTrue(parse("0", ["x"]).is_zero())

    def test_parse_cancellation(self):
        self.assertTrue(parse("x1*x2 - x1*x2", ["x1", "x2"]).is_zero())

    def test_negative_exponents_and_rationals(self):
        f = parse("3/2*x^-2 - x^(-1) + 2", ["x"])
        self.assertEqual(f.terms[(-2,)], Fraction(3, 2))
        self.assertEqual(f.terms[(-1,)], -1)
        self.assertEqual(f.terms[(0,)], 2)

    def test_products_expand(self):
        f = parse("(1+x1)*(1+x1+x2)*(x1+x2)", ["x1", "x2"])
        self.assertEqual(f.degree(), 3)
        self.assertEqual(f.evaluate((1, 1)), 12)

    def test_unknown_variable_reports_position(self):
        with self.assertRaises(LaurentParseError) as ctx:
            parse("1 + y", ["x"])
        self.assertEqual(ctx.exception.position, 4)

    def test_syntax_error(self):
        with self.assertRaises(LaurentParseError):
            parse("1 + * x", ["x"])
        with self.assertRaises(LaurentParseError):
            parse("(1 + x", ["x"])
        with self.assertRaises(LaurentParseError):
            parse("(1 + x)^-1", ["x"])

    def test_print_parse_round_trip(self):
        """Canonical text parses back to the same polynomial"""
        rng = random.Random(7)
        names = ["x1", "x2", "x3"]
        for _ in range(30):
            terms = {}
            for _ in range(rng.randint(1, 6)):
                exponent = tuple(rng.randint(-2, 3) for _ in names)
                terms[exponent] = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
            f = LaurentPolynomial(3, terms)
            self.assertEqual(parse(f.to_text(names), names), f)

    def test_canonical_order(self):
        f = parse("x1^2*x2 + x1 + 1", ["x1", "x2"])
        self.assertEqual(f.to_text(["x1", "x2"]), "1 + x1 + x1^2*x2")
        g = parse("x3 + x1*x2 + x2 + x1", ["x1", "x2", "x3"])
        self.assertEqual(g.to_text(["x1", "x2", "x3"]), "x1 + x2 + x3 + x1*x2")

    def test_parse_support_keeps_text_order(self):
        names = ["x1", "x2", "x3"]
        support = parse_support("x1 + x2 + x3 + x2*x3 + x1*x3 + x1*x2", names)
        self.assertEqual(
            support,
            [(1, 0, 0), (0, 1, 0), (0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 1, 0)],
        )

    def test_symbols_are_coefficient_atoms(self):
        f = parse("-t1*x2*x3 + x1", ["x1", "x2", "x3"], symbols=["t1"])
        self.assertEqual(f.terms[(0, 1, 1)], -sympy.Symbol("t1"))
        g = f.substitute({"t1": -1})
        self.assertEqual(g.terms[(0, 1, 1)], 1)


class EvaluateTestCase(SimpleTestCase):
    def test_examples(self):
        self.assertEqual(parse("1+x1", ["x1"]).evaluate((1,)), 2)
        self.assertEqual(parse("x^-1", ["x"]).evaluate((2.0,)), 0.5)

    def test_zero_at_negative_exponent(self):
        with self.assertRaises(EvaluationError):
            parse("x^-1", ["x"]).evaluate((0,))

    def test_linearity(self):
        """evaluate(f+g) = evaluate(f)+evaluate(g) and evaluate(c*f) = c*evaluate(f)"""
        rng = random.Random(3)
        names = ["x1", "x2"]
        f = parse("1 + 2*x1 - x1*x2^-1 + 3/4*x2^2", names)
        g = parse("x1^-1 - 5*x1*x2 + 7", names)
        c = complex(0.3, -1.2)
        for _ in range(100):
            x = (complex(rng.uniform(-2, 2), rng.uniform(-2, 2)),
                 complex(rng.uniform(-2, 2), rng.uniform(-2, 2)))
            self.assertAlmostEqual((f + g).evaluate(x), f.evaluate(x) + g.evaluate(x))
            self.assertAlmostEqual((f * c).evaluate(x), c * f.evaluate(x))

    def test_compiled_matches_exact(self):
        f = parse("1 + 2*x1 - x1*x2^-1 + 3/4*x2^2", ["x1", "x2"])
        x = (complex(0.5, 0.1), complex(-1.5, 2.0))
        self.assertAlmostEqual(complex(f.compile()(x)), f.evaluate(x))


class PartialTestCase(SimpleTestCase):
    def test_examples(self):
        self.assertEqual(parse("1+x1+x2", ["x1", "x2"]).partial(0), 1)
        self.assertEqual(parse("x1*x2", ["x1", "x2"]).partial(1), parse("x1", ["x1", "x2"]))
        self.assertEqual(parse("x1^-1", ["x1"]).partial(0), parse("-x1^-2", ["x1"]))

    def test_mixed_partials_commute(self):
        f = parse("x1^3*x2^-2 + 4*x1*x2 - x2^5 + x1^-1*x2", ["x1", "x2"])
        self.assertEqual(f.partial(0).partial(1), f.partial(1).partial(0))

    def test_index_out_of_range(self):
        with self.assertRaises(LaurentError):
            parse("x", ["x"]).partial(1)


class SymanzikTestCase(SimpleTestCase):
    def setUp(self):
        self.names = ["x1", "x2", "x3"]
        self.U, self.F = symanzik(Graph.triangle())

    def test_triangle_first_polynomial(self):
        self.assertEqual(self.U, parse("x1+x2+x3", self.names))

    def test_triangle_second_polynomial(self):
        expected = parse("-t1*x2*x3 - t2*x3*x1 - t3*x1*x2", self.names, symbols=["t1", "t2", "t3"])
        self.assertEqual(self.F, expected)

    def test_homogeneity_degrees(self):
        """U has degree #loops and F degree #loops + 1"""
        self.assertTrue(self.U.is_homogeneous())
        self.assertTrue(self.F.is_homogeneous())
        self.assertEqual(self.U.degree(), Graph.triangle().loops)
        self.assertEqual(self.F.degree(), Graph.triangle().loops + 1)

    def test_bubble(self):
        U, F = symanzik(Graph.bubble())
        self.assertEqual(U, LaurentPolynomial.constant(1, 1))
        self.assertEqual(F, LaurentPolynomial(1, {(1,): -sympy.Symbol("t1")}))

    def test_disconnected(self):
        with self.assertRaises(GraphError):
            symanzik(Graph(4, ((1, 2), (3, 4))))

    def test_feynman_spec_is_positive_at_euclidean_kinematics(self):
        spec = feynman_spec(Graph.triangle(), {"t1": -1, "t2": -1, "t3": -1}, 2, (1, 1, 1))
        self.assertEqual(len(spec.polys[0]), 6)
        self.assertTrue(spec.polys[0].is_positive())


class ModuliTestCase(SimpleTestCase):
    def test_m5(self):
        names = ["x1", "x2"]
        expected = [parse(t, names) for t in ("1+x1", "1+x1+x2", "x1+x2")]
        self.assertEqual(moduli_minors(5), expected)

    def test_m4(self):
        self.assertEqual(moduli_minors(4), [parse("1+x1", ["x1"])])

    def test_m6(self):
        names = ["x1", "x2", "x3"]
        minors = moduli_minors(6)
        self.assertEqual(len(minors), 6)
        for text in ("1+x1", "1+x1+x2", "1+x1+x2+x3", "x1+x2", "x1+x2+x3", "x2+x3"):
            self.assertIn(parse(text, names), minors)

    def test_too_small(self):
        with self.assertRaises(LaurentError):
            moduli_minors(3)


class IntegralSpecTestCase(SimpleTestCase):
    def test_moduli_spec_defaults(self):
        spec = moduli_spec(5)
        self.assertEqual(spec.nvars, 2)
        self.assertEqual(spec.nfactors, 3)
        self.assertEqual(spec.s, (1, 1, 1))

    def test_positive_mode_rejects_negative_coefficients(self):
        with self.assertRaises(SpecError):
            IntegralSpec((parse("1-x", ["x"]),), (1,), (1,))
        spec = beta_spec(Fraction(1, 2), Fraction(1, 3), unit_interval=True)
        self.assertFalse(spec.positive)

    def test_length_checks(self):
        f = parse("1+x", ["x"])
        with self.assertRaises(SpecError):
            IntegralSpec((f,), (1, 2), (1,))
        with self.assertRaises(SpecError):
            IntegralSpec((f,), (1,), (1, 1))
        with self.assertRaises(SpecError):
            IntegralSpec((LaurentPolynomial(1),), (1,), (1,))

    def test_scaled_by_one_is_identity(self):
        spec = beta_spec(3, 1)
        self.assertIs(spec.scaled(1.0), spec)
        self.assertEqual(spec.scaled(2).s, (Fraction(3, 2),))
