import random
from fractions import Fraction

from django.test import SimpleTestCase

from laurent.generators import beta_spec, moduli_minors, moduli_spec
from laurent.integrals import IntegralSpec
from laurent.parsing import parse
from laurent.polynomials import LaurentPolynomial
from polytope.geometry import weighted_sum

from .exceptions import ConvergenceError
from .methods import (
    BOUNDARY,
    NONPOSITIVE_S,
    OUTSIDE,
    check_convergence,
    gamma_skeleton,
)

F = Fraction


class CheckConvergenceTestCase(SimpleTestCase):
    def test_pentagon_inside(self):
        report = check_convergence(moduli_spec(5, nu=(1, 1)))
        self.assertTrue(report.converges)
        self.assertEqual(report.violated_facets, [])
        self.assertTrue(report.decisive)

    def test_pentagon_outside(self):
        report = check_convergence(moduli_spec(5, nu=(2, 2)))
        self.assertFalse(report.converges)
        self.assertIn(OUTSIDE, report.reasons)
        # nu2 = 2 also sits on the wall x2 <= s2 + s3
        self.assertEqual(
            [(g.r, g.w) for g in report.violated_facets],
            [((-1, -1), (-1, -1, -1)), ((0, -1), (0, -1, -1))],
        )

    def test_beta_boundary(self):
        report = check_convergence(beta_spec(1, 0))
        self.assertFalse(report.converges)
        self.assertTrue(report.boundary)
        self.assertEqual(report.reasons, [BOUNDARY])

    def test_nonpositive_s(self):
        report = check_convergence(beta_spec(-1, F(1, 2)))
        self.assertFalse(report.converges)
        self.assertEqual(report.reasons, [NONPOSITIVE_S])

    def test_complex_parameters_use_real_parts(self):
        spec = IntegralSpec((parse("1+y", ["y"]),), (complex(3, 2),), (complex(1, -5),))
        self.assertTrue(check_convergence(spec).converges)

    def test_scaling_invariance(self):
        rng = random.Random(4)
        polys = moduli_minors(5)
        for _ in range(20):
            s = tuple(F(rng.randint(1, 9), rng.randint(1, 4)) for _ in polys)
            nu = tuple(F(rng.randint(0, 12), rng.randint(1, 4)) for _ in range(2))
            lam = F(rng.randint(1, 9), rng.randint(1, 9))
            spec = IntegralSpec(polys, s, nu)
            scaled = IntegralSpec(polys, tuple(lam * x for x in s), tuple(lam * x for x in nu))
            self.assertEqual(check_convergence(spec).converges, check_convergence(scaled).converges)

    def test_unit_interval_chart_is_not_decisive(self):
        report = check_convergence(beta_spec(F(1, 2), F(1, 3), unit_interval=True))
        self.assertFalse(report.decisive)

    def test_json(self):
        data = check_convergence(moduli_spec(5, nu=(2, 2))).to_json()
        self.assertFalse(data["converges"])
        self.assertEqual(data["violated_facets"][0]["text"], "Gamma(s1 + s2 + s3 - nu1 - nu2)")
        self.assertEqual(len(data["polytope"]["vertices"]), 5)


class GammaSkeletonTestCase(SimpleTestCase):
    def test_beta(self):
        skeleton = gamma_skeleton([parse("1+y", ["y"])])
        self.assertEqual({(g.r, g.w) for g in skeleton.factors}, {((1,), (F(0),)), ((-1,), (F(-1),))})
        self.assertEqual(set(g.to_text() for g in skeleton.factors), {"Gamma(nu1)", "Gamma(s1 - nu1)"})

    def test_pentagon_has_five_factors(self):
        skeleton = gamma_skeleton(moduli_minors(5))
        self.assertEqual(len(skeleton), 5)
        self.assertIn(((1, 1), (F(0), F(0), F(1))), {(g.r, g.w) for g in skeleton.factors})

    def test_facet_count_matches_weighted_sum(self):
        rng = random.Random(9)
        names = ["x1", "x2"]
        polys = [parse("1 + x1 + x2^2", names), parse("x1*x2 + x2 + x1^-1", names)]
        skeleton = gamma_skeleton(polys)
        for _ in range(5):
            s = (F(rng.randint(1, 20), 3), F(rng.randint(1, 20), 7))
            self.assertEqual(len(weighted_sum(polys, s).facets), len(skeleton))

    def test_check_seed_does_not_change_skeleton(self):
        polys = moduli_minors(5)
        expected = [(g.r, g.w) for g in gamma_skeleton(polys).factors]
        for seed in (1, 2**40):
            self.assertEqual([(g.r, g.w) for g in gamma_skeleton(polys, check_seed=seed).factors], expected)

    def test_monomial_is_degenerate(self):
        with self.assertRaises(ConvergenceError):
            gamma_skeleton([LaurentPolynomial(1, {(1,): 1})])

    def test_arguments(self):
        skeleton = gamma_skeleton([parse("1+y", ["y"])])
        self.assertEqual(sorted(skeleton.arguments((F(3),), (F(1),))), [1, 2])
