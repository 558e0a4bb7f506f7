import math
from fractions import Fraction

import numpy as np
from django.test import SimpleTestCase, override_settings
from scipy.special import gammaln, loggamma

from laurent.generators import beta_spec, feynman_spec, moduli_spec
from laurent.graphs import Graph
from laurent.integrals import IntegralSpec
from laurent.parsing import parse
from polytope.geometry import polar_dual, weighted_sum

from .exceptions import IntegrationError
from .methods import evaluate, evaluate_idelta
from .quadrature import monte_carlo
from .sectors import SectorIntegrand, sector_decompose

F = Fraction
ZETA2 = math.pi ** 2 / 6


def beta_oracle(s, nu, delta=1):
    """delta^-1 * Gamma((s - nu)/delta) Gamma(nu/delta) / Gamma(s/delta)"""
    s, nu, delta = float(s), float(nu), float(delta)
    return math.exp(gammaln((s - nu) / delta) + gammaln(nu / delta) - gammaln(s / delta)) / delta


def triangle_spec():
    return feynman_spec(Graph.triangle(), {"t1": -1, "t2": -1, "t3": -1}, 2, (1, 1, 1))


class SectorDecomposeTestCase(SimpleTestCase):
    def test_beta_segment(self):
        sectors = sector_decompose(beta_spec(3, 1))
        self.assertEqual(len(sectors), 2)
        self.assertEqual(sorted(s.rays for s in sectors), [((-1,),), ((1,),)])
        self.assertEqual(sorted(s.rates for s in sectors), [(F(1),), (F(2),)])
        self.assertEqual(sum(s.envelope_volume() for s in sectors), F(3, 2))

    def test_pentagon(self):
        sectors = sector_decompose(moduli_spec(5, nu=(1, 1)))
        self.assertEqual(len(sectors), 5)
        for sector in sectors:
            self.assertEqual(len(sector.rays), 2)

    def test_triangle_feynman_is_subdivided(self):
        spec = triangle_spec()
        sectors = sector_decompose(spec)
        self.assertGreaterEqual(len(sectors), 6)
        for sector in sectors:
            self.assertEqual(len(sector.rays), 3)
            self.assertGreater(sector.determinant, 0)

    def test_envelopes_add_up_to_dual_volume(self):
        """sum over sectors of |det A| / prod(rates) is Vol((P(s) - nu)°)"""
        for spec in (moduli_spec(5, nu=(1, 1)), triangle_spec(), beta_spec(F(7, 2), F(5, 4))):
            P = weighted_sum(spec.polys, spec.real_s())
            expected = polar_dual(P.translate(tuple(-x for x in spec.real_nu()))).normalized_volume()
            self.assertEqual(sum(s.envelope_volume() for s in sector_decompose(spec)), expected)

    def test_degenerate_polytope(self):
        spec = IntegralSpec((parse("1 + x1", ["x1", "x2"]),), (1,), (F(1, 2), F(1, 2)))
        with self.assertRaises(IntegrationError):
            sector_decompose(spec)


class EvaluateTestCase(SimpleTestCase):
    def test_beta_monte_carlo(self):
        result = evaluate(beta_spec(3, 1), samples=1000000, seed=1)
        self.assertLess(abs(result.estimate - 0.5), 3 * result.std_error)

    def test_beta_gauss(self):
        result = evaluate(beta_spec(3, 1), method="gauss")
        self.assertAlmostEqual(result.estimate, 0.5, places=10)

    def test_moduli_gauss(self):
        result = evaluate(moduli_spec(5, nu=(1, 1)), method="gauss")
        self.assertAlmostEqual(result.estimate, ZETA2, delta=1e-6)

    def test_moduli_monte_carlo(self):
        result = evaluate(moduli_spec(5, nu=(1, 1)), samples=1000000, seed=1)
        self.assertLess(abs(result.estimate - ZETA2), 3 * result.std_error)

    def test_complex_exponents(self):
        spec = beta_spec(3, complex(1, 0.5))
        nu, s = complex(1, 0.5), 3
        exact = complex(np.exp(loggamma(nu) + loggamma(s - nu) - loggamma(s)))
        result = evaluate(spec, samples=1000000, seed=2)
        self.assertLess(abs(result.estimate.real - exact.real), 3 * result.std_error.real)
        self.assertLess(abs(result.estimate.imag - exact.imag), 3 * result.std_error.imag)

    def test_triangle_feynman_reproducible(self):
        spec = triangle_spec()
        one = evaluate(spec, samples=1000000, seed=1)
        two = evaluate(spec, samples=1000000, seed=2)
        self.assertTrue(math.isfinite(one.estimate))
        self.assertGreater(one.estimate, 0)
        self.assertLess(abs(one.estimate - two.estimate), 3 * math.hypot(one.std_error, two.std_error))

    def test_sandwich_bounds(self):
        result = evaluate(moduli_spec(5, nu=(1, 1)), samples=200000, seed=3)
        for sector in result.sectors:
            self.assertLessEqual(sector.lower, sector.estimate + 3 * sector.std_error)
            self.assertGreaterEqual(sector.upper, sector.estimate - 3 * sector.std_error)

    def test_error_scales_with_samples(self):
        spec = moduli_spec(5, nu=(1, 1))
        small = evaluate(spec, samples=100000, seed=4)
        large = evaluate(spec, samples=400000, seed=4)
        ratio = small.std_error / large.std_error
        self.assertGreater(ratio, 2 / 1.5)
        self.assertLess(ratio, 2 * 1.5)

    @override_settings(EULER_BATCH_SIZE=4096)
    def test_thread_count_does_not_change_estimate(self):
        spec = moduli_spec(5, s=(F(3, 2), 1, F(1, 2)), nu=(F(1, 2), F(3, 4)))
        sectors = sector_decompose(spec)
        one = monte_carlo(spec, sectors, 150000, 7, threads=1)
        four = monte_carlo(spec, sectors, 150000, 7, threads=4)
        self.assertEqual([e.estimate for e in one], [e.estimate for e in four])

    def test_divergent_spec_refused(self):
        with self.assertRaises(IntegrationError):
            evaluate(moduli_spec(5, nu=(2, 2)), samples=1000)

    def test_unit_interval_chart_refused(self):
        with self.assertRaises(IntegrationError):
            evaluate(beta_spec(F(1, 2), F(1, 3), unit_interval=True), samples=1000)

    def test_envelope_only_integrand(self):
        """With g_i = 1 the sector estimator reproduces Vol(B_{v - nu}) exactly."""
        spec = moduli_spec(5, s=(F(1, 1000), F(1, 1000), F(1, 1000)), nu=(F(1, 1000), F(1, 1000)))
        for sector in sector_decompose(spec):
            integrand = SectorIntegrand(spec, sector)
            integrand.s = np.zeros_like(integrand.s)
            values = integrand(np.random.default_rng(0).exponential(size=(10, 2)))
            np.testing.assert_allclose(values, 1.0)


class EvaluateIdeltaTestCase(SimpleTestCase):
    def test_unit_delta(self):
        spec = moduli_spec(5, nu=(1, 1))
        self.assertEqual(
            evaluate_idelta(spec, 1, samples=20000, seed=5).estimate,
            evaluate(spec, samples=20000, seed=5).estimate,
        )

    def test_beta_field_theory_regime(self):
        for delta in (10, 100, 1000):
            result = evaluate_idelta(beta_spec(3, 1), delta, method="gauss")
            self.assertAlmostEqual(result.value, beta_oracle(3, 1, delta), delta=1e-8 * beta_oracle(3, 1, delta))
        self.assertAlmostEqual(evaluate_idelta(beta_spec(3, 1), 1000, method="gauss").value, 1.5, delta=5e-3)

    def test_beta_high_energy_regime(self):
        delta = F(1, 100)
        result = evaluate_idelta(beta_spec(3, 1), delta, samples=40000, seed=6, method="saddle")
        exact = beta_oracle(3, 1, 0.01)
        self.assertLess(abs(result.value - exact), 1e-2 * exact)
