import math
from fractions import Fraction

import numpy as np
from django.test import SimpleTestCase

from critpoints.exceptions import CriticalPointError
from integrate.methods import evaluate_idelta
from laurent.generators import beta_spec, moduli_minors, moduli_spec
from laurent.integrals import IntegralSpec
from laurent.polynomials import LaurentPolynomial
from polytope.geometry import dual_cells, weighted_sum

from .exceptions import LimitError
from .methods import (
    dual_volume,
    field_theory_limit,
    high_energy_limit,
    high_energy_normalized,
    inverse_square_root,
    limit_sweep,
    rational_guess,
    sweep_to_csv,
)

F = Fraction
SQRT5 = math.sqrt(5)


def barycenter_nu(polys, s):
    """sum_i s_i * (mean exponent of f_i), interior to P(s) when P(s) is full-dimensional"""
    n = polys[0].nvars
    nu = [F(0)] * n
    for f, s_i in zip(polys, s):
        for j in range(n):
            nu[j] += s_i * F(sum(e[j] for e in f.support), len(f))
    return tuple(nu)


def random_specs(count, seed):
    rng = np.random.default_rng(seed)
    specs = []
    for k in range(count):
        if k % 2 == 0:
            polys = moduli_minors(5)
        else:
            points = [(0, 0), (1, 0), (0, 1), (1, 1), (2, 0), (0, 2)]
            chosen = rng.choice(len(points), size=3, replace=False)
            first = {points[c]: int(rng.integers(1, 5)) for c in chosen}
            first[(0, 0)] = 1
            polys = [LaurentPolynomial(2, {(0, 0): 1, (1, 0): 1, (0, 1): 1}), LaurentPolynomial(2, first)]
        s = tuple(F(int(rng.integers(2, 12)), int(rng.integers(2, 7))) for _ in polys)
        specs.append(IntegralSpec(tuple(polys), s, barycenter_nu(polys, s)))
    return specs


class DualVolumeTestCase(SimpleTestCase):
    def test_pentagon(self):
        normalized, euclidean = dual_volume(moduli_spec(5, nu=(1, 1)))
        self.assertEqual(normalized, 5)
        self.assertEqual(euclidean, F(5, 2))

    def test_beta(self):
        normalized, euclidean = dual_volume(beta_spec(3, 1))
        self.assertEqual(normalized, F(3, 2))
        self.assertEqual(euclidean, F(3, 2))

    def test_mirror_symmetric_cells(self):
        spec = beta_spec(2, 1)
        P = weighted_sum(spec.polys, spec.real_s())
        volumes = [cell.normalized_volume() for cell in dual_cells(P, (1,)).values()]
        self.assertEqual(volumes, [1, 1])
        self.assertEqual(dual_volume(spec)[0], 2)

    def test_not_interior(self):
        with self.assertRaises(LimitError):
            dual_volume(moduli_spec(5, nu=(2, 2)))


class FieldTheoryLimitTestCase(SimpleTestCase):
    def test_pentagon(self):
        report = field_theory_limit(moduli_spec(5, nu=(1, 1)), seed=1)
        self.assertEqual(report.dual_volume_normalized, 5)
        self.assertAlmostEqual(report.critical_sum.real, 5.0, delta=1e-9)
        self.assertLess(abs(report.critical_sum.imag), 1e-8)
        self.assertEqual(report.critical_count, 2)
        self.assertEqual(report.expected_count, 2)
        self.assertFalse(report.unreliable)
        self.assertEqual(report.rational_guess, 5)
        self.assertEqual(report.to_json()["dual_volume_normalized"], "5")

    def test_beta(self):
        report = field_theory_limit(beta_spec(3, 1), seed=1)
        self.assertEqual(report.dual_volume_normalized, F(3, 2))
        self.assertAlmostEqual(report.critical_sum.real, 1.5, delta=1e-9)

    def test_beta_family_is_rational(self):
        s, nu = F(7, 2), F(5, 4)
        report = field_theory_limit(beta_spec(s, nu), seed=2, verify_count=False)
        self.assertEqual(report.rational_guess, s / (nu * (s - nu)))
        self.assertEqual(report.dual_volume_normalized, F(56, 45))

    def test_two_routes_agree(self):
        for spec in random_specs(10, seed=11):
            report = field_theory_limit(spec, seed=3, verify_count=False)
            self.assertLess(report.agreement_gap, 1e-6, msg=str(spec.to_json()))


class HighEnergyLimitTestCase(SimpleTestCase):
    def test_beta(self):
        limit = high_energy_limit(beta_spec(3, 1))
        self.assertAlmostEqual(limit.prefactor, math.sqrt(1.5), places=12)
        self.assertAlmostEqual(limit.point[0], 0.5, places=12)

    def test_moduli(self):
        limit = high_energy_limit(moduli_spec(5, nu=(1, 1)))
        self.assertAlmostEqual(limit.prefactor, ((25 - 11 * SQRT5) / 2) ** -0.5, places=8)
        self.assertGreater(limit.prefactor, 0)

    def test_branch_for_negative_hessian(self):
        self.assertEqual(inverse_square_root(4.0), 0.5)
        self.assertAlmostEqual(inverse_square_root(-4.0), -0.5j)

    def test_complex_s_refused(self):
        with self.assertRaises(CriticalPointError):
            high_energy_limit(beta_spec(complex(3, 1), 1))

    def test_beta_gamma_oracle(self):
        """Stirling: the normalized exact beta function is within 2% of the limit at delta = 0.01"""
        s, nu, delta = 3.0, 1.0, 0.01
        log_j = math.lgamma((s - nu) / delta) + math.lgamma(nu / delta) - math.lgamma(s / delta)
        a = nu / (s - nu)
        log_l = nu * math.log(a) - s * math.log(1 + a)
        value = math.exp(-0.5 * math.log(2 * math.pi * delta) - log_l / delta + log_j)
        self.assertLess(abs(value - math.sqrt(s / (nu * (s - nu)))), 0.02 * math.sqrt(1.5))

    def test_beta_saddle_estimate(self):
        spec = beta_spec(3, 1)
        result = evaluate_idelta(spec, F(1, 100), samples=40000, seed=4, method="saddle")
        value, error = high_energy_normalized(spec, F(1, 100), result)
        self.assertLess(abs(value - math.sqrt(1.5)), 0.02 * math.sqrt(1.5))
        self.assertLess(error, 0.01)


class LimitSweepTestCase(SimpleTestCase):
    def test_beta_field_theory_side(self):
        rows = limit_sweep(beta_spec(3, 1), [10, 100, 1000], seed=1)
        gaps = [abs(row.estimate - 1.5) for row in rows]
        self.assertEqual(gaps, sorted(gaps, reverse=True))
        self.assertLess(gaps[-1], 5e-3)
        self.assertTrue(all(row.method == "gauss" for row in rows))

    def test_beta_high_energy_side(self):
        (row,) = limit_sweep(beta_spec(3, 1), [F(1, 100)], samples=40000, seed=1)
        self.assertEqual(row.method, "saddle")
        self.assertLess(abs(row.normalized - math.sqrt(1.5)), 0.02 * math.sqrt(1.5))

    def test_moduli_trend(self):
        rows = limit_sweep(moduli_spec(5, nu=(1, 1)), [10, 100], seed=1)
        self.assertLess(abs(rows[1].estimate - 5), abs(rows[0].estimate - 5))
        self.assertLess(abs(rows[1].estimate - 5), 0.1)

    def test_csv(self):
        rows = limit_sweep(beta_spec(3, 1), [10], seed=1)
        lines = sweep_to_csv(rows).strip().splitlines()
        self.assertEqual(lines[0], "delta,estimate,std_error,method,normalized,normalized_error")
        self.assertEqual(len(lines), 2)
        self.assertEqual(rational_guess(1.5), F(3, 2))
