import json
import os
import tempfile
from io import StringIO

import numpy as np
import sympy
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from .commands import EulerCommand

BETA = {"vars": ["y"], "f": ["1 + y"], "s": [[3, 1]], "nu": [[1, 1]]}
BETA_SHIFT = {"vars": ["y"], "f": ["1 + y"], "s": [[3, 1]], "nu": [[3, 2]]}
UNIT_BETA = {"vars": ["x"], "f": ["1 - x"], "s": ["1/2"], "nu": ["1/3"], "positive": False}
TRIANGLE = {"vars": ["x1", "x2", "x3"], "f": ["x1 + x2 + x3 + x2*x3 + x1*x3 + x1*x2"]}
TRIANGLE_RECIPE = {
    "fixed": [1, 2, 3],
    "scale": {"4": -1, "5": -1, "6": -1},
    "names": {"4": "t1", "5": "t2", "6": "t3"},
}


def run(name, data=None, **options):
    """(stdout, stderr) of a subcommand, the problem file passed on stdin."""
    out, err = StringIO(), StringIO()
    if data is not None:
        options.setdefault("spec", "-")
        options["stdin"] = StringIO(json.dumps(data))
    call_command(name, stdout=out, stderr=err, **options)
    return out.getvalue(), err.getvalue()


def run_json(name, data=None, **options):
    out, _ = run(name, data, **options)
    return json.loads(out)


class SpecFileTestCase(SimpleTestCase):
    def test_malformed_json(self):
        with self.assertRaises(CommandError) as ctx:
            call_command("convergence", spec="-", stdin=StringIO("{not json"), stdout=StringIO())
        self.assertEqual(ctx.exception.returncode, 4)

    def test_missing_field(self):
        with self.assertRaises(CommandError) as ctx:
            run("convergence", {"vars": ["y"], "f": ["1 + y"]})
        self.assertEqual(ctx.exception.returncode, 4)
        self.assertIn('"s"', str(ctx.exception))

    def test_parse_error(self):
        with self.assertRaises(CommandError) as ctx:
            run("convergence", dict(BETA, f=["1 + z"]))
        self.assertEqual(ctx.exception.returncode, 4)

    def test_precondition_exit_code(self):
        with self.assertRaises(CommandError) as ctx:
            run("integrate", dict(BETA, nu=[[4, 1]]), method="gauss")
        self.assertEqual(ctx.exception.returncode, 2)

    def test_file_path(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, "beta.json")
            with open(path, "w") as fp:
                json.dump(BETA, fp)
            result = run_json("convergence", spec=path)
        self.assertTrue(result["report"]["converges"])


class ModuliCommandTestCase(SimpleTestCase):
    def test_round_trip(self):
        spec = run_json("moduli", m=5)
        self.assertEqual(spec["f"], ["1 + x1", "1 + x1 + x2", "x1 + x2"])
        self.assertEqual(spec["minors"], [[1, 3], [1, 4], [2, 4]])
        result = run_json("convergence", spec)
        self.assertTrue(result["report"]["converges"])
        self.assertEqual(result["spec"]["f"], spec["f"])


class ConvergenceCommandTestCase(SimpleTestCase):
    def test_gamma_text(self):
        out, _ = run("convergence", BETA, gamma=True)
        self.assertIn("Gamma", out)

    def test_outside(self):
        result = run_json("convergence", dict(BETA, nu=[[4, 1]]))
        self.assertFalse(result["report"]["converges"])
        self.assertEqual(result["report"]["reasons"], ["outside"])


class NewtonCommandTestCase(SimpleTestCase):
    def test_beta(self):
        result = run_json("newton", BETA)
        self.assertEqual(result["newton_polytopes"][0]["vertices"], [[[0, 1]], [[1, 1]]])
        self.assertEqual(result["weighted_sum"]["vertices"], [[[0, 1]], [[3, 1]]])


class IntegrateCommandTestCase(SimpleTestCase):
    def test_gauss(self):
        result = run_json("integrate", BETA, method="gauss")
        self.assertAlmostEqual(result["result"]["estimate"], 0.5, places=10)
        self.assertEqual(result["spec"]["s"], [[3, 1]])

    def test_monte_carlo_is_seeded(self):
        first = run_json("integrate", BETA, samples=5000, seed=4)
        second = run_json("integrate", BETA, samples=5000, seed=4)
        self.assertEqual(first["result"], second["result"])

    def test_emit_sectors(self):
        result = run_json("integrate", BETA, method="gauss", emit_sectors=True)
        self.assertEqual(len(result["sector_decomposition"]), 2)


class CriticalCommandTestCase(SimpleTestCase):
    def test_positive(self):
        result = run_json("critical", BETA, positive=True)
        self.assertAlmostEqual(result["positive"]["point"][0], 0.5, places=10)
        self.assertLess(result["positive"]["residual"], 1e-8)

    def test_all(self):
        result = run_json("critical", BETA, seed=1, no_cache=True)
        self.assertEqual(result["critical"]["count"], 1)


class LimitsCommandTestCase(SimpleTestCase):
    def test_beta(self):
        result = run_json("limits", BETA, seed=1)
        self.assertEqual(result["dual_volume_normalized"], "3/2")
        self.assertAlmostEqual(result["critical_sum"]["re"], 1.5, places=9)
        self.assertAlmostEqual(result["high_energy"]["prefactor"], 1.5 ** 0.5, places=10)

    def test_sweep_csv(self):
        out, _ = run("sweep", BETA, deltas="10,100", seed=1)
        lines = out.strip().splitlines()
        self.assertEqual(lines[0], "delta,estimate,std_error,method,normalized,normalized_error")
        self.assertEqual(len(lines), 3)
        self.assertTrue(lines[1].startswith("10.0,"))


class GkzCommandTestCase(SimpleTestCase):
    def test_triangle(self):
        result = run_json("gkz", TRIANGLE)
        texts = [op["text"] for op in result["system"]["binomials"]]
        self.assertEqual(texts, ["d[1]*d[4] - d[3]*d[6]", "d[2]*d[5] - d[3]*d[6]"])
        self.assertEqual(result["system"]["beta_convention"], "beta = -(s, nu)")
        self.assertEqual(result["cayley_volume"], "4")
        self.assertNotIn("resonance", result)

    def test_specialize(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, "recipe.json")
            with open(path, "w") as fp:
                json.dump(TRIANGLE_RECIPE, fp)
            result = run_json("gkz", TRIANGLE, specialize=path)
        self.assertEqual(result["recipe"], TRIANGLE_RECIPE)
        self.assertEqual(len(result["specialized"]), 3)
        self.assertTrue(result["specialized"][2]["text"].startswith("t1*d[t1] + t2*d[t2] + t3*d[t3]"))

    def test_resonance(self):
        result = run_json("gkz", dict(TRIANGLE, s=[2], nu=[1, 1, 1]))
        self.assertFalse(result["resonance"]["nonresonant"])


class ShiftCommandTestCase(SimpleTestCase):
    def test_generators(self):
        result = run_json("shift", BETA_SHIFT)
        texts = [op["text"] for op in result["generators"]]
        self.assertEqual(texts, ["1 - sigma_s[1] - sigma_s[1]*sigma_nu[1]", "(nu - 1)*sigma_nu[1]^-1 - s*sigma_s[1]"])

    def test_verify(self):
        result = run_json("shift", BETA_SHIFT, verify=True, method="gauss")
        self.assertTrue(all(check["passed"] for check in result["verification"]))

    def test_refusal_is_reported(self):
        result = run_json("shift", {"vars": ["y"], "f": ["1 + y"], "s": ["5/6"], "nu": ["1/3"]}, verify=True, method="gauss")
        self.assertIn("refused", result["verification"][1])

    def test_beta_reduce(self):
        result = run_json("shift", UNIT_BETA, beta_reduce=[1, 1])
        self.assertEqual(result["beta_reduction"]["coefficient"], "-2/3")
        self.assertEqual(result["beta_reduction"]["symbolic"], "-nu/s")


class SymanzikCommandTestCase(SimpleTestCase):
    def test_triangle(self):
        result = run_json("symanzik", preset="triangle")
        self.assertEqual(result["U"], "x1 + x2 + x3")
        self.assertEqual(result["loops"], 1)


class ClearCriticalCacheTestCase(SimpleTestCase):
    def test_clear(self):
        run("critical", BETA, seed=1)
        out, _ = run("clear_critical_cache")
        self.assertIn("Total entries cleared", out)


class RaisingCommand(EulerCommand):
    uses_spec = False

    def __init__(self, error):
        super().__init__()
        self.error = error

    def run(self, **options):
        raise self.error


class ExitCodeTestCase(SimpleTestCase):
    def returncode(self, error):
        with self.assertRaises(CommandError) as ctx:
            call_command(RaisingCommand(error), stdout=StringIO(), stderr=StringIO())
        return ctx.exception.returncode

    def test_singular_matrix(self):
        self.assertEqual(self.returncode(np.linalg.LinAlgError("Singular matrix")), 3)

    def test_polynomial_error(self):
        self.assertEqual(self.returncode(sympy.PolynomialError("x**(1/2) contains an element of the generators set")), 4)

    def test_bad_value(self):
        self.assertEqual(self.returncode(ValueError("math domain error")), 4)

    def test_bugs_propagate(self):
        with self.assertRaises(KeyError):
            call_command(RaisingCommand(KeyError("nu")), stdout=StringIO(), stderr=StringIO())

    def test_degenerate_spec(self):
        with self.assertRaises(CommandError) as ctx:
            run("critical", dict(BETA, s=[[0, 1]], nu=[[0, 1]]))
        self.assertEqual(ctx.exception.returncode, 2)
