from integrate.methods import METHODS
from integrate.quadrature import MONTE_CARLO
from shiftops.exceptions import ShiftopsError, ShiftVerificationRefused
from shiftops.methods import annihilator_generators, beta_reduction, verify_shift

from cli.commands import EulerCommand


class Command(EulerCommand):
    help = "Shift operators annihilating the integral, their numeric check and beta-family reduction"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--verify", action="store_true", help="check every generator against quadrature")
        parser.add_argument(
            "--beta-reduce", nargs=2, type=int, metavar=("A", "B"),
            help="c^{A,B} at (s, nu), read as the exponents of x^nu (1-x)^-s on (0,1)",
        )
        parser.add_argument("--samples", type=int)
        parser.add_argument("--method", choices=METHODS, default=MONTE_CARLO)

    def reduce(self, spec, a, b):
        if (spec.nfactors, spec.nvars) != (1, 1):
            raise ShiftopsError("--beta-reduce needs one factor in one variable")
        (s,), (nu,) = spec.s, spec.nu
        return {
            "a": a,
            "b": b,
            "coefficient": str(beta_reduction(a, b, s, nu)),
            "symbolic": str(beta_reduction(a, b)),
        }

    def run(self, **options):
        spec = self.load_spec(options)
        operators = annihilator_generators(spec)
        result = {"spec": spec.to_json(), "generators": [op.to_json() for op in operators]}
        if options["verify"]:
            checks = []
            for op in operators:
                try:
                    report = verify_shift(
                        spec, op, samples=options["samples"], seed=options["seed"],
                        method=options["method"], threads=options["threads"],
                    )
                except ShiftVerificationRefused as e:
                    checks.append({"operator": op.to_text(), "refused": e.message})
                    self.summary(f"refused: {e.message}")
                    continue
                checks.append(report.to_json())
                self.summary(f"{'passed' if report.passed else 'FAILED'}: {op.to_text()}")
            result["verification"] = checks
        if options["beta_reduce"]:
            result["beta_reduction"] = self.reduce(spec, *options["beta_reduce"])
        return result
