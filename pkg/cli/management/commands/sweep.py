from limits.methods import limit_sweep, sweep_to_csv

from cli.commands import EulerCommand, parse_numbers


class Command(EulerCommand):
    help = "I(delta) over a list of deltas as CSV, for plotting"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--deltas", required=True, help="comma-separated deltas, e.g. 1/100,1,10,100")
        parser.add_argument("--samples", type=int)
        parser.add_argument("--method", help="force one quadrature rule for every delta")

    def run(self, **options):
        spec = self.load_spec(options)
        rows = limit_sweep(
            spec, parse_numbers(options["deltas"]),
            samples=options["samples"], seed=options["seed"],
            method=options["method"], threads=options["threads"],
        )
        self.summary(f"{len(rows)} deltas")
        return sweep_to_csv(rows)
