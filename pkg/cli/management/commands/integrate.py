from integrate.methods import METHODS, evaluate_idelta
from integrate.quadrature import MONTE_CARLO
from integrate.sectors import sector_decompose
from laurent.helpers import as_number

from cli.commands import EulerCommand


class Command(EulerCommand):
    help = "Numerical value of the integral, optionally of I(delta)"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--samples", type=int, help="Monte Carlo samples (default 100000)")
        parser.add_argument("--delta", default="1", help="evaluate I(delta) instead of the integral")
        parser.add_argument("--method", choices=METHODS, default=MONTE_CARLO)
        parser.add_argument("--emit-sectors", action="store_true", help="include the sector decomposition")

    def run(self, **options):
        spec = self.load_spec(options)
        delta = as_number(options["delta"])
        result = evaluate_idelta(
            spec, delta,
            samples=options["samples"], seed=options["seed"],
            method=options["method"], threads=options["threads"],
        )
        output = {"spec": spec.to_json(), "delta": str(delta), "result": result.to_json()}
        if options["emit_sectors"]:
            output["sector_decomposition"] = [sector.to_json() for sector in sector_decompose(spec.scaled(delta))]
        self.summary(f"I = {result.value} +- {result.error} ({result.method}, seed {result.seed})")
        return output
