from limits.methods import field_theory_limit, high_energy_limit, limit_sweep

from cli.commands import EulerCommand, parse_numbers


class Command(EulerCommand):
    help = "Field-theory and high-energy limits of the delta-rescaled integral"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--sweep", help="comma-separated deltas, e.g. 10,100,1/100")
        parser.add_argument("--samples", type=int, help="samples per delta for the stochastic rules")
        parser.add_argument(
            "--skip-count", action="store_true", help="do not compare the critical count with the Euler characteristic"
        )

    def run(self, **options):
        spec = self.load_spec(options)
        report = field_theory_limit(
            spec, seed=options["seed"], verify_count=not options["skip_count"], threads=options["threads"]
        )
        if spec.is_real():
            report.high_energy = high_energy_limit(spec)
        result = report.to_json()
        if options["sweep"]:
            rows = limit_sweep(
                spec, parse_numbers(options["sweep"]),
                samples=options["samples"], seed=options["seed"], threads=options["threads"],
            )
            result["sweep"] = [row.to_json() for row in rows]
        self.summary(
            f"Vol = {report.dual_volume_normalized}, sum 1/H = {report.critical_sum:.10g}"
            + (" (unreliable)" if report.unreliable else "")
        )
        return result
