from convergence.methods import check_convergence, gamma_skeleton

from cli.commands import EulerCommand


class Command(EulerCommand):
    help = "Nilsson-Passare convergence test of the integral at (s, nu)"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument(
            "--gamma", action="store_true", help="print the Gamma-factor product as text instead of JSON"
        )

    def run(self, **options):
        spec = self.load_spec(options)
        skeleton = gamma_skeleton(spec.polys)
        if options["gamma"]:
            return skeleton.to_text()
        report = check_convergence(spec)
        self.summary(f"converges: {report.converges} ({', '.join(report.reasons) or 'interior'})")
        return {"spec": spec.to_json(), "report": report.to_json(), "gamma": skeleton.to_json()}
