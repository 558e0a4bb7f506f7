from laurent.generators import moduli_minors, moduli_spec

from cli.commands import EulerCommand, parse_numbers


class Command(EulerCommand):
    help = "Problem file of the string integral over M_0,m in its positive parametrization"
    uses_spec = False

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--m", type=int, default=5, help="number of marked points (default 5)")
        parser.add_argument("--s", help="comma-separated exponents of the minors (default all 1)")
        parser.add_argument("--nu", help="comma-separated exponents of the variables (default all 1)")

    def run(self, **options):
        m = options["m"]
        s = parse_numbers(options["s"]) if options["s"] else None
        nu = parse_numbers(options["nu"]) if options["nu"] else None
        spec = moduli_spec(m, s, nu)
        labels = [list(label) for label, _ in moduli_minors(m, with_labels=True)]
        self.summary(f"M_0,{m}: {spec.nfactors} minors in {spec.nvars} variables")
        return dict(spec.to_json(), minors=labels)
