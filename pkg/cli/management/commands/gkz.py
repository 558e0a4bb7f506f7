from gkz.methods import TorusRecipe, cayley_volume, check_nonresonant, gkz_system, specialize

from cli.commands import EulerCommand
from cli.exceptions import SpecFileError
from cli.specfile import optional_numbers, polys_from_data, read_json, spec_from_data, supports_from_data


class Command(EulerCommand):
    help = "A-hypergeometric system of the integral; symbolic in (s, nu) when the file omits them"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--specialize", metavar="RECIPE", help="torus recipe (JSON) fixing some coefficients to 1")
        parser.add_argument("--degree-bound", type=int, help="largest binomial degree to search")

    def load_recipe(self, path):
        data = read_json(path, self.stdin)
        try:
            return TorusRecipe.from_json(data)
        except (KeyError, TypeError, ValueError) as e:
            raise SpecFileError(f"malformed torus recipe ({e})", path=path)

    def run(self, **options):
        path = options["spec"]
        data = self.load_data(options)
        s = optional_numbers(data, "s", path)
        nu = optional_numbers(data, "nu", path)
        system = gkz_system(supports_from_data(data, path), s, nu, degree_bound=options["degree_bound"])
        if s is not None and nu is not None:
            embedded = spec_from_data(data, path).to_json()
        else:
            polys, variables = polys_from_data(data, path)
            embedded = {"vars": variables, "f": [f.to_text(variables) for f in polys]}
        result = {
            "spec": embedded,
            "system": system.to_json(),
            "cayley_volume": str(cayley_volume(system.cayley)),
        }
        if s is not None and nu is not None:
            result["resonance"] = check_nonresonant(system.cayley, system.beta).to_json()
        if options["specialize"]:
            recipe = self.load_recipe(options["specialize"])
            result["recipe"] = recipe.to_json()
            result["specialized"] = [op.to_json() for op in specialize(system, recipe)]
        self.summary(
            f"{system.cayley.d}x{system.cayley.ncolumns} Cayley matrix, "
            f"{len(system.binomials)} binomials, {len(system.euler_ops)} Euler operators"
        )
        return result
