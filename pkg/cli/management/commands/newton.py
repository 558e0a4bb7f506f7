from laurent.helpers import real_part, to_fraction
from polytope.geometry import newton_polytope, weighted_sum

from cli.commands import EulerCommand
from cli.specfile import optional_numbers, polys_from_data


class Command(EulerCommand):
    help = "Newton polytopes of the factors and, when s is given, P(s) = sum of s_i Newt(f_i)"

    def run(self, **options):
        data = self.load_data(options)
        polys, variables = polys_from_data(data, options["spec"])
        result = {
            "vars": variables,
            "f": [f.to_text(variables) for f in polys],
            "newton_polytopes": [newton_polytope(f).to_json() for f in polys],
        }
        s = optional_numbers(data, "s", options["spec"])
        if s is not None:
            P = weighted_sum(polys, [to_fraction(real_part(x)) for x in s])
            result["weighted_sum"] = P.to_json()
            self.summary(f"P(s): {len(P.vertices)} vertices, dimension {P.dim}")
        return result
