from laurent.graphs import Graph, symanzik

from cli.commands import EulerCommand
from cli.exceptions import SpecFileError
from cli.specfile import read_json

PRESETS = {"triangle": Graph.triangle, "bubble": Graph.bubble}


class Command(EulerCommand):
    help = "Symanzik polynomials U and F of a Feynman graph"
    uses_spec = False

    def add_arguments(self, parser):
        super().add_arguments(parser)
        group = parser.add_mutually_exclusive_group(required=True)
        group.add_argument("--graph", help='graph file: {"vertices": 3, "edges": [[2, 3], ...], "legs": [[1, "t1"], ...]}')
        group.add_argument("--preset", choices=sorted(PRESETS))

    def load_graph(self, path):
        data = read_json(path, self.stdin)
        try:
            return Graph.from_json(data)
        except (KeyError, TypeError, ValueError) as e:
            raise SpecFileError(f"malformed graph ({e})", path=path)

    def run(self, **options):
        graph = PRESETS[options["preset"]]() if options["preset"] else self.load_graph(options["graph"])
        U, F = symanzik(graph)
        variables = [f"x{k + 1}" for k in range(graph.nedges)]
        self.summary(f"U has {len(U)} terms, F has {len(F)} terms")
        return {
            "graph": graph.to_json(),
            "vars": variables,
            "U": U.to_text(variables),
            "F": F.to_text(variables),
            "loops": graph.loops,
        }
