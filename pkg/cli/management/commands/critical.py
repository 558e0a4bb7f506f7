from critpoints.methods import all_critical_points, certified_residual
from critpoints.newton import positive_critical_point

from cli.commands import EulerCommand


class Command(EulerCommand):
    help = "Critical points of the likelihood f^-s x^nu"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--positive", action="store_true", help="only the positive critical point, by Newton")
        parser.add_argument("--no-cache", action="store_true", help="do not read or write the critical point cache")

    def run(self, **options):
        spec = self.load_spec(options)
        if options["positive"]:
            point = positive_critical_point(spec)
            result = point.to_json()
            result["residual"] = certified_residual(spec, point.point)
            self.summary(f"positive critical point {result['point']}, H = {point.hessian:.6g}")
            return {"spec": spec.to_json(), "positive": result}
        points = all_critical_points(
            spec, seed=options["seed"], use_cache=not options["no_cache"], threads=options["threads"]
        )
        self.summary(f"{points.count} critical points from {points.paths} paths ({points.failures} failed)")
        return {"spec": spec.to_json(), "critical": points.to_json()}
