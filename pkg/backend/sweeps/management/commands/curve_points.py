import csv

from core.constants import CSV_POINT_COLUMNS
from curves.plane import build_curve_C, curve_H_for_triple, fq_points, mu_square_points
from fields.encoding import format_base
from niho.conditions import thetas
from niho.polynomial import CoefficientTriple
from sweeps.management.base import NihoCommand


class Command(NihoCommand):
    help = (
        "List the off-diagonal points of C in mu_(q+1)^2 or of H in GF(q)^2 as CSV "
        "(x = x_a + x_b*i, y = y_a + y_b*i)."
    )

    def add_arguments(self, parser):
        self.add_field_arguments(parser)
        self.add_triple_arguments(parser)
        parser.add_argument("--curve", choices=["C", "H"], default="H")

    def run(self, *args, **options):
        spec = self.field_spec(options)
        t = CoefficientTriple.from_text(spec, options["a1"], options["a2"], options["a3"])
        if options["curve"] == "C":
            points = mu_square_points(build_curve_C(thetas(t)))
        else:
            _, L = curve_H_for_triple(t)
            points = fq_points(L)
        writer = csv.writer(self.stdout, lineterminator="\n")
        writer.writerow(CSV_POINT_COLUMNS)
        for x, y in points:
            writer.writerow([format_base(part) for part in (x.a, x.b, y.a, y.b)])
        self.stderr.write(f"{len(points)} points")
