from django.conf import settings

from curves.plane import build_curve_C, curve_H_for_triple, fq_points, mu_square_points
from fields.encoding import format_base
from niho.conditions import classify
from niho.polynomial import CoefficientTriple, is_pp_exhaustive, is_pp_via_mu
from sweeps.management.base import NihoCommand
from sweeps.schemas import CheckReport


class Command(NihoCommand):
    help = "Classify one coefficient triple and run the permutation oracles on it."

    def add_arguments(self, parser):
        self.add_field_arguments(parser)
        self.add_triple_arguments(parser)
        parser.add_argument("--oracle", choices=["mu", "exhaustive", "both"], default="both")
        parser.add_argument(
            "--points", action="store_true", help="Also count off-diagonal points of C and H."
        )
        parser.add_argument("--json", action="store_true", help="Print the report as JSON.")

    def run(self, *args, **options):
        spec = self.field_spec(options)
        t = CoefficientTriple.from_text(spec, options["a1"], options["a2"], options["a3"])
        condition = classify(t)
        oracle = options["oracle"]
        if oracle == "both" and spec.order > settings.NIHO_EXHAUSTIVE_LIMIT:
            oracle = "mu"
        report = CheckReport(
            m=spec.m,
            tower=str(spec),
            **t.as_text(),
            branch=condition.branch,
            clauses={name: bool(value) for name, value in condition.clauses.items()},
            thetas=condition.thetas.as_text(),
            c_value=None if condition.c_value is None else format_base(condition.c_value),
            notes=condition.notes,
            pp_mu=is_pp_via_mu(t) if oracle in ("mu", "both") else None,
            pp_exhaustive=is_pp_exhaustive(t) if oracle in ("exhaustive", "both") else None,
            curve_points=self.curve_points(t, condition.thetas) if options["points"] else None,
        )
        if options["json"]:
            self.emit_json(report.model_dump())
            return
        self.stdout.write(f"tower: {report.tower}")
        self.stdout.write(f"triple: a1={report.a1} a2={report.a2} a3={report.a3}")
        self.stdout.write(f"branch={report.branch}")
        for name, value in sorted(report.clauses.items()):
            self.stdout.write(f"  {name}: {value}")
        for name, value in report.thetas.items():
            self.stdout.write(f"{name} = {value}")
        if report.c_value is not None:
            self.stdout.write(f"c = {report.c_value}")
        for note in report.notes:
            self.stdout.write(f"note: {note}")
        for name in ("pp_mu", "pp_exhaustive", "agree"):
            value = getattr(report, name)
            if value is not None:
                self.stdout.write(f"{name}={str(value).lower()}")
        for name, value in (report.curve_points or {}).items():
            self.stdout.write(f"{name}: {value}")

    def curve_points(self, t, tv):
        _, L = curve_H_for_triple(t)
        return {
            "C_mu_square_points": len(mu_square_points(build_curve_C(tv))),
            "H_fq_points": len(fq_points(L)),
        }
