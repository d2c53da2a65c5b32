from sweeps.management.base import NihoCommand
from sweeps.runner import field_report


class Command(NihoCommand):
    help = "Describe the tower GF(q) < GF(q^2) and the Niho exponents for a degree m."

    def add_arguments(self, parser):
        self.add_field_arguments(parser)
        parser.add_argument("--json", action="store_true", help="Print the report as JSON.")

    def run(self, *args, **options):
        report = field_report(self.field_spec(options))
        if options["json"]:
            self.emit_json(report)
            return
        exps = report.pop("exponents")
        for name, value in report.items():
            self.stdout.write(f"{name}: {value}")
        self.stdout.write("exponents: " + ", ".join(f"{k}={v}" for k, v in exps.items()))
