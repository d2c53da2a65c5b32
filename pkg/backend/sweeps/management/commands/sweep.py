from django.conf import settings
from django.core.management.base import CommandError
from django.db import transaction

from core.constants import NECESSITY_MIN_M
from sweeps.management.base import NihoCommand
from sweeps.models import SweepFinding, SweepRun
from sweeps.runner import output_path, run_sweep
from sweeps.schemas import SweepConfig


class Command(NihoCommand):
    help = (
        "Sweep coefficient triples, compare the condition classification with the PP oracles and "
        "write one record per triple. Fails when a Condition-classified triple is not a PP."
    )

    def add_arguments(self, parser):
        parser.add_argument("--m", type=int, required=True)
        parser.add_argument("--mode", choices=["exhaustive_subfield", "random"], default="random")
        parser.add_argument("--count", type=int, default=1000)
        parser.add_argument("--seed", type=int, default=None)
        parser.add_argument("--oracle", choices=["mu", "exhaustive", "both"], default="mu")
        parser.add_argument("--output", default=None, help="Output file (default: derived name).")
        parser.add_argument("--format", choices=["json_lines", "csv"], default="json_lines")
        parser.add_argument("--workers", type=int, default=None)
        parser.add_argument("--chunk", type=int, default=None)
        parser.add_argument(
            "--store", action="store_true", help="Save the run and its findings to the database."
        )

    def run(self, *args, **options):
        config = SweepConfig(
            m=options["m"],
            mode=options["mode"],
            count=options["count"],
            seed=settings.NIHO_DEFAULT_SEED if options["seed"] is None else options["seed"],
            pp_oracle=options["oracle"],
            output=options["output"],
            format=options["format"],
            workers=options["workers"] or settings.NIHO_SWEEP_WORKERS,
            chunk=options["chunk"] or settings.NIHO_SWEEP_CHUNK,
        )
        findings = []
        summary = run_sweep(config, on_finding=findings.append)
        if options["store"]:
            self.store(config, summary, findings)
        self.stdout.write(f"{output_path(config)}: {summary.as_line()}")
        if summary.necessity_exceptions and config.m < NECESSITY_MIN_M:
            self.stdout.write(f"necessity exceptions are expected below m = {NECESSITY_MIN_M}")
        if not summary.passed:
            raise CommandError(f"{summary.sufficiency_violations} sufficiency violations.")

    @transaction.atomic
    def store(self, config, summary, findings):
        run = SweepRun.objects.create(
            m=config.m,
            mode=config.mode,
            oracle=config.pp_oracle,
            seed=config.seed,
            count=summary.records,
            output_path=str(output_path(config)),
        )
        for record in findings:
            SweepFinding.from_record(run, record)
        run.finish(summary)
        return run
