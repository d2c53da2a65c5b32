from django.core.management.base import CommandError

from symbolic.scripts import load_script, run_script, script_ids
from sweeps.management.base import NihoCommand
from sweeps.schemas import ProveReport, StepRecord


class Command(NihoCommand):
    help = "Replay the elimination-chain proof scripts and check their assertions."

    def add_arguments(self, parser):
        parser.add_argument("scripts", nargs="+", help="Script ids, or `all`.")
        parser.add_argument("--checks", type=int, default=None, help="Resultant spot checks.")
        parser.add_argument("--seed", type=int, default=None)
        parser.add_argument("--json", action="store_true", help="Print one JSON report per line.")
        parser.add_argument("--verbose-steps", action="store_true", help="List every step.")

    def run(self, *args, **options):
        ids = script_ids() if options["scripts"] == ["all"] else options["scripts"]
        scripts = [load_script(script_id) for script_id in ids]
        failed = []
        for script in scripts:
            report = run_script(script, checks=options["checks"], seed=options["seed"])
            summary = ProveReport(
                script_id=script.script_id,
                description=script.description,
                passed=report.passed,
                assertions=len(report.assertions),
                steps=[StepRecord(**step.as_dict()) for step in report.steps],
                specialization_checks=report.specialization.performed,
                specialization_skipped=report.specialization.skipped,
                specialization_failures=report.specialization.failures,
            )
            if not summary.passed:
                failed.append(script.script_id)
            if options["json"]:
                self.stdout.write(summary.model_dump_json())
                continue
            self.write_summary(summary, options["verbose_steps"])
        if failed:
            raise CommandError(f"Failed scripts: {', '.join(failed)}")

    def write_summary(self, summary, verbose):
        state = "passed" if summary.passed else "FAILED"
        self.stdout.write(
            f"{summary.script_id}: {state} ({summary.assertions} assertions, "
            f"{summary.specialization_checks} resultant checks, "
            f"{summary.specialization_failures} failed)"
        )
        for step in summary.steps:
            if verbose or not step.passed:
                mark = "ok" if step.passed else "FAIL"
                self.stdout.write(f"  [{mark}] {step.source}:{step.line} {step.text} {step.detail}")
                if step.offending:
                    self.stdout.write(f"    {step.offending}")
