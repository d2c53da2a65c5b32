from django.conf import settings
from django.core.management.base import CommandError

from sweeps.management.base import NihoCommand
from sweeps.runner import verify_identities


class Command(NihoCommand):
    help = "Recheck the exact theta, numerator, quotient and gamma-table identities."

    def add_arguments(self, parser):
        parser.add_argument("--m", type=int, nargs="+", default=[3, 4])
        parser.add_argument("--count", type=int, default=100)
        parser.add_argument("--seed", type=int, default=None)

    def run(self, *args, **options):
        seed = settings.NIHO_DEFAULT_SEED if options["seed"] is None else options["seed"]
        failed = []
        for m in options["m"]:
            report = verify_identities(m, options["count"], seed)
            counts = ", ".join(f"{name}={n}" for name, n in report.failures.items())
            self.stdout.write(f"m={m}: {report.triples} triples, failures: {counts}")
            if not report.passed:
                failed.append(m)
        if failed:
            raise CommandError(f"Identity failures at m = {', '.join(map(str, failed))}.")
