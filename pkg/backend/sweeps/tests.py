import json
import tempfile
from io import StringIO
from pathlib import Path

import pydantic
from django.core.exceptions import ValidationError
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase, override_settings

from core.constants import CSV_SWEEP_COLUMNS
from fields.tower import get_field_spec
from sweeps.models import SweepFinding, SweepRun
from sweeps.runner import (
    field_report,
    iter_records,
    run_sweep,
    subfield_keys,
    total_records,
    triple_at,
    verify_identities,
)
from sweeps.schemas import SweepConfig, SweepRecord, SweepSummary


def record(**overrides):
    values = {
        "index": 0,
        "m": 3,
        "a1": "0x0+0x0*i",
        "a2": "0x0+0x0*i",
        "a3": "0x1+0x0*i",
        "branch": "none",
        "clauses": {},
        "pp_mu": False,
    }
    values.update(overrides)
    return SweepRecord(**values)


class TempDirMixin:
    def setUp(self):
        super().setUp()
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.dir = Path(self.tmp.name)


class SchemaTests(SimpleTestCase):
    def test_exhaustive_mode_needs_small_field(self):
        SweepConfig(m=3, mode="exhaustive_subfield")
        with self.assertRaises(pydantic.ValidationError):
            SweepConfig(m=4, mode="exhaustive_subfield")
        with self.assertRaises(pydantic.ValidationError):
            SweepConfig(m=0)

    def test_sufficiency_violation(self):
        r = record(branch="condition1", pp_mu=False)
        self.assertTrue(r.sufficiency_violation)
        self.assertFalse(r.consistent)
        self.assertTrue(record(branch="condition2", pp_mu=True).consistent)

    def test_necessity_only_binds_from_m9(self):
        self.assertTrue(record(m=3, pp_mu=True).necessity_exception)
        self.assertTrue(record(m=3, pp_mu=True).consistent)
        self.assertFalse(record(m=9, pp_mu=True).consistent)
        self.assertTrue(record(m=9, branch="degenerate", pp_mu=True).consistent)

    def test_oracle_disagreement(self):
        r = record(pp_mu=True, pp_exhaustive=False)
        self.assertTrue(r.oracle_disagreement)
        self.assertFalse(r.consistent)

    def test_consistent_is_serialized(self):
        self.assertIs(json.loads(record().model_dump_json())["consistent"], True)

    def test_summary(self):
        summary = SweepSummary()
        summary.add(record(branch="condition1", pp_mu=False))
        summary.add(record(pp_mu=True))
        self.assertEqual(summary.branches, {"condition1": 1, "none": 1})
        self.assertEqual(summary.sufficiency_violations, 1)
        self.assertEqual(summary.necessity_exceptions, 1)
        self.assertFalse(summary.passed)
        self.assertIn("2 triples", summary.as_line())


class RunnerTests(TempDirMixin, SimpleTestCase):
    def test_subfield_is_gf4(self):
        keys = subfield_keys(2)
        self.assertEqual(len(keys), 4)
        self.assertEqual(keys[:2], (0, 1))
        self.assertEqual(total_records(SweepConfig(m=2, mode="exhaustive_subfield")), 64)

    def test_triples_depend_only_on_seed_and_index(self):
        spec = get_field_spec(3)
        config = SweepConfig(m=3, seed=11)
        self.assertEqual(str(triple_at(spec, config, 5)), str(triple_at(spec, config, 5)))
        self.assertNotEqual(
            str(triple_at(spec, config, 5)), str(triple_at(spec, SweepConfig(m=3, seed=12), 5))
        )

    def test_chunking_does_not_change_records(self):
        small = list(iter_records(SweepConfig(m=3, count=20, seed=2, chunk=7)))
        large = list(iter_records(SweepConfig(m=3, count=20, seed=2, chunk=50)))
        self.assertEqual([r.model_dump() for r in small], [r.model_dump() for r in large])
        self.assertEqual([r.index for r in small], list(range(20)))

    def test_same_seed_same_bytes(self):
        outputs = []
        for name in ("first.jsonl", "second.jsonl"):
            path = self.dir / name
            run_sweep(SweepConfig(m=3, count=40, seed=7, output=path))
            outputs.append(path.read_bytes())
        self.assertEqual(outputs[0], outputs[1])
        self.assertEqual(len(outputs[0].splitlines()), 40)

    def test_csv_columns(self):
        path = self.dir / "sweep.csv"
        run_sweep(SweepConfig(m=2, count=5, output=path, format="csv", pp_oracle="both"))
        lines = path.read_text().splitlines()
        self.assertEqual(lines[0], ",".join(CSV_SWEEP_COLUMNS))
        self.assertEqual(len(lines), 6)

    def test_exhaustive_subfield_m3_has_no_sufficiency_violation(self):
        findings = []
        config = SweepConfig(
            m=3, mode="exhaustive_subfield", pp_oracle="both", output=self.dir / "m3.jsonl"
        )
        summary = run_sweep(config, on_finding=findings.append)
        self.assertEqual(summary.records, 64)
        self.assertEqual(summary.sufficiency_violations, 0)
        self.assertEqual(summary.oracle_disagreements, 0)
        self.assertTrue(all(not r.sufficiency_violation for r in findings))

    def test_oracles_agree_on_gf4_cube_m2(self):
        config = SweepConfig(
            m=2, mode="exhaustive_subfield", pp_oracle="both", output=self.dir / "m2.jsonl"
        )
        self.assertEqual(run_sweep(config).oracle_disagreements, 0)

    def test_identities(self):
        report = verify_identities(3, 10, 0)
        self.assertTrue(report.passed, report.failures)
        self.assertEqual(report.triples, 10)

    def test_field_report(self):
        report = field_report(get_field_spec(3))
        self.assertEqual(report["q"], 8)
        self.assertEqual(report["mu_order"], 9)
        self.assertEqual(report["trace_k"], 1)
        self.assertTrue(report["three_divides_mu_order"])


class SweepModelTests(TestCase):
    def make_run(self, **overrides):
        values = {"m": 3, "mode": "random", "oracle": "mu", "seed": 1, "count": 10}
        values.update(overrides)
        return SweepRun.objects.create(**values)

    def test_finish_copies_counts(self):
        run = self.make_run()
        summary = SweepSummary()
        summary.add(record(branch="condition1", pp_mu=False))
        run.finish(summary)
        run.refresh_from_db()
        self.assertEqual(run.count, 1)
        self.assertEqual(run.branch_counts, {"condition1": 1})
        self.assertFalse(run.passed)
        self.assertIsNotNone(run.finished_at)

    def test_finished_run_is_locked(self):
        run = self.make_run()
        run.finish(SweepSummary())
        run = SweepRun.objects.get(pk=run.pk)
        run.seed = 2
        with self.assertRaises(ValidationError):
            run.save()

    def test_exhaustive_needs_small_field(self):
        with self.assertRaises(ValidationError):
            self.make_run(m=5, mode="exhaustive_subfield")

    def test_finding_kind(self):
        run = self.make_run()
        finding = SweepFinding.from_record(run, record(branch="condition2", pp_mu=False))
        self.assertEqual(finding.kind, SweepFinding.SUFFICIENCY)
        finding = SweepFinding.from_record(run, record(index=1, pp_mu=True))
        self.assertEqual(finding.kind, SweepFinding.NECESSITY)
        self.assertEqual(run.findings.count(), 2)


@override_settings(NIHO_RESULTANT_CHECKS=5)
class CommandTests(TempDirMixin, TestCase):
    def call(self, *args):
        out = StringIO()
        call_command(*args, stdout=out, stderr=StringIO())
        return out.getvalue()

    def test_field(self):
        data = json.loads(self.call("field", "--m", "3", "--json"))
        self.assertEqual(data["q"], 8)
        self.assertIn("exponents: s1=", self.call("field", "--m", "3"))

    def test_check_zero_triple(self):
        out = self.call("check_triple", "--m", "3")
        self.assertIn("branch=degenerate", out)
        self.assertIn("pp_mu=true", out)
        self.assertIn("pp_exhaustive=true", out)
        self.assertIn("agree=true", out)

    def test_check_json(self):
        data = json.loads(self.call("check_triple", "--m", "3", "--a3", "1", "--json"))
        self.assertEqual(data["m"], 3)
        self.assertIs(data["agree"], data["pp_mu"] == data["pp_exhaustive"])
        data = json.loads(self.call("check_triple", "--m", "3", "--oracle", "mu", "--json"))
        self.assertIsNone(data["agree"])
        self.assertIn("theta1", data["thetas"])

    def test_check_rejects_bad_input(self):
        with self.assertRaises(CommandError):
            self.call("check_triple", "--m", "3", "--a1", "zz")
        with self.assertRaises(CommandError):
            self.call("check_triple", "--m", "3", "--a1", "0x100")
        with self.assertRaises(CommandError):
            self.call("field", "--m", "40")

    def test_sweep_store(self):
        output = self.dir / "out.jsonl"
        out = self.call(
            "sweep", "--m", "3", "--mode", "exhaustive_subfield", "--oracle", "both",
            "--output", str(output), "--store",
        )  # fmt: skip
        self.assertIn("64 triples", out)
        run = SweepRun.objects.get()
        self.assertTrue(run.passed)
        self.assertEqual(run.count, 64)
        self.assertEqual(len(output.read_text().splitlines()), 64)

    def test_sweep_oracles_agree_on_random_triples(self):
        for m in ("3", "4"):
            with self.subTest(m=m):
                out = self.call(
                    "sweep", "--m", m, "--count", "10000", "--seed", "3", "--oracle", "both",
                    "--workers", "1", "--output", str(self.dir / f"m{m}.jsonl"),
                )  # fmt: skip
                self.assertIn(": 10000 triples", out)
                self.assertIn("; 0 oracle disagreements", out)

    def test_sweep_rejects_large_exhaustive(self):
        with self.assertRaises(CommandError):
            self.call("sweep", "--m", "4", "--mode", "exhaustive_subfield")

    def test_curve_points_header(self):
        out = self.call("curve_points", "--m", "3", "--a1", "1")
        self.assertEqual(out.splitlines()[0], "x_a,x_b,y_a,y_b")

    def test_verify_identities(self):
        out = self.call("verify_identities", "--m", "3", "--count", "5")
        self.assertIn("m=3: 5 triples", out)

    def test_prove(self):
        out = self.call("prove", "four-lines")
        self.assertIn("four-lines: passed", out)
        line = self.call("prove", "four-lines", "--json").strip()
        self.assertTrue(json.loads(line)["passed"])

    def test_prove_unknown_script(self):
        with self.assertRaises(CommandError):
            self.call("prove", "five-lines")
