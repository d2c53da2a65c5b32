import django.core.validators
import django.db.models.deletion
import django.utils.timezone
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name="SweepRun",
            fields=[
                (
                    "id",
                    models.BigAutoField(
                        auto_created=True, primary_key=True, serialize=False, verbose_name="ID"
                    ),
                ),
                (
                    "m",
                    models.PositiveSmallIntegerField(
                        help_text="Degree of GF(q) over GF(2).",
                        validators=[
                            django.core.validators.MinValueValidator(1),
                            django.core.validators.MaxValueValidator(16),
                        ],
                    ),
                ),
                (
                    "mode",
                    models.CharField(
                        choices=[
                            ("exhaustive_subfield", "Exhaustive over a subfield"),
                            ("random", "Random"),
                        ],
                        max_length=32,
                    ),
                ),
                (
                    "oracle",
                    models.CharField(
                        choices=[
                            ("mu", "mu_{q+1} criterion"),
                            ("exhaustive", "Exhaustive"),
                            ("both", "Both"),
                        ],
                        max_length=16,
                    ),
                ),
                ("seed", models.PositiveBigIntegerField(default=0)),
                ("count", models.PositiveIntegerField(help_text="Number of triples examined.")),
                ("output_path", models.CharField(blank=True, max_length=512)),
                ("branch_counts", models.JSONField(blank=True, default=dict)),
                ("permutations", models.PositiveIntegerField(default=0)),
                ("sufficiency_violations", models.PositiveIntegerField(default=0)),
                ("necessity_exceptions", models.PositiveIntegerField(default=0)),
                ("oracle_disagreements", models.PositiveIntegerField(default=0)),
                ("started_at", models.DateTimeField(default=django.utils.timezone.now)),
                ("finished_at", models.DateTimeField(blank=True, null=True)),
            ],
            options={
                "verbose_name": "sweep run",
                "verbose_name_plural": "sweep runs",
                "ordering": ["-started_at"],
            },
        ),
        migrations.CreateModel(
            name="SweepFinding",
            fields=[
                (
                    "id",
                    models.BigAutoField(
                        auto_created=True, primary_key=True, serialize=False, verbose_name="ID"
                    ),
                ),
                ("index", models.PositiveIntegerField()),
                (
                    "kind",
                    models.CharField(
                        choices=[
                            ("sufficiency", "Sufficiency violation"),
                            ("necessity", "Necessity exception"),
                            ("oracle", "Oracle disagreement"),
                        ],
                        max_length=16,
                    ),
                ),
                ("a1", models.CharField(max_length=64)),
                ("a2", models.CharField(max_length=64)),
                ("a3", models.CharField(max_length=64)),
                (
                    "branch",
                    models.CharField(
                        choices=[
                            ("condition1", "Condition 1"),
                            ("condition2", "Condition 2"),
                            ("degenerate", "Degenerate"),
                            ("none", "None"),
                        ],
                        max_length=16,
                    ),
                ),
                (
                    "run",
                    models.ForeignKey(
                        on_delete=django.db.models.deletion.CASCADE,
                        related_name="findings",
                        to="sweeps.sweeprun",
                    ),
                ),
            ],
            options={
                "verbose_name": "sweep finding",
                "verbose_name_plural": "sweep findings",
                "ordering": ["run", "index"],
            },
        ),
        migrations.AddConstraint(
            model_name="sweepfinding",
            constraint=models.UniqueConstraint(
                fields=("run", "index", "kind"), name="uniq_finding_per_run"
            ),
        ),
    ]
