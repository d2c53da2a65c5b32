from django.core.exceptions import ValidationError
from django.core.validators import MaxValueValidator, MinValueValidator
from django.db import models
from django.utils import timezone

from core import constants
from core.mixins import FullCleanSaveMixin


class SweepRun(FullCleanSaveMixin, models.Model):
    """A stored sweep: its configuration and the counts it ended with."""

    locked_fields = ("m", "mode", "oracle", "seed")

    m = models.PositiveSmallIntegerField(
        validators=[MinValueValidator(constants.MIN_M), MaxValueValidator(constants.MAX_M)],
        help_text="Degree of GF(q) over GF(2).",
    )
    mode = models.CharField(max_length=32, choices=constants.SWEEP_MODE_CHOICES)
    oracle = models.CharField(max_length=16, choices=constants.ORACLE_CHOICES)
    seed = models.PositiveBigIntegerField(default=0)
    count = models.PositiveIntegerField(help_text="Number of triples examined.")
    output_path = models.CharField(max_length=512, blank=True)
    branch_counts = models.JSONField(default=dict, blank=True)
    permutations = models.PositiveIntegerField(default=0)
    sufficiency_violations = models.PositiveIntegerField(default=0)
    necessity_exceptions = models.PositiveIntegerField(default=0)
    oracle_disagreements = models.PositiveIntegerField(default=0)
    started_at = models.DateTimeField(default=timezone.now)
    finished_at = models.DateTimeField(null=True, blank=True)

    class Meta:
        verbose_name = "sweep run"
        verbose_name_plural = "sweep runs"
        ordering = ["-started_at"]

    @property
    def is_locked(self) -> bool:
        return self.finished_at is not None

    @property
    def passed(self) -> bool:
        return self.sufficiency_violations == 0

    def clean(self):
        super().clean()
        if self.mode == "exhaustive_subfield" and self.m > constants.EXHAUSTIVE_SUBFIELD_MAX_M:
            raise ValidationError({"mode": "Exhaustive subfield sweeps need a small field."})
        if self.finished_at is not None and self.finished_at < self.started_at:
            raise ValidationError({"finished_at": "A run cannot finish before it starts."})

    def finish(self, summary):
        """Copy the counts of a SweepSummary and close the run."""
        self.count = summary.records
        self.branch_counts = dict(summary.branches)
        self.permutations = summary.permutations
        self.sufficiency_violations = summary.sufficiency_violations
        self.necessity_exceptions = summary.necessity_exceptions
        self.oracle_disagreements = summary.oracle_disagreements
        self.finished_at = timezone.now()
        self.save()

    def __str__(self) -> str:
        state = "passed" if self.passed else "FAILED"
        return f"m={self.m} {self.mode} seed={self.seed} ({state})"


class SweepFinding(FullCleanSaveMixin, models.Model):
    """A triple worth a second look: it broke sufficiency, split the oracles, or is an exception."""

    SUFFICIENCY = "sufficiency"
    NECESSITY = "necessity"
    ORACLE = "oracle"
    KIND_CHOICES = [
        (SUFFICIENCY, "Sufficiency violation"),
        (NECESSITY, "Necessity exception"),
        (ORACLE, "Oracle disagreement"),
    ]

    run = models.ForeignKey(SweepRun, on_delete=models.CASCADE, related_name="findings")
    index = models.PositiveIntegerField()
    kind = models.CharField(max_length=16, choices=KIND_CHOICES)
    a1 = models.CharField(max_length=64)
    a2 = models.CharField(max_length=64)
    a3 = models.CharField(max_length=64)
    branch = models.CharField(max_length=16, choices=constants.BRANCH_CHOICES)

    class Meta:
        verbose_name = "sweep finding"
        verbose_name_plural = "sweep findings"
        ordering = ["run", "index"]
        constraints = [
            models.UniqueConstraint(fields=["run", "index", "kind"], name="uniq_finding_per_run"),
        ]

    @classmethod
    def kind_of(cls, record) -> str:
        if record.sufficiency_violation:
            return cls.SUFFICIENCY
        if record.oracle_disagreement:
            return cls.ORACLE
        return cls.NECESSITY

    @classmethod
    def from_record(cls, run, record):
        return cls.objects.create(
            run=run,
            index=record.index,
            kind=cls.kind_of(record),
            a1=record.a1,
            a2=record.a2,
            a3=record.a3,
            branch=record.branch,
        )

    def __str__(self) -> str:
        return f"#{self.index} {self.kind}: ({self.a1}, {self.a2}, {self.a3})"
