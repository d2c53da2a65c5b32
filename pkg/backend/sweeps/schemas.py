from pathlib import Path
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator

from core.constants import EXHAUSTIVE_SUBFIELD_MAX_M, MAX_M, MIN_M, NECESSITY_MIN_M

Mode = Literal["exhaustive_subfield", "random"]
Oracle = Literal["mu", "exhaustive", "both"]
Format = Literal["json_lines", "csv"]
Branch = Literal["condition1", "condition2", "degenerate", "none"]

PREDICTS_PP = ("condition1", "condition2")


class SweepConfig(BaseModel):
    """Everything that determines the output of a sweep."""

    model_config = ConfigDict(frozen=True)

    m: int = Field(ge=MIN_M, le=MAX_M)
    mode: Mode = "random"
    count: int = Field(default=1000, ge=0)
    seed: int = Field(default=0, ge=0, lt=2**63)
    pp_oracle: Oracle = "mu"
    output: Optional[Path] = None
    format: Format = "json_lines"
    workers: int = Field(default=1, ge=1)
    chunk: int = Field(default=256, ge=1)

    @model_validator(mode="after")
    def check_mode(self):
        if self.mode == "exhaustive_subfield" and self.m > EXHAUSTIVE_SUBFIELD_MAX_M:
            raise ValueError(
                f"exhaustive_subfield sweeps need m <= {EXHAUSTIVE_SUBFIELD_MAX_M}, got {self.m}."
            )
        return self


class SweepRecord(BaseModel):
    """One triple of a sweep with its classification and oracle verdicts."""

    index: int
    m: int
    a1: str
    a2: str
    a3: str
    branch: Branch
    clauses: Dict[str, bool]
    pp_mu: Optional[bool] = None
    pp_exhaustive: Optional[bool] = None

    @property
    def verdicts(self):
        return [v for v in (self.pp_mu, self.pp_exhaustive) if v is not None]

    @property
    def pp(self) -> bool:
        return all(self.verdicts)

    @property
    def oracle_disagreement(self) -> bool:
        return len(set(self.verdicts)) > 1

    @property
    def sufficiency_violation(self) -> bool:
        """Classified as Condition 1 or 2 but not a permutation."""
        return self.branch in PREDICTS_PP and not self.pp

    @property
    def necessity_exception(self) -> bool:
        """A non-degenerate permutation that satisfies neither condition."""
        return self.branch == "none" and self.pp

    @computed_field
    @property
    def consistent(self) -> bool:
        if self.sufficiency_violation or self.oracle_disagreement:
            return False
        return not (self.necessity_exception and self.m >= NECESSITY_MIN_M)


class SweepSummary(BaseModel):
    records: int = 0
    branches: Dict[str, int] = Field(default_factory=dict)
    permutations: int = 0
    sufficiency_violations: int = 0
    necessity_exceptions: int = 0
    oracle_disagreements: int = 0

    def add(self, record: SweepRecord):
        self.records += 1
        self.branches[record.branch] = self.branches.get(record.branch, 0) + 1
        self.permutations += record.pp
        self.sufficiency_violations += record.sufficiency_violation
        self.necessity_exceptions += record.necessity_exception
        self.oracle_disagreements += record.oracle_disagreement

    @property
    def passed(self) -> bool:
        return self.sufficiency_violations == 0

    def as_line(self) -> str:
        branches = ", ".join(f"{name}={count}" for name, count in sorted(self.branches.items()))
        return (
            f"{self.records} triples ({branches}); {self.permutations} permutations; "
            f"{self.sufficiency_violations} sufficiency violations; "
            f"{self.necessity_exceptions} necessity exceptions; "
            f"{self.oracle_disagreements} oracle disagreements"
        )


class CheckReport(BaseModel):
    m: int
    tower: str
    a1: str
    a2: str
    a3: str
    branch: Branch
    clauses: Dict[str, bool]
    thetas: Dict[str, str]
    c_value: Optional[str] = None
    notes: List[str] = Field(default_factory=list)
    pp_mu: Optional[bool] = None
    pp_exhaustive: Optional[bool] = None
    curve_points: Optional[Dict[str, int]] = None

    @computed_field
    @property
    def agree(self) -> Optional[bool]:
        """Whether the two oracles agree; None unless both ran."""
        if self.pp_mu is None or self.pp_exhaustive is None:
            return None
        return self.pp_mu == self.pp_exhaustive


class StepRecord(BaseModel):
    line: int
    source: str
    kind: str
    text: str
    passed: bool
    detail: str = ""
    offending: str = ""


class ProveReport(BaseModel):
    script_id: str
    description: str = ""
    passed: bool
    assertions: int
    steps: List[StepRecord]
    specialization_checks: int
    specialization_skipped: int
    specialization_failures: int


class IdentityReport(BaseModel):
    m: int
    triples: int
    failures: Dict[str, int] = Field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not any(self.failures.values())
