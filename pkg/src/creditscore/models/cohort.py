"""
Pydantic models for simulated student cohorts.

Defines the generator configuration and the per-student record whose
columns follow the cohort CSV schema.
"""
from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

# Feature columns in cohort CSV order; the target column follows them
FEATURE_NAMES: Tuple[str, ...] = (
    "attendance",
    "attentiveness",
    "homework",
    "understanding",
    "prev_performance",
)
TARGET_NAME = "performance"
COHORT_COLUMNS: Tuple[str, ...] = FEATURE_NAMES + (TARGET_NAME,)

# Weights used to synthesize performance: c0 (intercept) then one per feature
INJECTED_WEIGHTS: Tuple[float, ...] = (0.20, 0.30, 0.05, 0.40, 0.10, 0.15)

MAX_SEED = (1 << 64) - 1


class SimulationConfig(BaseModel):
    """Distribution parameters and injected weights for one simulated cohort."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    n_students: int = Field(3000, ge=2, description="Cohort size")
    seed: int = Field(42, ge=0, le=MAX_SEED, description="Generator seed")

    # Attendance: gaussian percent, or class counts out of attendance_classes
    attendance_model: Literal["gaussian", "binomial", "poisson"] = "gaussian"
    attendance_classes: int = Field(100, ge=1, description="Classes held (binomial/poisson)")
    attendance_mean_pct: float = 70.0
    attendance_sd_pct: float = Field(3.0, ge=0)

    attentiveness_mean_pct: float = 60.0
    attentiveness_sd_pct: float = Field(3.0, ge=0)

    homework_mean_pct: float = 70.0
    homework_sd_pct: float = Field(10.0, ge=0)

    understanding_categories: int = Field(10, ge=1, le=10)
    understanding_weights: Tuple[float, ...] = (1.0,) * 10

    prev_score_mean: float = 70.0
    prev_score_sd: float = Field(3.0, ge=0)

    weights: Tuple[float, ...] = INJECTED_WEIGHTS
    noise_sd: float = Field(2.0, ge=0, description="Gaussian noise sd, score units")

    @field_validator("understanding_weights")
    @classmethod
    def validate_understanding_weights(cls, v: Tuple[float, ...]) -> Tuple[float, ...]:
        """Category weights must be non-negative with a positive sum."""
        if any(w < 0 for w in v):
            raise ValueError("understanding weights must be non-negative")
        if sum(v) <= 0:
            raise ValueError("understanding weights must have a positive sum")
        return v

    @field_validator("weights")
    @classmethod
    def validate_weights(cls, v: Tuple[float, ...]) -> Tuple[float, ...]:
        if len(v) != len(FEATURE_NAMES) + 1:
            raise ValueError(f"weights must hold {len(FEATURE_NAMES) + 1} values (c0..c5)")
        return v

    @model_validator(mode="after")
    def validate_consistency(self) -> "SimulationConfig":
        """Cross-field checks."""
        if len(self.understanding_weights) != self.understanding_categories:
            raise ValueError(
                f"understanding_weights has {len(self.understanding_weights)} entries, "
                f"expected {self.understanding_categories}"
            )
        if self.attendance_model != "gaussian" and not 0 < self.attendance_mean_pct <= 100:
            raise ValueError(
                "attendance_mean_pct must lie in (0, 100] for count-based attendance"
            )
        return self


class StudentRecord(BaseModel):
    """One cohort row: five activity features and the performance target."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    attendance: float = Field(..., ge=0, le=100, description="Percent of classes attended")
    attentiveness: float = Field(..., ge=0, le=100, description="Percent attentive in class")
    homework: float = Field(..., ge=0, le=100, description="Percent of homework completed")
    understanding: int = Field(..., ge=1, le=10, description="Self-rated understanding 1-10")
    prev_performance: float = Field(..., ge=0, le=100, description="Previous exam score")
    performance: Optional[float] = Field(None, description="Exam performance (target)")

    def features(self) -> Tuple[float, ...]:
        """Feature values in cohort CSV column order."""
        return (
            self.attendance,
            self.attentiveness,
            self.homework,
            float(self.understanding),
            self.prev_performance,
        )

    def with_performance(self, value: float) -> "StudentRecord":
        return self.model_copy(update={"performance": value})


class ColumnSummary(BaseModel):
    """Descriptive statistics for one cohort column."""
    name: str
    mean: float
    sd: float
    min: float
    max: float


class CohortSummary(BaseModel):
    """Per-column statistics echoed after simulation."""
    n_students: int
    columns: List[ColumnSummary] = Field(default_factory=list)
