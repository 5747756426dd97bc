"""
Pydantic models for the linear performance model and its training.
"""
import math
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .cohort import FEATURE_NAMES, MAX_SEED, StudentRecord


class NormMeta(BaseModel):
    """Per-feature (offset, scale) used to map x to (x - offset) / scale."""

    model_config = ConfigDict(frozen=True)

    offsets: Tuple[float, ...]
    scales: Tuple[float, ...]

    @field_validator("scales")
    @classmethod
    def validate_scales(cls, v: Tuple[float, ...]) -> Tuple[float, ...]:
        """Scales must be strictly positive and finite."""
        for scale in v:
            if not (math.isfinite(scale) and scale > 0):
                raise ValueError(f"normalization scale must be positive, got {scale}")
        return v

    @model_validator(mode="after")
    def validate_lengths(self) -> "NormMeta":
        if len(self.offsets) != len(self.scales):
            raise ValueError("offsets and scales must have the same length")
        return self

    @classmethod
    def identity(cls, n_features: int = len(FEATURE_NAMES)) -> "NormMeta":
        return cls(offsets=(0.0,) * n_features, scales=(1.0,) * n_features)


class ModelParams(BaseModel):
    """
    Fitted linear model.

    ``theta`` is expressed in raw feature units (theta[0] is the intercept);
    ``norm_meta`` records the scaling the optimizer worked in, from which
    the normalized-space coefficients are derived.
    """

    model_config = ConfigDict(frozen=True)

    theta: Tuple[float, ...]
    norm_meta: NormMeta

    @model_validator(mode="after")
    def validate_shape(self) -> "ModelParams":
        if len(self.theta) != len(self.norm_meta.scales) + 1:
            raise ValueError(
                f"theta has {len(self.theta)} entries, expected {len(self.norm_meta.scales) + 1}"
            )
        return self

    @property
    def theta_norm(self) -> Tuple[float, ...]:
        """Coefficients in normalized space: theta_j * scale_j, intercept absorbs offsets."""
        slopes = [t * s for t, s in zip(self.theta[1:], self.norm_meta.scales)]
        intercept = self.theta[0] + math.fsum(
            t * o for t, o in zip(self.theta[1:], self.norm_meta.offsets)
        )
        return (intercept, *slopes)

    @classmethod
    def from_normalized(cls, theta_norm: Tuple[float, ...], norm_meta: NormMeta) -> "ModelParams":
        """Convert normalized-space coefficients back to raw units."""
        slopes = [t / s for t, s in zip(theta_norm[1:], norm_meta.scales)]
        intercept = theta_norm[0] - math.fsum(
            t * o for t, o in zip(slopes, norm_meta.offsets)
        )
        return cls(theta=(intercept, *slopes), norm_meta=norm_meta)


class TrainConfig(BaseModel):
    """Gradient descent and split settings."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    # alpha = 0 is accepted: it freezes theta at its initial value
    alpha: float = Field(0.05, ge=0, description="Learning rate")
    iterations: int = Field(100_000, gt=0, description="Full-batch updates")
    split_ratio: float = Field(0.8, gt=0, lt=1, description="Training fraction")
    shuffle_seed: int = Field(7, ge=0, le=MAX_SEED, description="Seed for the pre-split shuffle")


class CostHistory(BaseModel):
    """
    Cost after each update.

    ``costs[0]`` is the cost at the initial theta and ``costs[t]`` the cost
    after ``t`` updates, so iteration indices run 0..len-1.
    """

    costs: List[float] = Field(default_factory=list)

    @property
    def points(self) -> List[Tuple[int, float]]:
        return list(enumerate(self.costs))

    @property
    def initial(self) -> float:
        return self.costs[0]

    @property
    def final(self) -> float:
        return self.costs[-1]

    def is_non_increasing(self, tolerance: float = 1e-12) -> bool:
        return all(b <= a + tolerance for a, b in zip(self.costs, self.costs[1:]))

    def relative_change(self, window: int = 100) -> float:
        """Relative cost change over the last ``window`` iterations."""
        if len(self.costs) <= window:
            window = len(self.costs) - 1
        if window <= 0:
            return 0.0
        before = self.costs[-1 - window]
        after = self.costs[-1]
        if before == 0:
            return 0.0 if after == 0 else math.inf
        return abs(before - after) / abs(before)


class SplitDataset(BaseModel):
    """Disjoint train/test partition of a cohort."""
    train: List[StudentRecord]
    test: List[StudentRecord]


class ParameterComparison(BaseModel):
    """Injected versus fitted coefficients, one row per source."""
    injected: Tuple[float, ...]
    fitted_train: Tuple[float, ...]
    fitted_test: Optional[Tuple[float, ...]] = None

    def rows(self) -> List[Tuple[str, Tuple[float, ...]]]:
        rows = [("injected", self.injected), ("fitted_train", self.fitted_train)]
        if self.fitted_test is not None:
            rows.append(("fitted_test", self.fitted_test))
        return rows

    def max_abs_deviation(self, fitted: Tuple[float, ...]) -> float:
        return max(abs(a - b) for a, b in zip(self.injected, fitted))


class GradientCheck(BaseModel):
    """Analytic gradient versus central finite differences."""
    points: int
    step: float
    max_relative_error: float
    tolerance: float
    passed: bool


class VerificationReport(BaseModel):
    """Gradient-descent parameters cross-checked against the closed-form oracle."""
    theta_gd: Tuple[float, ...]
    theta_oracle: Tuple[float, ...]
    deviations: Tuple[float, ...]
    tolerance: float
    offending: List[str] = Field(default_factory=list)
    gradient_check: GradientCheck

    @property
    def max_deviation(self) -> float:
        return max(self.deviations)

    @property
    def passed(self) -> bool:
        return not self.offending and self.gradient_check.passed
