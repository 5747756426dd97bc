"""
Pydantic models describing what each pipeline stage produced.
"""
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, Field

from .cohort import CohortSummary
from .credit import CreditScoreReport
from .regression import ParameterComparison, VerificationReport


class SimulateResult(BaseModel):
    """Output of the simulate stage."""
    cohort_path: Path
    summary: CohortSummary


class TrainResult(BaseModel):
    """Output of the train stage."""
    params_path: Path
    cost_path: Path
    comparison_path: Path
    comparison: ParameterComparison
    n_train: int
    n_test: int
    final_train_cost: float
    test_cost: Optional[float] = Field(None, description="Cost of the train fit on the test partition")


class VerifyResult(BaseModel):
    """Output of the verify stage."""
    report_path: Path
    report: VerificationReport


class ScoreResult(BaseModel):
    """Output of the score stage."""
    scores_path: Path
    importance_path: Path
    summary_path: Path
    report: CreditScoreReport
