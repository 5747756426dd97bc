"""
Pydantic models for credit score reports.
"""
from typing import List, Optional

from pydantic import BaseModel, Field


class FeatureImportance(BaseModel):
    """One feature's normalized-space coefficient and its share of the total magnitude."""
    feature: str
    weight: float
    share: float


class ClassCreditSeries(BaseModel):
    """Credit score per class session with the running mean up to each session."""
    scores: List[float] = Field(default_factory=list)
    running_mean: List[float] = Field(default_factory=list)


class CreditScoreReport(BaseModel):
    """Credit scores for a set of students plus cohort statistics and importance ranking."""
    scores: List[float] = Field(default_factory=list)
    mean: Optional[float] = None
    min: Optional[float] = None
    max: Optional[float] = None
    importance: List[FeatureImportance] = Field(default_factory=list)
    target_correlation: Optional[float] = Field(
        None, description="Pearson r between scores and recorded performance, when present"
    )

    @property
    def ranking(self) -> List[str]:
        return [item.feature for item in self.importance]
