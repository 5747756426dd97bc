"""
Credit scores from a fitted performance model.

A credit score is the model's predicted performance for a student's
current activity features, in the same units as exam performance and
never clamped.
"""
import math
from typing import List, Sequence

from ..models.cohort import FEATURE_NAMES, StudentRecord
from ..models.credit import ClassCreditSeries, CreditScoreReport, FeatureImportance
from ..models.regression import ModelParams
from ..utils.logging import get_logger
from .regressor import hypothesis
from .rng_stats import pearson_r

logger = get_logger(__name__)


def credit_score(params: ModelParams, rec: StudentRecord) -> float:
    """theta0 + sum(theta_i * x_i) with raw-space theta on raw features."""
    return hypothesis(params.theta, rec.features())


def importance_table(params: ModelParams) -> List[FeatureImportance]:
    """
    Features ordered by descending |normalized-space coefficient|.

    Ties keep cohort column order. ``share`` is |theta_i| / sum(|theta_j|),
    zero for every feature when all coefficients vanish.
    """
    weights = params.theta_norm[1:]
    total = math.fsum(abs(w) for w in weights)
    order = sorted(range(len(weights)), key=lambda i: (-abs(weights[i]), i))
    return [
        FeatureImportance(
            feature=FEATURE_NAMES[i],
            weight=weights[i],
            share=abs(weights[i]) / total if total > 0 else 0.0,
        )
        for i in order
    ]


def rank_importance(params: ModelParams) -> List[str]:
    return [item.feature for item in importance_table(params)]


def class_credit_series(
    params: ModelParams,
    per_class_records: Sequence[StudentRecord]
) -> ClassCreditSeries:
    """
    One credit score per class session, in session order, with running means.

    Each record carries the features observed for that session; mapping a
    single class onto percent-style features is left to the caller.
    """
    scores: List[float] = []
    running: List[float] = []
    total = 0.0
    for rec in per_class_records:
        score = credit_score(params, rec)
        scores.append(score)
        total += score
        running.append(total / len(scores))
    return ClassCreditSeries(scores=scores, running_mean=running)


def build_report(params: ModelParams, records: Sequence[StudentRecord]) -> CreditScoreReport:
    """Scores for every record plus cohort statistics and the importance ranking."""
    scores = [credit_score(params, r) for r in records]

    correlation = None
    targets = [r.performance for r in records]
    if len(records) >= 2 and all(t is not None for t in targets):
        correlation = pearson_r(scores, targets)

    report = CreditScoreReport(
        scores=scores,
        mean=math.fsum(scores) / len(scores) if scores else None,
        min=min(scores) if scores else None,
        max=max(scores) if scores else None,
        importance=importance_table(params),
        target_correlation=correlation,
    )

    logger.info(
        "credit_report_built",
        n_students=len(scores),
        ranking=report.ranking,
        target_correlation=correlation
    )
    return report
