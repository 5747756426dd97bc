# Este archivo implementa la etapa "score": calcula el credit score de cada
# estudiante y el ranking de importancia de los parámetros.

"""
Score stage: per-student credit scores, importance ranking and a text summary.
"""
from pathlib import Path
from typing import Optional

import typer

from ..config.pipeline import PipelineConfig
from ..core.credit import build_report
from ..exceptions import CreditScoreError
from ..models.credit import CreditScoreReport
from ..models.pipeline import ScoreResult
from ..utils.artifact_store import ArtifactStore, read_cohort, read_params
from ..utils.logging import get_logger
from .common import ConfigOption, OutOption, exit_on_error, resolve_config

logger = get_logger(__name__)

SCORES_FILE = "scores.csv"
IMPORTANCE_FILE = "importance.csv"
SUMMARY_FILE = "credit_summary.txt"


def render_credit_summary(report: CreditScoreReport) -> str:
    """Human-readable summary of a credit report."""
    n = len(report.scores)
    lines = [f"students scored: {n}"]
    if n:
        lines.append(
            f"credit score mean/min/max: {report.mean:.3f} / {report.min:.3f} / {report.max:.3f}"
        )
    if report.target_correlation is not None:
        lines.append(f"correlation with recorded performance: {report.target_correlation:.4f}")
    lines.append("impact ranking (normalized coefficient, share of total):")
    for rank, item in enumerate(report.importance, start=1):
        lines.append(f"  {rank}. {item.feature:<18}{item.weight:>12.4f}{item.share:>10.4f}")
    return "\n".join(lines)


def cmd_score(
    cohort_path: Path,
    params_path: Path,
    cfg: PipelineConfig,
    store: Optional[ArtifactStore] = None
) -> ScoreResult:
    """
    Score every student in a cohort CSV with a fitted params file.

    Writes ``scores.csv`` (student_id is the 1-based row), ``importance.csv``
    and ``credit_summary.txt``. Records without performance are scored too.
    """
    try:
        logger.info("score_started", cohort=str(cohort_path), params=str(params_path))

        store = store or ArtifactStore(cfg.out_dir)
        cohort = read_cohort(cohort_path)
        params = read_params(params_path)

        report = build_report(params, cohort)
        scores_path = store.write_scores(report, SCORES_FILE)
        importance_path = store.write_importance(report.importance, IMPORTANCE_FILE)
        summary_path = store.write_text(SUMMARY_FILE, render_credit_summary(report))

        logger.info("score_completed", n_students=len(report.scores), ranking=report.ranking)
        return ScoreResult(
            scores_path=scores_path,
            importance_path=importance_path,
            summary_path=summary_path,
            report=report,
        )

    except CreditScoreError as e:
        logger.error("score_failed", error=str(e), context=e.context)
        raise


def register_score_commands(app: typer.Typer) -> None:
    """
    Register the score command.

    Args:
        app: Typer application
    """

    @app.command("score")
    def score(
        cohort: Path = typer.Argument(..., help="Cohort CSV to score."),
        params: Path = typer.Argument(..., help="Params file produced by 'train'."),
        config: Optional[Path] = ConfigOption,
        out: Optional[Path] = OutOption,
    ) -> None:
        """Compute credit scores and the impact ranking."""
        with exit_on_error("score"):
            cfg = resolve_config(config, out=out)
            result = cmd_score(cohort, params, cfg)
            typer.echo(render_credit_summary(result.report))
            typer.echo(f"scores written to {result.scores_path}")
