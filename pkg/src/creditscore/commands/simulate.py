# Este archivo implementa la etapa "simulate": genera la cohorte simulada
# y escribe el CSV con el resumen estadístico de cada columna.

"""
Simulate stage: generate a cohort and write it as CSV.
"""
from pathlib import Path
from typing import Optional

import typer

from ..config.pipeline import PipelineConfig
from ..core.cohort_sim import generate_cohort, summarize_cohort
from ..exceptions import CreditScoreError
from ..models.cohort import CohortSummary
from ..models.pipeline import SimulateResult
from ..utils.artifact_store import ArtifactStore
from ..utils.logging import get_logger
from .common import ConfigOption, OutOption, SeedOption, exit_on_error, resolve_config

logger = get_logger(__name__)

COHORT_FILE = "cohort.csv"


def render_summary(summary: CohortSummary) -> str:
    """Fixed-width table of per-column statistics."""
    lines = [f"students: {summary.n_students}"]
    if summary.columns:
        lines.append(f"{'column':<18}{'mean':>10}{'sd':>10}{'min':>10}{'max':>10}")
        for col in summary.columns:
            lines.append(
                f"{col.name:<18}{col.mean:>10.3f}{col.sd:>10.3f}{col.min:>10.3f}{col.max:>10.3f}"
            )
    return "\n".join(lines)


def cmd_simulate(cfg: PipelineConfig, store: Optional[ArtifactStore] = None) -> SimulateResult:
    """
    Generate the configured cohort and write ``cohort.csv``.

    Returns:
        SimulateResult with the CSV path and per-column summary
    """
    try:
        logger.info(
            "simulate_started",
            seed=cfg.simulation.seed,
            n_students=cfg.simulation.n_students
        )

        store = store or ArtifactStore(cfg.out_dir)
        cohort = generate_cohort(cfg.simulation)
        path = store.write_cohort(cohort, COHORT_FILE)
        summary = summarize_cohort(cohort)

        logger.info("simulate_completed", path=str(path), n_students=len(cohort))
        return SimulateResult(cohort_path=path, summary=summary)

    except CreditScoreError as e:
        logger.error("simulate_failed", error=str(e), context=e.context)
        raise


def register_simulate_commands(app: typer.Typer) -> None:
    """
    Register the simulate command.

    Args:
        app: Typer application
    """

    @app.command("simulate")
    def simulate(
        config: Optional[Path] = ConfigOption,
        out: Optional[Path] = OutOption,
        seed: Optional[int] = SeedOption,
    ) -> None:
        """Generate a simulated cohort CSV and print column statistics."""
        with exit_on_error("simulate"):
            cfg = resolve_config(config, out=out, seed=seed)
            result = cmd_simulate(cfg)
            typer.echo(f"cohort written to {result.cohort_path}")
            typer.echo(render_summary(result.summary))
