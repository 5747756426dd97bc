"""
run-all: simulate -> train -> verify -> score in one output directory.
"""
from pathlib import Path
from typing import Dict, Optional, Tuple

import typer

from ..config.pipeline import PipelineConfig, render_pipeline_config
from ..exceptions import ArtifactIOError, CreditScoreError, NumericError
from ..utils.artifact_store import ArtifactStore
from ..utils.logging import get_logger
from .common import (
    AlphaOption,
    ConfigOption,
    IterationsOption,
    OutOption,
    SeedOption,
    exit_on_error,
    resolve_config,
)
from .score import cmd_score, render_credit_summary
from .simulate import COHORT_FILE, cmd_simulate, render_summary
from .train import PARAMS_FILE, cmd_train, render_comparison
from .verify import cmd_verify, render_verification

logger = get_logger(__name__)

CONFIG_FILE = "config.txt"


def _require(path: Path, stage: str) -> Path:
    if not path.exists():
        raise ArtifactIOError(
            f"{path} not found; enable stage '{stage}' or provide the file",
            context={"path": str(path), "stage": stage}
        )
    return path


def cmd_run_all(cfg: PipelineConfig) -> Tuple[Dict[str, str], bool]:
    """
    Run every enabled stage, reusing earlier artifacts from ``cfg.out_dir``
    when a stage is switched off.

    Returns:
        Rendered text of each executed stage keyed by stage name, and whether
        verification passed (True when the verify stage is off)
    """
    try:
        logger.info("run_all_started", out_dir=str(cfg.out_dir), stages=cfg.stages.model_dump())

        store = ArtifactStore(cfg.out_dir)
        store.write_text(CONFIG_FILE, render_pipeline_config(cfg, include_out_dir=False))
        cohort_path = store.path(COHORT_FILE)
        params_path = store.path(PARAMS_FILE)
        outputs: Dict[str, str] = {}
        verified_ok = True

        if cfg.stages.simulate:
            outputs["simulate"] = render_summary(cmd_simulate(cfg, store).summary)
        if cfg.stages.train:
            result = cmd_train(_require(cohort_path, "simulate"), cfg, store)
            outputs["train"] = render_comparison(result.comparison)
        if cfg.stages.verify:
            verified = cmd_verify(
                _require(cohort_path, "simulate"), _require(params_path, "train"), cfg, store
            )
            outputs["verify"] = render_verification(verified.report)
            verified_ok = verified.report.passed
        if cfg.stages.score:
            scored = cmd_score(
                _require(cohort_path, "simulate"), _require(params_path, "train"), cfg, store
            )
            outputs["score"] = render_credit_summary(scored.report)

        logger.info("run_all_completed", stages=list(outputs))
        return outputs, verified_ok

    except CreditScoreError as e:
        logger.error("run_all_failed", error=str(e), context=e.context)
        raise


def register_run_all_commands(app: typer.Typer) -> None:
    """
    Register the run-all command.

    Args:
        app: Typer application
    """

    @app.command("run-all")
    def run_all(
        config: Optional[Path] = ConfigOption,
        out: Optional[Path] = OutOption,
        seed: Optional[int] = SeedOption,
        iterations: Optional[int] = IterationsOption,
        alpha: Optional[float] = AlphaOption,
    ) -> None:
        """Run the whole pipeline with CSV artifacts at every stage."""
        with exit_on_error("run-all"):
            cfg = resolve_config(config, out=out, seed=seed, iterations=iterations, alpha=alpha)
            outputs, verified_ok = cmd_run_all(cfg)
            for stage, text in outputs.items():
                typer.echo(f"== {stage} ==")
                typer.echo(text)
            if not verified_ok:
                raise typer.Exit(code=NumericError.exit_code)
