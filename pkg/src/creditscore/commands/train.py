# Este archivo implementa la etapa "train": divide la cohorte, ajusta el modelo
# por descenso de gradiente y compara los parámetros inyectados con los ajustados.

"""
Train stage: split, fit by gradient descent, refit on the test partition
and compare against the injected weights.
"""
from pathlib import Path
from typing import Optional, Tuple

import typer

from ..config.pipeline import PipelineConfig
from ..core import regressor
from ..exceptions import CreditScoreError, InvalidInputError, NumericError, SchemaError
from ..models.pipeline import TrainResult
from ..models.regression import ParameterComparison, SplitDataset
from ..utils.artifact_store import THETA_KEYS, ArtifactStore, read_cohort
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

logger = get_logger(__name__)

PARAMS_FILE = "params.txt"
COST_FILE = "cost_history.csv"
COMPARISON_FILE = "theta_comparison.csv"


def _refit_on_test(split_data: SplitDataset, cfg: PipelineConfig) -> Optional[Tuple[float, ...]]:
    """Theta refitted on the test partition, or None when that partition cannot be fitted."""
    try:
        refit, _ = regressor.refit_on_test(split_data, cfg.training)
    except (NumericError, InvalidInputError) as e:
        # Optional comparison row; the training fit stands on its own
        logger.warning("test_refit_skipped", n_test=len(split_data.test), error=str(e))
        return None
    return refit.theta


def render_comparison(comparison: ParameterComparison) -> str:
    """Injected / fitted rows side by side, one column per theta."""
    lines = [f"{'parameter':<14}" + "".join(f"{k:>10}" for k in THETA_KEYS)]
    for name, values in comparison.rows():
        lines.append(f"{name:<14}" + "".join(f"{v:>10.4f}" for v in values))
    return "\n".join(lines)


def cmd_train(
    cohort_path: Path,
    cfg: PipelineConfig,
    store: Optional[ArtifactStore] = None
) -> TrainResult:
    """
    Fit the performance model on a cohort CSV.

    Writes the raw-space params file, the (iteration, cost) CSV of the
    training run and the injected/fitted comparison table.

    Raises:
        SchemaError: If the CSV does not match the cohort schema or lacks targets
        DivergenceError: If gradient descent diverges
    """
    try:
        logger.info(
            "train_started",
            cohort=str(cohort_path),
            alpha=cfg.training.alpha,
            iterations=cfg.training.iterations
        )

        store = store or ArtifactStore(cfg.out_dir)
        cohort = read_cohort(cohort_path)
        if any(r.performance is None for r in cohort):
            raise SchemaError(
                f"{cohort_path}: column 'performance' has empty values; training needs targets",
                context={"source": str(cohort_path), "column": "performance"}
            )

        split_data = regressor.split(cohort, cfg.training)
        params, history = regressor.train(split_data, cfg.training)
        test_cost, _ = regressor.evaluate(params, split_data.test)
        fitted_test = _refit_on_test(split_data, cfg)

        comparison = ParameterComparison(
            injected=cfg.simulation.weights,
            fitted_train=params.theta,
            fitted_test=fitted_test,
        )

        params_path = store.write_params(params, PARAMS_FILE)
        cost_path = store.write_cost_history(history, COST_FILE)
        comparison_path = store.write_comparison(comparison, COMPARISON_FILE)

        logger.info(
            "train_completed",
            final_cost=history.final,
            test_cost=test_cost,
            max_train_deviation=comparison.max_abs_deviation(params.theta)
        )
        return TrainResult(
            params_path=params_path,
            cost_path=cost_path,
            comparison_path=comparison_path,
            comparison=comparison,
            n_train=len(split_data.train),
            n_test=len(split_data.test),
            final_train_cost=history.final,
            test_cost=test_cost,
        )

    except CreditScoreError as e:
        logger.error("train_failed", cohort=str(cohort_path), error=str(e), context=e.context)
        raise


def register_train_commands(app: typer.Typer) -> None:
    """
    Register the train command.

    Args:
        app: Typer application
    """

    @app.command("train")
    def train(
        cohort: Path = typer.Argument(..., help="Cohort CSV produced by 'simulate'."),
        config: Optional[Path] = ConfigOption,
        out: Optional[Path] = OutOption,
        seed: Optional[int] = SeedOption,
        iterations: Optional[int] = IterationsOption,
        alpha: Optional[float] = AlphaOption,
    ) -> None:
        """Fit theta by gradient descent and print the injected/fitted table."""
        with exit_on_error("train"):
            cfg = resolve_config(config, out=out, seed=seed, iterations=iterations, alpha=alpha)
            result = cmd_train(cohort, cfg)
            typer.echo(f"train/test: {result.n_train}/{result.n_test}")
            typer.echo(f"final training cost: {result.final_train_cost:.6f}")
            typer.echo(f"test cost: {result.test_cost:.6f}")
            typer.echo(render_comparison(result.comparison))
            typer.echo(f"params written to {result.params_path}")
