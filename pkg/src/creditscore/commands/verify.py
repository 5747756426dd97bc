"""
Verify stage: cross-check fitted parameters against the normal-equations
solution and the analytic gradient against finite differences.
"""
from pathlib import Path
from typing import Optional

import typer

from ..config.pipeline import PipelineConfig
from ..core import regressor
from ..exceptions import CreditScoreError, NumericError, SchemaError
from ..models.pipeline import VerifyResult
from ..models.regression import ModelParams, SplitDataset, VerificationReport
from ..utils.artifact_store import THETA_KEYS, ArtifactStore, read_cohort, read_params
from ..utils.logging import get_logger
from .common import ConfigOption, OutOption, exit_on_error, resolve_config

logger = get_logger(__name__)

REPORT_FILE = "verification.txt"
ORACLE_TOLERANCE = 1e-4


def build_verification(
    params: ModelParams,
    split_data: SplitDataset,
    seed: int,
    tolerance: float = ORACLE_TOLERANCE
) -> VerificationReport:
    """Compare ``params`` with the closed-form fit on the same training partition."""
    oracle = regressor.solve_normal_equations(split_data)
    deviations = tuple(abs(a - b) for a, b in zip(params.theta, oracle.theta))
    offending = [key for key, d in zip(THETA_KEYS, deviations) if not d < tolerance]

    X_norm, _ = regressor.normalize(split_data.train)
    y = regressor.target_vector(split_data.train)
    gradient_check = regressor.check_gradient(X_norm, y, seed=seed)

    return VerificationReport(
        theta_gd=params.theta,
        theta_oracle=oracle.theta,
        deviations=deviations,
        tolerance=tolerance,
        offending=offending,
        gradient_check=gradient_check,
    )


def render_verification(report: VerificationReport) -> str:
    lines = [f"{'parameter':<10}{'gradient_descent':>20}{'normal_equations':>20}{'abs_dev':>12}"]
    for key, gd, oracle, dev in zip(
        THETA_KEYS, report.theta_gd, report.theta_oracle, report.deviations
    ):
        lines.append(f"{key:<10}{gd:>20.10f}{oracle:>20.10f}{dev:>12.3e}")
    lines.append(
        f"oracle check: {'PASS' if not report.offending else 'FAIL'} "
        f"(max deviation {report.max_deviation:.3e}, tolerance {report.tolerance:.0e})"
    )
    if report.offending:
        lines.append(f"offending components: {', '.join(report.offending)}")
    check = report.gradient_check
    lines.append(
        f"gradient check: {'PASS' if check.passed else 'FAIL'} "
        f"({check.points} points, max relative error {check.max_relative_error:.3e}, "
        f"tolerance {check.tolerance:.0e})"
    )
    lines.append(f"result: {'PASS' if report.passed else 'FAIL'}")
    return "\n".join(lines)


def cmd_verify(
    cohort_path: Path,
    params_path: Path,
    cfg: PipelineConfig,
    store: Optional[ArtifactStore] = None
) -> VerifyResult:
    """
    Verify a params file against the cohort it was trained on.

    The cohort is split with the configured shuffle seed so the oracle sees
    the same training partition as gradient descent did.

    Raises:
        SingularSystemError: If the training design matrix is rank deficient
    """
    try:
        logger.info("verify_started", cohort=str(cohort_path), params=str(params_path))

        store = store or ArtifactStore(cfg.out_dir)
        cohort = read_cohort(cohort_path)
        if any(r.performance is None for r in cohort):
            raise SchemaError(
                f"{cohort_path}: column 'performance' has empty values; verification needs targets",
                context={"source": str(cohort_path), "column": "performance"}
            )
        params = read_params(params_path)

        split_data = regressor.split(cohort, cfg.training)
        report = build_verification(params, split_data, seed=cfg.training.shuffle_seed)
        path = store.write_text(REPORT_FILE, render_verification(report))

        logger.info(
            "verify_completed",
            passed=report.passed,
            max_deviation=report.max_deviation,
            offending=report.offending
        )
        return VerifyResult(report_path=path, report=report)

    except CreditScoreError as e:
        logger.error("verify_failed", error=str(e), context=e.context)
        raise


def register_verify_commands(app: typer.Typer) -> None:
    """
    Register the verify command.

    Args:
        app: Typer application
    """

    @app.command("verify")
    def verify(
        cohort: Path = typer.Argument(..., help="Cohort CSV the params were trained on."),
        params: Path = typer.Argument(..., help="Params file produced by 'train'."),
        config: Optional[Path] = ConfigOption,
        out: Optional[Path] = OutOption,
    ) -> None:
        """Cross-check theta against the normal equations; exits 4 on FAIL."""
        with exit_on_error("verify"):
            cfg = resolve_config(config, out=out)
            result = cmd_verify(cohort, params, cfg)
            typer.echo(render_verification(result.report))
            if not result.report.passed:
                raise typer.Exit(code=NumericError.exit_code)
