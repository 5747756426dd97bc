"""
Shared CLI plumbing: option declarations, config resolution and the
mapping from project exceptions to exit codes.
"""
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, Optional

import typer

from ..config.pipeline import PipelineConfig, load_pipeline_config
from ..exceptions import CreditScoreError
from ..utils.logging import get_logger

logger = get_logger(__name__)

ConfigOption = typer.Option(
    None, "--config", "-c", help="key=value pipeline config file (defaults apply when omitted)."
)
OutOption = typer.Option(None, "--out", "-o", help="Output directory (overrides out_dir).")
SeedOption = typer.Option(None, "--seed", help="Simulation seed (overrides seed).")
IterationsOption = typer.Option(
    None, "--iterations", help="Gradient descent iterations (overrides iterations)."
)
AlphaOption = typer.Option(None, "--alpha", help="Learning rate (overrides alpha).")


def resolve_config(
    config_path: Optional[Path],
    out: Optional[Path] = None,
    seed: Optional[int] = None,
    iterations: Optional[int] = None,
    alpha: Optional[float] = None,
) -> PipelineConfig:
    """Load the config file and apply command-line overrides."""
    return load_pipeline_config(
        config_path,
        overrides={"out_dir": out, "seed": seed, "iterations": iterations, "alpha": alpha},
    )


@contextmanager
def exit_on_error(command: str) -> Iterator[None]:
    """Report a project error on stderr and exit with its category code."""
    try:
        yield
    except CreditScoreError as e:
        logger.error(
            "command_failed",
            command=command,
            error=str(e),
            exit_code=e.exit_code,
            context=e.context
        )
        typer.echo(f"error: {e}", err=True)
        raise typer.Exit(code=e.exit_code)
