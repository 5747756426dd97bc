# Este es el punto de entrada de la CLI: inicializa la configuración, el logging
# y registra los comandos del pipeline (simulate, train, verify, score, run-all).

"""
Credit score simulator CLI.

Main entry point that wires settings and logging and registers every
pipeline command on the Typer application.
"""
import typer

from .config.settings import get_settings  # Singleton de configuración
from .utils.logging import setup_logging, get_logger  # Sistema de logging estructurado

# Import command registration functions
from .commands.simulate import register_simulate_commands  # Etapa simulate
from .commands.train import register_train_commands  # Etapa train
from .commands.verify import register_verify_commands  # Etapa verify
from .commands.score import register_score_commands  # Etapa score
from .commands.run_all import register_run_all_commands  # Pipeline completo

logger = get_logger(__name__)

app = typer.Typer(
    name="credit-score",
    help="Simulate student cohorts, fit the performance model and compute credit scores.",
    no_args_is_help=True,
    add_completion=False,
)

register_simulate_commands(app)
register_train_commands(app)
register_verify_commands(app)
register_score_commands(app)
register_run_all_commands(app)

COMMANDS = ["simulate", "train", "verify", "score", "run-all"]


@app.callback()
def configure() -> None:
    """Set up structured logging before any command runs."""
    settings = get_settings()
    setup_logging(
        level=settings.log_level,
        json_logs=settings.log_json,
        log_dir=settings.log_dir
    )
    logger.debug("cli_initialized", log_level=settings.log_level, commands=COMMANDS)


def main() -> None:
    """
    Main entry point for the CLI.

    Can be invoked via:
    - the ``credit-score`` console script
    - python -m creditscore
    """
    app()


if __name__ == "__main__":
    main()
