"""
Pipeline configuration loaded from flat key=value files.

Keys map onto SimulationConfig and TrainConfig fields, plus the output
directory and stage toggles. ``#`` starts a comment line. Vector values
(``weights``, ``understanding_weights``) are comma separated.
"""
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field
from pydantic import ValidationError as PydanticValidationError

from ..exceptions import ConfigurationError
from ..models.cohort import SimulationConfig
from ..models.regression import TrainConfig
from ..utils.artifact_store import read_text
from ..utils.logging import get_logger
from ..utils.validation import parse_key_value_text
from .settings import get_settings

logger = get_logger(__name__)

VECTOR_KEYS = ("weights", "understanding_weights")
STAGE_KEYS = ("stage_simulate", "stage_train", "stage_verify", "stage_score")


class StageToggles(BaseModel):
    """Which stages ``run-all`` executes."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    simulate: bool = True
    train: bool = True
    verify: bool = True
    score: bool = True


class PipelineConfig(BaseModel):
    """Everything one pipeline run needs."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    simulation: SimulationConfig = Field(default_factory=SimulationConfig)
    training: TrainConfig = Field(default_factory=TrainConfig)
    out_dir: Path = Path("output")
    stages: StageToggles = Field(default_factory=StageToggles)


SIMULATION_KEYS = tuple(SimulationConfig.model_fields)
TRAINING_KEYS = tuple(TrainConfig.model_fields)
KNOWN_KEYS = SIMULATION_KEYS + TRAINING_KEYS + ("out_dir",) + STAGE_KEYS


def _split_vector(value: str) -> list:
    return [part.strip() for part in value.split(",") if part.strip()]


def _raise_validation(e: PydanticValidationError, section: str, lines: Dict[str, int], source: str):
    first = e.errors()[0]
    key = str(first["loc"][0]) if first["loc"] else section
    where = f"line {lines[key]}: " if key in lines else ""
    raise ConfigurationError(
        f"{source}: {where}invalid value for '{key}': {first['msg']}",
        context={"source": source, "key": key, "errors": e.errors(include_url=False)}
    )


def build_pipeline_config(
    entries: Dict[str, Tuple[str, int]],
    source: str = "<config>",
    overrides: Optional[Dict[str, Any]] = None
) -> PipelineConfig:
    """
    Turn parsed key=value entries plus overrides into a PipelineConfig.

    Raises:
        ConfigurationError: On an unknown key or a value the models reject
    """
    for key, (_, line_no) in entries.items():
        if key not in KNOWN_KEYS:
            raise ConfigurationError(
                f"{source}: line {line_no}: unknown key '{key}'",
                context={"source": source, "line": line_no, "key": key}
            )

    values: Dict[str, Any] = {
        key: _split_vector(value) if key in VECTOR_KEYS else value
        for key, (value, _) in entries.items()
    }
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    lines = {key: line_no for key, (_, line_no) in entries.items()}

    try:
        simulation = SimulationConfig(**{k: values[k] for k in SIMULATION_KEYS if k in values})
    except PydanticValidationError as e:
        _raise_validation(e, "simulation", lines, source)
    try:
        training = TrainConfig(**{k: values[k] for k in TRAINING_KEYS if k in values})
    except PydanticValidationError as e:
        _raise_validation(e, "training", lines, source)
    try:
        stages = StageToggles(**{
            k.removeprefix("stage_"): values[k] for k in STAGE_KEYS if k in values
        })
    except PydanticValidationError as e:
        first_key = "stage_" + str(e.errors()[0]["loc"][0])
        where = f"line {lines[first_key]}: " if first_key in lines else ""
        raise ConfigurationError(
            f"{source}: {where}invalid stage toggle '{first_key}'",
            context={"source": source, "key": first_key}
        )

    return PipelineConfig(
        simulation=simulation,
        training=training,
        out_dir=Path(values.get("out_dir") or get_settings().output_dir),
        stages=stages,
    )


def load_pipeline_config(
    path: Optional[Path] = None,
    overrides: Optional[Dict[str, Any]] = None
) -> PipelineConfig:
    """
    Load a pipeline config file; defaults apply when ``path`` is None.

    Args:
        path: key=value config file
        overrides: Values taking precedence over the file (None entries are ignored)

    Raises:
        ArtifactIOError: If the file cannot be read
        ConfigurationError: On a malformed line (with its line number) or invalid value
    """
    if path is None:
        entries: Dict[str, Tuple[str, int]] = {}
        source = "<defaults>"
    else:
        source = str(path)
        entries = parse_key_value_text(read_text(path), source, ConfigurationError)

    cfg = build_pipeline_config(entries, source, overrides)
    logger.info(
        "pipeline_config_loaded",
        source=source,
        seed=cfg.simulation.seed,
        n_students=cfg.simulation.n_students,
        alpha=cfg.training.alpha,
        iterations=cfg.training.iterations
    )
    return cfg


def _render_value(value: Any) -> str:
    if isinstance(value, tuple):
        return ",".join(repr(float(v)) for v in value)
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_pipeline_config(cfg: PipelineConfig, include_out_dir: bool = True) -> str:
    """
    Serialize a config back into the key=value format ``load_pipeline_config`` reads.

    ``include_out_dir=False`` leaves the directory out so two runs writing to
    different directories record identical files.
    """
    lines = ["# simulation"]
    lines += [f"{k}={_render_value(getattr(cfg.simulation, k))}" for k in SIMULATION_KEYS]
    lines.append("# training")
    lines += [f"{k}={_render_value(getattr(cfg.training, k))}" for k in TRAINING_KEYS]
    lines.append("# pipeline")
    if include_out_dir:
        lines.append(f"out_dir={cfg.out_dir.as_posix()}")
    lines += [
        f"{k}={_render_value(getattr(cfg.stages, k.removeprefix('stage_')))}" for k in STAGE_KEYS
    ]
    return "\n".join(lines) + "\n"
