"""
Cohort simulation.

Draws each activity feature independently from its configured
distribution and synthesizes exam performance as a noisy linear
combination of the features.
"""
import math
from typing import List, Sequence

from pydantic import ValidationError as PydanticValidationError

from ..exceptions import ConfigurationError
from ..models.cohort import (
    COHORT_COLUMNS,
    ColumnSummary,
    CohortSummary,
    SimulationConfig,
    StudentRecord,
)
from ..utils.logging import get_logger
from .rng_stats import (
    RngState,
    sample_binomial,
    sample_categorical,
    sample_gaussian,
    sample_mean,
    sample_poisson,
    sample_sd,
)

logger = get_logger(__name__)

# Stream ids: features and noise never share a sequence
FEATURE_STREAM = 0
NOISE_STREAM = 1


def clamp_percent(value: float) -> float:
    return min(100.0, max(0.0, value))


def _sample_attendance(state: RngState, cfg: SimulationConfig) -> float:
    """Attendance percent under the configured attendance model."""
    if cfg.attendance_model == "gaussian":
        return clamp_percent(
            sample_gaussian(state, cfg.attendance_mean_pct, cfg.attendance_sd_pct)
        )

    classes = cfg.attendance_classes
    p = cfg.attendance_mean_pct / 100.0
    if cfg.attendance_model == "binomial":
        attended = sample_binomial(state, classes, p)
    else:
        attended = sample_poisson(state, classes * p)
    return clamp_percent(100.0 * attended / classes)


def sample_student(state: RngState, cfg: SimulationConfig) -> StudentRecord:
    """
    Draw one student's features; performance is left unset.

    Draw order is fixed (attendance, attentiveness, homework, understanding,
    previous performance) so a seed reproduces the same cohort.

    Raises:
        ConfigurationError: If cfg is not a valid SimulationConfig
    """
    if not isinstance(cfg, SimulationConfig):
        raise ConfigurationError(
            "sample_student requires a SimulationConfig",
            context={"type": type(cfg).__name__}
        )

    attendance = _sample_attendance(state, cfg)
    attentiveness = clamp_percent(
        sample_gaussian(state, cfg.attentiveness_mean_pct, cfg.attentiveness_sd_pct)
    )
    homework = clamp_percent(
        sample_gaussian(state, cfg.homework_mean_pct, cfg.homework_sd_pct)
    )
    understanding = sample_categorical(state, cfg.understanding_weights) + 1
    prev_performance = clamp_percent(
        sample_gaussian(state, cfg.prev_score_mean, cfg.prev_score_sd)
    )

    return StudentRecord(
        attendance=attendance,
        attentiveness=attentiveness,
        homework=homework,
        understanding=understanding,
        prev_performance=prev_performance,
    )


def linear_performance(weights: Sequence[float], features: Sequence[float]) -> float:
    """Noise-free performance c0 + sum(c_i * x_i)."""
    return weights[0] + math.fsum(c * x for c, x in zip(weights[1:], features))


def synthesize_performance(
    rec: StudentRecord,
    cfg: SimulationConfig,
    state: RngState
) -> StudentRecord:
    """
    Set the record's performance to the linear combination plus Gaussian noise.

    The result is not clamped to [0, 100].
    """
    noise = sample_gaussian(state, 0.0, cfg.noise_sd)
    return rec.with_performance(linear_performance(cfg.weights, rec.features()) + noise)


def generate_cohort(cfg: SimulationConfig) -> List[StudentRecord]:
    """
    Generate ``cfg.n_students`` fully populated records.

    Deterministic for a fixed seed. Features and noise come from separate
    streams of the seed, so changing noise_sd or the weights leaves the
    features untouched.
    """
    try:
        cfg = SimulationConfig.model_validate(cfg.model_dump())
    except PydanticValidationError as e:
        raise ConfigurationError(
            f"Invalid simulation config: {e.error_count()} error(s)",
            context={"errors": e.errors(include_url=False)}
        )

    feature_state = RngState(cfg.seed, stream=FEATURE_STREAM)
    noise_state = RngState(cfg.seed, stream=NOISE_STREAM)

    cohort = [
        synthesize_performance(sample_student(feature_state, cfg), cfg, noise_state)
        for _ in range(cfg.n_students)
    ]

    logger.info(
        "cohort_generated",
        n_students=cfg.n_students,
        seed=cfg.seed,
        attendance_model=cfg.attendance_model,
        noise_sd=cfg.noise_sd
    )
    return cohort


def summarize_cohort(records: Sequence[StudentRecord]) -> CohortSummary:
    """Mean, sd, min and max of every populated column."""
    columns = []
    if records:
        for name in COHORT_COLUMNS:
            values = [getattr(r, name) for r in records]
            if any(v is None for v in values):
                continue
            values = [float(v) for v in values]
            columns.append(ColumnSummary(
                name=name,
                mean=sample_mean(values),
                sd=sample_sd(values),
                min=min(values),
                max=max(values),
            ))
    return CohortSummary(n_students=len(records), columns=columns)
