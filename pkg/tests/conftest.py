"""
Shared pytest fixtures for the credit score simulator test suite.

Training runs are expensive (100k full-batch updates), so fitted models
are built once per session and shared.
"""
from pathlib import Path

import pytest

from creditscore.core import regressor
from creditscore.core.cohort_sim import generate_cohort
from creditscore.models.cohort import INJECTED_WEIGHTS, SimulationConfig, StudentRecord
from creditscore.models.regression import TrainConfig

# ── Constants ──────────────────────────────────────────────────────────────
# Reference student with performance left unset
TABLE_ROW_FEATURES = dict(
    attendance=67.9,
    attentiveness=59.9,
    homework=30.6,
    understanding=9,
    prev_performance=67.4,
)


# ── Records and configs ─────────────────────────────────────────────────────

@pytest.fixture
def table_row():
    return StudentRecord(**TABLE_ROW_FEATURES)


@pytest.fixture(scope="session")
def injected():
    return INJECTED_WEIGHTS


@pytest.fixture(scope="session")
def default_sim_cfg():
    return SimulationConfig()


@pytest.fixture(scope="session")
def noiseless_sim_cfg():
    return SimulationConfig(noise_sd=0.0)


@pytest.fixture(scope="session")
def train_cfg():
    return TrainConfig()


# ── Cohorts ─────────────────────────────────────────────────────────────────

@pytest.fixture(scope="session")
def default_cohort(default_sim_cfg):
    return generate_cohort(default_sim_cfg)


@pytest.fixture(scope="session")
def noiseless_cohort(noiseless_sim_cfg):
    return generate_cohort(noiseless_sim_cfg)


@pytest.fixture(scope="session")
def default_split(default_cohort, train_cfg):
    return regressor.split(default_cohort, train_cfg)


@pytest.fixture(scope="session")
def noiseless_split(noiseless_cohort, train_cfg):
    return regressor.split(noiseless_cohort, train_cfg)


# ── Fitted models ───────────────────────────────────────────────────────────

@pytest.fixture(scope="session")
def default_fit(default_split, train_cfg):
    """(ModelParams, CostHistory) for the default noisy cohort."""
    return regressor.train(default_split, train_cfg)


@pytest.fixture(scope="session")
def noiseless_fit(noiseless_split, train_cfg):
    return regressor.train(noiseless_split, train_cfg)


# ── Temp directories ────────────────────────────────────────────────────────

@pytest.fixture
def out_dir(tmp_path):
    """Temporary output directory for pipeline artifacts."""
    d = tmp_path / "out"
    d.mkdir()
    return d


@pytest.fixture
def write_config(tmp_path):
    """Write a key=value config file and return its path."""
    def _write(text: str, name: str = "pipeline.txt") -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path
    return _write
