"""
Integration tests for the full simulate -> train -> verify -> score pipeline.

Drives the real CLI through Typer's CliRunner and checks the artifacts each
stage writes, exit codes for every failure category and run-to-run
determinism.

Run with:
    pytest tests/integration/ -v -s
"""
import csv
import logging
from pathlib import Path

import pytest
from typer.testing import CliRunner

from creditscore.cli import app

# ── Configuration ────────────────────────────────────────────────────────────
SMALL_CONFIG = "n_students=500\nseed=2024\n"
NOISELESS_CONFIG = "n_students=500\nnoise_sd=0.0\n"
ARTIFACTS = (
    "config.txt",
    "cohort.csv",
    "params.txt",
    "cost_history.csv",
    "theta_comparison.csv",
    "verification.txt",
    "scores.csv",
    "importance.csv",
    "credit_summary.txt",
)
COHORT_HEADER = "attendance,attentiveness,homework,understanding,prev_performance,performance"

runner = CliRunner()


# ── Helpers ──────────────────────────────────────────────────────────────────

def invoke(*args):
    """Run the CLI and detach its log handler from the runner's streams."""
    result = runner.invoke(app, [str(a) for a in args])
    logging.getLogger().handlers.clear()
    return result


def read_rows(path: Path):
    with open(path, newline="", encoding="utf-8") as f:
        return list(csv.reader(f))


# ── Module-scoped pipeline run ───────────────────────────────────────────────

@pytest.fixture(scope="module")
def small_config(tmp_path_factory):
    path = tmp_path_factory.mktemp("config") / "small.txt"
    path.write_text(SMALL_CONFIG, encoding="utf-8")
    return path


@pytest.fixture(scope="module")
def pipeline_dir(tmp_path_factory, small_config):
    """
    Run the whole pipeline ONCE for the module.
    Tests that need a cohort, params file or scores reuse this directory.
    """
    out = tmp_path_factory.mktemp("run")
    result = invoke("run-all", "--config", small_config, "--out", out)
    assert result.exit_code == 0, result.output
    return out


# ── Simulate ─────────────────────────────────────────────────────────────────

class TestSimulate:
    def test_default_cohort(self, tmp_path):
        result = invoke("simulate", "--out", tmp_path)
        assert result.exit_code == 0, result.output

        rows = read_rows(tmp_path / "cohort.csv")
        assert ",".join(rows[0]) == COHORT_HEADER
        assert len(rows) == 3001
        assert "homework" in result.output

    def test_same_seed_is_byte_identical(self, tmp_path):
        invoke("simulate", "--out", tmp_path / "a", "--seed", 5)
        invoke("simulate", "--out", tmp_path / "b", "--seed", 5)
        invoke("simulate", "--out", tmp_path / "c", "--seed", 6)
        a = (tmp_path / "a" / "cohort.csv").read_bytes()
        assert a == (tmp_path / "b" / "cohort.csv").read_bytes()
        assert a != (tmp_path / "c" / "cohort.csv").read_bytes()

    def test_malformed_config_exits_2(self, tmp_path, write_config):
        config = write_config("seed=1\nn_students 10\n")
        result = invoke("simulate", "--config", config, "--out", tmp_path)
        assert result.exit_code == 2
        assert "line 2" in result.output
        assert not (tmp_path / "cohort.csv").exists()

    def test_invalid_value_exits_2(self, tmp_path, write_config):
        config = write_config("homework_sd_pct=-3\n")
        result = invoke("simulate", "--config", config, "--out", tmp_path)
        assert result.exit_code == 2
        assert "homework_sd_pct" in result.output


# ── Train ────────────────────────────────────────────────────────────────────

class TestTrain:
    def test_noiseless_recovers_injected_weights(self, tmp_path, write_config):
        config = write_config(NOISELESS_CONFIG)
        invoke("simulate", "--config", config, "--out", tmp_path)
        result = invoke("train", tmp_path / "cohort.csv", "--config", config, "--out", tmp_path)
        assert result.exit_code == 0, result.output

        rows = {row[0]: [float(v) for v in row[1:]]
                for row in read_rows(tmp_path / "theta_comparison.csv")[1:]}
        assert rows["fitted_train"] == pytest.approx(rows["injected"], abs=1e-3)
        assert set(rows) == {"injected", "fitted_train", "fitted_test"}

    def test_cost_history(self, pipeline_dir):
        rows = read_rows(pipeline_dir / "cost_history.csv")
        assert rows[0] == ["iteration", "cost"]
        assert len(rows) == 100_001 + 1
        assert rows[1][0] == "0"
        assert float(rows[-1][1]) <= float(rows[1][1])

    def test_missing_column_exits_3(self, tmp_path, pipeline_dir):
        rows = read_rows(pipeline_dir / "cohort.csv")
        broken = tmp_path / "broken.csv"
        with open(broken, "w", newline="", encoding="utf-8") as f:
            csv.writer(f, lineterminator="\n").writerows([r[:2] + r[3:] for r in rows])

        result = invoke("train", broken, "--out", tmp_path)
        assert result.exit_code == 3
        assert "homework" in result.output

    def test_tiny_cohort_trains_without_test_refit(self, tmp_path, write_config):
        config = write_config("n_students=5\nseed=3\niterations=20000\n")
        invoke("simulate", "--config", config, "--out", tmp_path)
        result = invoke("train", tmp_path / "cohort.csv", "--config", config, "--out", tmp_path)
        assert result.exit_code == 0, result.output

        assert (tmp_path / "params.txt").is_file()
        assert len(read_rows(tmp_path / "cost_history.csv")) == 20_001 + 1
        names = [row[0] for row in read_rows(tmp_path / "theta_comparison.csv")[1:]]
        assert names == ["injected", "fitted_train"]

    def test_duplicated_column_exits_3(self, tmp_path, pipeline_dir):
        rows = read_rows(pipeline_dir / "cohort.csv")
        cohort = tmp_path / "duplicated_header.csv"
        with open(cohort, "w", newline="", encoding="utf-8") as f:
            csv.writer(f, lineterminator="\n").writerows(r + r[-1:] for r in rows)

        result = invoke("train", cohort, "--out", tmp_path)
        assert result.exit_code == 3
        assert "duplicated column 'performance'" in result.output

    def test_missing_targets_exits_3(self, tmp_path):
        cohort = tmp_path / "cohort.csv"
        cohort.write_text(COHORT_HEADER + "\n70,60,70,5,70,\n60,50,80,6,65,\n", encoding="utf-8")
        result = invoke("train", cohort, "--out", tmp_path)
        assert result.exit_code == 3
        assert "performance" in result.output

    def test_divergence_exits_4(self, tmp_path, pipeline_dir):
        result = invoke(
            "train", pipeline_dir / "cohort.csv",
            "--alpha", 5.0, "--iterations", 5000, "--out", tmp_path
        )
        assert result.exit_code == 4
        assert "non-finite" in result.output

    def test_missing_cohort_exits_5(self, tmp_path):
        result = invoke("train", tmp_path / "absent.csv", "--out", tmp_path)
        assert result.exit_code == 5


# ── Verify ───────────────────────────────────────────────────────────────────

class TestVerify:
    def test_pipeline_run_passes(self, pipeline_dir):
        text = (pipeline_dir / "verification.txt").read_text(encoding="utf-8")
        assert "oracle check: PASS" in text
        assert "gradient check: PASS" in text
        assert text.rstrip().endswith("result: PASS")

    def test_tampered_params_fail(self, tmp_path, pipeline_dir, small_config):
        lines = (pipeline_dir / "params.txt").read_text(encoding="utf-8").splitlines()
        tampered = []
        for line in lines:
            if line.startswith("theta2="):
                key, value = line.split("=")
                line = f"{key}={float(value) + 0.01!r}"
            tampered.append(line)
        params = tmp_path / "params.txt"
        params.write_text("\n".join(tampered) + "\n", encoding="utf-8")

        result = invoke(
            "verify", pipeline_dir / "cohort.csv", params,
            "--config", small_config, "--out", tmp_path
        )
        assert result.exit_code == 4
        assert "offending components: theta2" in result.output
        assert "result: FAIL" in (tmp_path / "verification.txt").read_text(encoding="utf-8")

    def test_duplicated_feature_is_singular(self, tmp_path, pipeline_dir):
        rows = read_rows(pipeline_dir / "cohort.csv")
        cohort = tmp_path / "duplicated.csv"
        with open(cohort, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(rows[0])
            writer.writerows([r[0], r[1], r[0], *r[3:]] for r in rows[1:])

        result = invoke("verify", cohort, pipeline_dir / "params.txt", "--out", tmp_path)
        assert result.exit_code == 4
        assert "singular" in result.output


# ── Score ────────────────────────────────────────────────────────────────────

class TestScore:
    def test_pipeline_scores(self, pipeline_dir):
        scores = read_rows(pipeline_dir / "scores.csv")
        assert scores[0] == ["student_id", "credit_score"]
        assert len(scores) == 501
        assert [r[0] for r in scores[1:4]] == ["1", "2", "3"]

        importance = read_rows(pipeline_dir / "importance.csv")
        assert importance[0] == ["feature", "weight", "share"]
        assert importance[1][0] == "homework"
        assert sum(float(r[2]) for r in importance[1:]) == pytest.approx(1.0)

    def test_empty_cohort(self, tmp_path, pipeline_dir):
        cohort = tmp_path / "empty.csv"
        cohort.write_text(COHORT_HEADER + "\n", encoding="utf-8")
        out = tmp_path / "out"

        result = invoke("score", cohort, pipeline_dir / "params.txt", "--out", out)
        assert result.exit_code == 0, result.output
        assert (out / "scores.csv").read_text(encoding="utf-8") == "student_id,credit_score\n"
        assert "students scored: 0" in (out / "credit_summary.txt").read_text(encoding="utf-8")

    def test_cohort_without_targets_is_scored(self, tmp_path, pipeline_dir):
        cohort = tmp_path / "new.csv"
        cohort.write_text(COHORT_HEADER + "\n70,60,70,5,70,\n", encoding="utf-8")
        result = invoke("score", cohort, pipeline_dir / "params.txt", "--out", tmp_path)
        assert result.exit_code == 0, result.output
        assert len(read_rows(tmp_path / "scores.csv")) == 2

    def test_missing_params_exits_5(self, tmp_path, pipeline_dir):
        result = invoke("score", pipeline_dir / "cohort.csv", tmp_path / "nope.txt", "--out", tmp_path)
        assert result.exit_code == 5


# ── run-all ──────────────────────────────────────────────────────────────────

class TestRunAll:
    def test_writes_every_artifact(self, pipeline_dir):
        for name in ARTIFACTS:
            assert (pipeline_dir / name).is_file(), name

    def test_runs_are_byte_identical(self, tmp_path, pipeline_dir, small_config):
        result = invoke("run-all", "--config", small_config, "--out", tmp_path)
        assert result.exit_code == 0, result.output
        for name in ARTIFACTS:
            assert (tmp_path / name).read_bytes() == (pipeline_dir / name).read_bytes(), name

    def test_artifacts_use_lf(self, pipeline_dir):
        for name in ARTIFACTS:
            assert b"\r" not in (pipeline_dir / name).read_bytes(), name

    def test_config_record_reloads(self, tmp_path, pipeline_dir):
        result = invoke(
            "simulate", "--config", pipeline_dir / "config.txt", "--out", tmp_path
        )
        assert result.exit_code == 0, result.output
        assert (tmp_path / "cohort.csv").read_bytes() == (pipeline_dir / "cohort.csv").read_bytes()

    def test_disabled_stage_needs_existing_artifacts(self, tmp_path, write_config):
        config = write_config("stage_simulate=false\n")
        result = invoke("run-all", "--config", config, "--out", tmp_path / "fresh")
        assert result.exit_code == 5
        assert "simulate" in result.output
