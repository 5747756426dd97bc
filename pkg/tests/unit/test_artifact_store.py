"""
Unit tests for utils/artifact_store.py

Tests artifact formats, schema checks on read and atomic writes.
"""
import pytest

from creditscore.exceptions import ArtifactIOError, SchemaError
from creditscore.models.credit import CreditScoreReport
from creditscore.models.regression import CostHistory, ModelParams, NormMeta, ParameterComparison
from creditscore.utils.artifact_store import (
    PARAM_KEYS,
    ArtifactStore,
    format_number,
    read_cohort,
    read_params,
)

HEADER = "attendance,attentiveness,homework,understanding,prev_performance,performance\n"


@pytest.fixture
def store(out_dir):
    return ArtifactStore(out_dir)


@pytest.fixture
def params():
    meta = NormMeta(offsets=(50.0, 48.5, 36.25, 1.0, 59.0), scales=(20.0, 21.0, 63.75, 9.0, 22.0))
    return ModelParams(theta=(0.2, 0.3, 0.05, 0.4, 0.1, 0.15), norm_meta=meta)


def _write(tmp_path, text, name="cohort.csv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


# ── Cohort CSV ──────────────────────────────────────────────────────────────

class TestCohortCsv:
    def test_written_cohort_reads_back_exactly(self, store, default_cohort):
        path = store.write_cohort(default_cohort[:200])
        assert read_cohort(path) == default_cohort[:200]

    def test_header_and_line_endings(self, store, default_cohort):
        path = store.write_cohort(default_cohort[:3])
        raw = path.read_bytes()
        assert raw.decode("utf-8").startswith(HEADER)
        assert b"\r" not in raw
        assert raw.endswith(b"\n")

    def test_empty_performance_loads_as_none(self, tmp_path):
        path = _write(tmp_path, HEADER + "70,60,70,5,70,\n")
        [record] = read_cohort(path)
        assert record.performance is None
        assert record.understanding == 5

    def test_header_only_is_empty_cohort(self, tmp_path):
        assert read_cohort(_write(tmp_path, HEADER)) == []

    def test_missing_column_named(self, tmp_path):
        path = _write(tmp_path, "attendance,attentiveness,understanding,prev_performance,performance\n")
        with pytest.raises(SchemaError, match="missing column 'homework'"):
            read_cohort(path)

    def test_reordered_columns_rejected(self, tmp_path):
        path = _write(
            tmp_path,
            "attentiveness,attendance,homework,understanding,prev_performance,performance\n"
        )
        with pytest.raises(SchemaError, match="attentiveness"):
            read_cohort(path)

    def test_duplicated_column_rejected(self, tmp_path):
        path = _write(tmp_path, HEADER.rstrip("\n") + ",performance\n70,60,70,5,70,50,50\n")
        with pytest.raises(SchemaError, match="duplicated column 'performance'"):
            read_cohort(path)

    def test_empty_file_rejected(self, tmp_path):
        with pytest.raises(SchemaError, match="missing header"):
            read_cohort(_write(tmp_path, ""))

    def test_non_numeric_value(self, tmp_path):
        path = _write(tmp_path, HEADER + "70,sixty,70,5,70,50\n")
        with pytest.raises(SchemaError, match="line 2: 'attentiveness'"):
            read_cohort(path)

    def test_fractional_understanding_rejected(self, tmp_path):
        path = _write(tmp_path, HEADER + "70,60,70,5.5,70,50\n")
        with pytest.raises(SchemaError, match="'understanding' must be an integer"):
            read_cohort(path)

    def test_out_of_range_value(self, tmp_path):
        path = _write(tmp_path, HEADER + "70,60,70,5,70,50\n120,60,70,5,70,50\n")
        with pytest.raises(SchemaError, match="line 3: 'attendance' out of range"):
            read_cohort(path)

    def test_wrong_value_count(self, tmp_path):
        path = _write(tmp_path, HEADER + "70,60,70,5\n")
        with pytest.raises(SchemaError, match="expected 6 values"):
            read_cohort(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ArtifactIOError):
            read_cohort(tmp_path / "nope.csv")


# ── Params file ─────────────────────────────────────────────────────────────

class TestParamsFile:
    def test_reads_back_exactly(self, store, params):
        assert read_params(store.write_params(params)) == params

    def test_holds_every_key(self, store, params):
        text = store.write_params(params).read_text(encoding="utf-8")
        keys = [line.split("=")[0] for line in text.splitlines() if not line.startswith("#")]
        assert tuple(keys) == PARAM_KEYS

    def test_missing_key(self, store, params, tmp_path):
        text = store.write_params(params).read_text(encoding="utf-8")
        kept = "\n".join(line for line in text.splitlines() if not line.startswith("theta3"))
        with pytest.raises(SchemaError, match="missing key 'theta3'"):
            read_params(_write(tmp_path, kept, "params.txt"))

    def test_unknown_key(self, store, params, tmp_path):
        text = store.write_params(params).read_text(encoding="utf-8") + "theta6=1.0\n"
        with pytest.raises(SchemaError, match="unknown key 'theta6'"):
            read_params(_write(tmp_path, text, "params.txt"))

    def test_non_positive_scale(self, store, params, tmp_path):
        text = store.write_params(params).read_text(encoding="utf-8")
        text = text.replace("norm_scale_homework=63.75", "norm_scale_homework=0.0")
        with pytest.raises(SchemaError, match="normalization"):
            read_params(_write(tmp_path, text, "params.txt"))


# ── Other artifacts ─────────────────────────────────────────────────────────

class TestOtherArtifacts:
    def test_cost_history_csv(self, store):
        path = store.write_cost_history(CostHistory(costs=[2.5, 1.25, 1.0]))
        assert path.read_text(encoding="utf-8") == "iteration,cost\n0,2.5\n1,1.25\n2,1.0\n"

    def test_comparison_csv(self, store):
        comparison = ParameterComparison(injected=(1.0,) * 6, fitted_train=(2.0,) * 6)
        lines = store.write_comparison(comparison).read_text(encoding="utf-8").splitlines()
        assert lines[0] == "parameter,theta0,theta1,theta2,theta3,theta4,theta5"
        assert lines[1].startswith("injected,1.0,")
        assert len(lines) == 3

    def test_scores_are_one_based(self, store):
        report = CreditScoreReport(scores=[10.0, 20.5])
        text = store.write_scores(report).read_text(encoding="utf-8")
        assert text == "student_id,credit_score\n1,10.0\n2,20.5\n"

    def test_empty_scores_header_only(self, store):
        text = store.write_scores(CreditScoreReport()).read_text(encoding="utf-8")
        assert text == "student_id,credit_score\n"

    def test_format_number_round_trips(self):
        for value in (0.1, 46.815, 1e-20, -3.0):
            assert float(format_number(value)) == value


# ── Atomic writes ───────────────────────────────────────────────────────────

class TestAtomicWrites:
    def test_creates_output_directory(self, tmp_path):
        ArtifactStore(tmp_path / "a" / "b")
        assert (tmp_path / "a" / "b").is_dir()

    def test_no_temp_files_left(self, store, out_dir):
        store.write_text("note.txt", "hello")
        store.write_text("note.txt", "again")
        assert sorted(p.name for p in out_dir.iterdir()) == ["note.txt"]
        assert (out_dir / "note.txt").read_text(encoding="utf-8") == "again\n"

    def test_unwritable_target_raises(self, store, out_dir):
        (out_dir / "blocked").mkdir()
        with pytest.raises(ArtifactIOError):
            store.write_text("blocked", "data")
