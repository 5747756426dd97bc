"""
Artifact persistence for every pipeline stage.

All files are UTF-8 with LF line endings and are written atomically
(temp file + rename) so a failed stage never leaves a half-written artifact.
"""
import csv
import io
import os
import tempfile
from pathlib import Path
from typing import Iterable, List, Sequence

from pydantic import ValidationError as PydanticValidationError

from ..exceptions import ArtifactIOError, SchemaError
from ..models.cohort import COHORT_COLUMNS, FEATURE_NAMES, StudentRecord
from ..models.credit import CreditScoreReport, FeatureImportance
from ..models.regression import CostHistory, ModelParams, NormMeta, ParameterComparison
from .logging import get_logger
from .validation import parse_float, parse_key_value_text, validate_header

logger = get_logger(__name__)

COST_COLUMNS = ("iteration", "cost")
SCORE_COLUMNS = ("student_id", "credit_score")
IMPORTANCE_COLUMNS = ("feature", "weight", "share")
THETA_KEYS = tuple(f"theta{i}" for i in range(len(FEATURE_NAMES) + 1))
OFFSET_KEYS = tuple(f"norm_offset_{name}" for name in FEATURE_NAMES)
SCALE_KEYS = tuple(f"norm_scale_{name}" for name in FEATURE_NAMES)
PARAM_KEYS = THETA_KEYS + OFFSET_KEYS + SCALE_KEYS


def format_number(value: float) -> str:
    """Shortest decimal that round-trips to the same float."""
    return repr(float(value))


def _csv_text(header: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def read_text(path: Path) -> str:
    """
    Read a UTF-8 text file.

    Raises:
        ArtifactIOError: If the file cannot be read
    """
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise ArtifactIOError(
            f"Failed to read {path}: {e}",
            context={"path": str(path)}
        )


class ArtifactStore:
    """Writes pipeline artifacts into one output directory."""

    def __init__(self, out_dir: Path):
        """
        Initialize the store.

        Args:
            out_dir: Directory receiving all artifacts (created if missing)
        """
        self.out_dir = Path(out_dir)
        try:
            self.out_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise ArtifactIOError(
                f"Cannot create output directory {self.out_dir}: {e}",
                context={"path": str(self.out_dir)}
            )

    def _atomic_write_text(self, filepath: Path, text: str) -> Path:
        """
        Write text atomically using temp file + rename.

        Args:
            filepath: Target file path
            text: Content, already LF-terminated
        """
        dir_path = filepath.parent
        tmp_path = None
        try:
            dir_path.mkdir(parents=True, exist_ok=True)
            fd, tmp_path = tempfile.mkstemp(dir=str(dir_path), prefix=".tmp_", suffix=filepath.suffix)
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
                f.write(text)
                f.flush()
                os.fsync(f.fileno())

            os.replace(tmp_path, str(filepath))

        except OSError as e:
            if tmp_path and os.path.exists(tmp_path):
                os.unlink(tmp_path)
            raise ArtifactIOError(
                f"Failed to write {filepath}: {e}",
                context={"path": str(filepath)}
            )

        logger.debug("artifact_written", path=str(filepath), bytes=len(text.encode("utf-8")))
        return filepath

    def path(self, filename: str) -> Path:
        return self.out_dir / filename

    def write_text(self, filename: str, text: str) -> Path:
        if not text.endswith("\n"):
            text += "\n"
        return self._atomic_write_text(self.path(filename), text)

    def write_cohort(self, records: Sequence[StudentRecord], filename: str = "cohort.csv") -> Path:
        rows = (
            [
                format_number(r.attendance),
                format_number(r.attentiveness),
                format_number(r.homework),
                str(r.understanding),
                format_number(r.prev_performance),
                "" if r.performance is None else format_number(r.performance),
            ]
            for r in records
        )
        return self._atomic_write_text(self.path(filename), _csv_text(COHORT_COLUMNS, rows))

    def write_params(self, params: ModelParams, filename: str = "params.txt") -> Path:
        lines = ["# linear performance model; theta in raw feature units"]
        lines += [f"{key}={format_number(v)}" for key, v in zip(THETA_KEYS, params.theta)]
        lines += [
            f"{key}={format_number(v)}" for key, v in zip(OFFSET_KEYS, params.norm_meta.offsets)
        ]
        lines += [
            f"{key}={format_number(v)}" for key, v in zip(SCALE_KEYS, params.norm_meta.scales)
        ]
        return self._atomic_write_text(self.path(filename), "\n".join(lines) + "\n")

    def write_cost_history(self, history: CostHistory, filename: str = "cost_history.csv") -> Path:
        rows = ([str(i), format_number(c)] for i, c in history.points)
        return self._atomic_write_text(self.path(filename), _csv_text(COST_COLUMNS, rows))

    def write_comparison(
        self,
        comparison: ParameterComparison,
        filename: str = "theta_comparison.csv"
    ) -> Path:
        header = ("parameter",) + THETA_KEYS
        rows = ([name, *map(format_number, values)] for name, values in comparison.rows())
        return self._atomic_write_text(self.path(filename), _csv_text(header, rows))

    def write_scores(self, report: CreditScoreReport, filename: str = "scores.csv") -> Path:
        rows = ([str(i), format_number(s)] for i, s in enumerate(report.scores, start=1))
        return self._atomic_write_text(self.path(filename), _csv_text(SCORE_COLUMNS, rows))

    def write_importance(
        self,
        importance: Sequence[FeatureImportance],
        filename: str = "importance.csv"
    ) -> Path:
        rows = (
            [item.feature, format_number(item.weight), format_number(item.share)]
            for item in importance
        )
        return self._atomic_write_text(self.path(filename), _csv_text(IMPORTANCE_COLUMNS, rows))


# ── Readers ─────────────────────────────────────────────────────────────────

def read_cohort(path: Path) -> List[StudentRecord]:
    """
    Load a cohort CSV, validating the header exactly.

    An empty ``performance`` cell loads as a record without a target.

    Raises:
        ArtifactIOError: If the file cannot be read
        SchemaError: On header mismatch or an unparsable / out-of-range value
    """
    source = str(path)
    rows = list(csv.reader(io.StringIO(read_text(path))))
    if not rows:
        raise SchemaError(f"{source}: missing header", context={"source": source})

    validate_header(rows[0], COHORT_COLUMNS, source)

    records = []
    for line_no, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(COHORT_COLUMNS):
            raise SchemaError(
                f"{source}: line {line_no}: expected {len(COHORT_COLUMNS)} values, got {len(row)}",
                context={"source": source, "line": line_no}
            )

        values = {}
        for name, cell in zip(COHORT_COLUMNS, row):
            if name == "performance" and cell.strip() == "":
                values[name] = None
            else:
                values[name] = parse_float(cell, source, name, line_no)

        understanding = values["understanding"]
        if understanding != int(understanding):
            raise SchemaError(
                f"{source}: line {line_no}: 'understanding' must be an integer",
                context={"source": source, "line": line_no, "value": understanding}
            )
        values["understanding"] = int(understanding)

        try:
            records.append(StudentRecord(**values))
        except PydanticValidationError as e:
            field = ".".join(str(p) for p in e.errors()[0]["loc"])
            raise SchemaError(
                f"{source}: line {line_no}: '{field}' out of range",
                context={"source": source, "line": line_no, "errors": e.errors(include_url=False)}
            )

    logger.info("cohort_loaded", path=source, n_records=len(records))
    return records


def read_params(path: Path) -> ModelParams:
    """
    Load a params file written by ``ArtifactStore.write_params``.

    Raises:
        ArtifactIOError: If the file cannot be read
        SchemaError: On a missing, unknown or malformed key
    """
    source = str(path)
    entries = parse_key_value_text(read_text(path), source, SchemaError)

    unknown = [k for k in entries if k not in PARAM_KEYS]
    if unknown:
        raise SchemaError(
            f"{source}: line {entries[unknown[0]][1]}: unknown key '{unknown[0]}'",
            context={"source": source, "unknown": unknown}
        )
    missing = [k for k in PARAM_KEYS if k not in entries]
    if missing:
        raise SchemaError(
            f"{source}: missing key '{missing[0]}'",
            context={"source": source, "missing": missing}
        )

    def values(keys: Sequence[str]) -> tuple:
        return tuple(parse_float(entries[k][0], source, k, entries[k][1]) for k in keys)

    try:
        meta = NormMeta(offsets=values(OFFSET_KEYS), scales=values(SCALE_KEYS))
    except PydanticValidationError as e:
        raise SchemaError(
            f"{source}: invalid normalization metadata",
            context={"source": source, "errors": e.errors(include_url=False)}
        )
    return ModelParams(theta=values(THETA_KEYS), norm_meta=meta)
