"""
Unit tests for utils/validation.py

Tests key=value parsing, header checks and number parsing with valid and
invalid inputs.
"""
import pytest

from creditscore.exceptions import ConfigurationError, SchemaError
from creditscore.utils.validation import parse_float, parse_key_value_text, validate_header


# ── parse_key_value_text ────────────────────────────────────────────────────

class TestParseKeyValueText:
    def test_simple_pairs(self):
        entries = parse_key_value_text("a=1\nb = two\n", "cfg", ConfigurationError)
        assert entries == {"a": ("1", 1), "b": ("two", 2)}

    def test_comments_and_blank_lines_skipped(self):
        text = "# header\n\nseed=7\n   # indented comment\nalpha=0.1\n"
        entries = parse_key_value_text(text, "cfg", ConfigurationError)
        assert entries == {"seed": ("7", 3), "alpha": ("0.1", 5)}

    def test_value_may_contain_equals(self):
        entries = parse_key_value_text("note=a=b\n", "cfg", ConfigurationError)
        assert entries["note"] == ("a=b", 1)

    def test_empty_value_allowed(self):
        assert parse_key_value_text("x=\n", "cfg", ConfigurationError) == {"x": ("", 1)}

    def test_missing_equals_reports_line(self):
        with pytest.raises(ConfigurationError, match="line 2"):
            parse_key_value_text("seed=1\nnot a pair\n", "cfg", ConfigurationError)

    def test_invalid_key_raises(self):
        with pytest.raises(ConfigurationError, match="invalid key"):
            parse_key_value_text("bad key=1\n", "cfg", ConfigurationError)

    def test_duplicate_key_raises(self):
        with pytest.raises(ConfigurationError, match="line 3: duplicate key 'seed'"):
            parse_key_value_text("seed=1\nalpha=2\nseed=3\n", "cfg", ConfigurationError)

    def test_error_class_is_configurable(self):
        with pytest.raises(SchemaError):
            parse_key_value_text("oops\n", "params", SchemaError)

    def test_error_context_has_line(self):
        with pytest.raises(ConfigurationError) as exc_info:
            parse_key_value_text("\n\n\nbroken\n", "cfg", ConfigurationError)
        assert exc_info.value.context["line"] == 4


# ── validate_header ─────────────────────────────────────────────────────────

EXPECTED = ("a", "b", "c")


class TestValidateHeader:
    def test_exact_match(self):
        validate_header(["a", "b", "c"], EXPECTED, "file.csv")

    def test_missing_column_named(self):
        with pytest.raises(SchemaError, match="missing column 'b'"):
            validate_header(["a", "c"], EXPECTED, "file.csv")

    def test_unexpected_column_named(self):
        with pytest.raises(SchemaError, match="unexpected column 'z'"):
            validate_header(["a", "b", "c", "z"], EXPECTED, "file.csv")

    def test_duplicated_column_named(self):
        with pytest.raises(SchemaError, match="duplicated column 'c'"):
            validate_header(["a", "b", "c", "c"], EXPECTED, "file.csv")

    def test_duplicated_column_before_end(self):
        with pytest.raises(SchemaError, match="duplicated column 'a'") as exc_info:
            validate_header(["a", "a", "b", "c"], EXPECTED, "file.csv")
        assert exc_info.value.context["duplicated"] == ["a"]

    def test_misplaced_column_named(self):
        with pytest.raises(SchemaError, match="column 'c' at position 2"):
            validate_header(["a", "c", "b"], EXPECTED, "file.csv")


# ── parse_float ─────────────────────────────────────────────────────────────

class TestParseFloat:
    @pytest.mark.parametrize("text,value", [("1", 1.0), ("-2.5", -2.5), ("1e-3", 0.001)])
    def test_valid(self, text, value):
        assert parse_float(text, "f", "x", 1) == value

    @pytest.mark.parametrize("text", ["", "abc", "nan", "inf"])
    def test_invalid_raises(self, text):
        with pytest.raises(SchemaError, match="line 9: 'x'"):
            parse_float(text, "f", "x", 9)
