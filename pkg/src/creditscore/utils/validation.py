"""
Input validation utilities.

Parses flat key=value text and checks file headers and keys against the
declared artifact schemas.
"""
import math
import re
from typing import Dict, Sequence, Tuple, Type

from ..exceptions import CreditScoreError, SchemaError
from .logging import get_logger

logger = get_logger(__name__)

KEY_PATTERN = re.compile(r'^[A-Za-z_][A-Za-z0-9_]*$')


def parse_key_value_text(
    text: str,
    source: str,
    error_cls: Type[CreditScoreError]
) -> Dict[str, Tuple[str, int]]:
    """
    Parse ``key=value`` lines.

    Blank lines and lines starting with ``#`` are skipped; whitespace around
    keys and values is stripped.

    Args:
        text: File contents
        source: Path or name used in error messages
        error_cls: Exception raised on malformed input

    Returns:
        Mapping key -> (value, 1-based line number)

    Raises:
        error_cls: If a line has no '=', an invalid key, or repeats a key
    """
    entries: Dict[str, Tuple[str, int]] = {}

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue

        if "=" not in line:
            raise error_cls(
                f"{source}: line {line_no}: expected key=value",
                context={"source": source, "line": line_no, "text": raw}
            )

        key, value = (part.strip() for part in line.split("=", 1))
        if not KEY_PATTERN.match(key):
            raise error_cls(
                f"{source}: line {line_no}: invalid key '{key}'",
                context={"source": source, "line": line_no, "key": key}
            )
        if key in entries:
            raise error_cls(
                f"{source}: line {line_no}: duplicate key '{key}' (first on line {entries[key][1]})",
                context={"source": source, "line": line_no, "key": key}
            )

        entries[key] = (value, line_no)

    return entries


def validate_header(header: Sequence[str], expected: Sequence[str], source: str) -> None:
    """
    Check a CSV header matches ``expected`` exactly, column for column.

    Raises:
        SchemaError: Naming the first missing, unexpected, duplicated or misplaced column
    """
    header = list(header)
    expected = list(expected)
    if header == expected:
        return

    missing = [c for c in expected if c not in header]
    unexpected = [c for c in header if c not in expected]
    duplicated = [c for i, c in enumerate(header) if c in header[:i]]

    if missing:
        message = f"{source}: missing column '{missing[0]}'"
    elif unexpected:
        message = f"{source}: unexpected column '{unexpected[0]}'"
    elif duplicated:
        message = f"{source}: duplicated column '{duplicated[0]}'"
    else:
        position = next(i for i, (a, b) in enumerate(zip(header, expected)) if a != b)
        message = (
            f"{source}: column '{header[position]}' at position {position + 1}, "
            f"expected '{expected[position]}'"
        )

    raise SchemaError(
        message,
        context={
            "source": source,
            "header": header,
            "expected": expected,
            "missing": missing,
            "unexpected": unexpected,
            "duplicated": duplicated,
        }
    )


def parse_float(value: str, source: str, field: str, line: int) -> float:
    """
    Parse a finite decimal value.

    Raises:
        SchemaError: If the value is not a finite number
    """
    try:
        number = float(value)
    except ValueError:
        number = math.nan
    if not math.isfinite(number):
        raise SchemaError(
            f"{source}: line {line}: '{field}' is not a finite number: {value!r}",
            context={"source": source, "line": line, "field": field, "value": value}
        )
    return number
