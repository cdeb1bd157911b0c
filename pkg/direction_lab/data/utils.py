import hashlib
import math
from datetime import date, datetime
from pathlib import Path


def to_date(value: str) -> date:
    """Coerce 'YYYY-MM-DD' -> date. Other layouts are rejected."""
    if not value or not isinstance(value, str):
        raise ValueError("Date cannot be empty.")
    try:
        return datetime.strptime(value.strip(), "%Y-%m-%d").date()
    except ValueError:
        raise ValueError(f"Invalid date format: {value!r} (expected YYYY-MM-DD)") from None


def to_price(value: str, column: str) -> float:
    """Coerce '123.45' -> 123.45, rejecting blanks, separators and non-finite values."""
    if value is None or not str(value).strip():
        raise ValueError(f"missing value for '{column}'")
    try:
        number = float(str(value).strip())
    except ValueError:
        raise ValueError(f"'{column}' is not a number: {value!r}") from None
    if not math.isfinite(number):
        raise ValueError(f"'{column}' is not finite: {value!r}")
    return number


def fmt_metric(value: float | None, places: int = 4) -> str:
    """Render a metric for human tables: 0.843211 -> '0.8432', None -> '-'."""
    if value is None:
        return "-"
    return f"{value:.{places}f}"


def fmt_optional(value, empty: str = "-") -> str:
    return empty if value is None else str(value)


def sha256_bytes(payload: bytes) -> str:
    return hashlib.sha256(payload).hexdigest()


def sha256_file(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()
