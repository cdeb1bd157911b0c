from pathlib import Path

from direction_lab.data.market_data import PriceSeries, load_csv
from direction_lab.data.synthetic import bundled_series
from . import common
from .config import SYNTHETIC


def require_file(path: str | None, what: str) -> Path:
    if not path:
        common.input_error(f"Missing {what}: pass --{what} PATH (or '{SYNTHETIC}')")
    path = Path(path)
    if not path.is_file():
        common.input_error(f"{what.capitalize()} file not found: {path}")
    return path


def require_series(value: str | None, what: str = "input") -> PriceSeries:
    """Load a price CSV, or the bundled synthetic series when the value is 'synthetic'."""
    if value == SYNTHETIC:
        main, validation = bundled_series()
        return validation if what == "validation" else main
    path = require_file(value, what)
    try:
        return load_csv(path)
    except ValueError as e:
        common.input_error(f"{path}: {e}")
