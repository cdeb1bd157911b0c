"""Technical indicators over a daily price series.

Every indicator returns an array aligned to the input bars, holding NaN on
the leading bars where its window is not yet full. Windows cover days
t-n+1..t inclusive, so appending bars never changes earlier values.
"""
import logging
from dataclasses import asdict, dataclass
from datetime import date
from pathlib import Path

import numpy as np
import pandas as pd
from numpy.lib.stride_tricks import sliding_window_view

from .market_data import PriceSeries
from .validators import as_float_vector, require_length, validate_window

logger = logging.getLogger(__name__)

COLUMNS = ("ma", "wma", "mom", "k", "d", "rsi", "macd", "lw", "ad")
DISPLAY_NAMES = {
    "ma": "MA", "wma": "WMA", "mom": "Mom", "k": "K%", "d": "D%",
    "rsi": "RSI", "macd": "MACD", "lw": "LW", "ad": "A/D",
}


@dataclass(frozen=True)
class IndicatorConfig:
    ma_window: int = 14
    wma_window: int = 14
    n: int = 10
    ema_short: int = 12
    ema_long: int = 26
    macd_signal_n: int = 10

    def __post_init__(self):
        for name, value in asdict(self).items():
            validate_window(value, name)
        if self.ema_short >= self.ema_long:
            raise ValueError(f"ema_short ({self.ema_short}) must be below ema_long ({self.ema_long})")

    @staticmethod
    def ema_alpha(k: int) -> float:
        return 2.0 / (k + 1.0)

    def first_row(self) -> int:
        """Index of the first bar on which every indicator is defined.

        This is also the number of warmup rows dropped. A window of w bars first
        completes on bar w, index w - 1, so the defaults drop 25 rows and the
        long EMA's 26-bar window lands on the first kept row.
        """
        return max(
            self.ma_window - 1,
            self.wma_window - 1,
            self.n,             # Mom, RSI
            2 * self.n - 2,     # D% averages n values of K%
            self.ema_long - 1,  # MACD once the long EMA has seen a full window
            1,                  # A/D
        )

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class FeatureMatrix:
    dates: tuple[date, ...]
    values: np.ndarray
    columns: tuple[str, ...] = COLUMNS

    def __post_init__(self):
        if self.values.shape != (len(self.dates), len(self.columns)):
            raise ValueError(
                f"feature matrix shape {self.values.shape} does not match "
                f"{len(self.dates)} dates x {len(self.columns)} columns"
            )

    def __len__(self) -> int:
        return len(self.dates)

    def column(self, name: str) -> np.ndarray:
        return self.values[:, self.columns.index(name)]

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.values, columns=list(self.columns))
        frame.insert(0, "date", [d.isoformat() for d in self.dates])
        return frame


# HELPERS
def _windows(values: np.ndarray, window: int) -> np.ndarray:
    return sliding_window_view(values, window)


def _padded(values: np.ndarray, length: int) -> np.ndarray:
    out = np.full(length, np.nan)
    out[length - len(values):] = values
    return out


# Moving averages
def sma(closes, window: int) -> np.ndarray:
    closes = as_float_vector(closes, "closes")
    window = validate_window(window)
    require_length(closes, window, "closes")
    return _padded(_windows(closes, window).mean(axis=1), len(closes))


def wma(closes, window: int) -> np.ndarray:
    """Linearly weighted mean; the newest close weighs `window`, the oldest 1."""
    closes = as_float_vector(closes, "closes")
    window = validate_window(window)
    require_length(closes, window, "closes")
    weights = np.arange(1, window + 1, dtype=float)
    return _padded(_windows(closes, window) @ weights / weights.sum(), len(closes))


def ema(closes, k: int) -> np.ndarray:
    """EMA seeded with the first value, alpha = 2/(k+1)."""
    closes = as_float_vector(closes, "closes")
    k = validate_window(k, "k")
    require_length(closes, 1, "closes")
    return pd.Series(closes).ewm(alpha=IndicatorConfig.ema_alpha(k), adjust=False).mean().to_numpy()


# Momentum family
def momentum(closes, n: int = 10) -> np.ndarray:
    closes = as_float_vector(closes, "closes")
    n = validate_window(n, "n")
    require_length(closes, n + 1, "closes")
    return _padded(closes[n:] - closes[:-n], len(closes))


def _stochastic_position(highs, lows, closes, n: int) -> np.ndarray:
    highs = as_float_vector(highs, "highs")
    lows = as_float_vector(lows, "lows")
    closes = as_float_vector(closes, "closes")
    n = validate_window(n, "n")
    if not len(highs) == len(lows) == len(closes):
        raise ValueError("highs, lows and closes must have equal length")
    require_length(closes, n, "bars")

    highest = _windows(highs, n).max(axis=1)
    lowest = _windows(lows, n).min(axis=1)
    span = highest - lowest
    flat = span == 0
    position = 100.0 * (closes[n - 1:] - lowest) / np.where(flat, 1.0, span)
    # closes outside the bar's high/low range happen on real feeds
    position = np.clip(position, 0.0, 100.0)
    position[flat] = 50.0
    return _padded(position, len(closes))


def stoch_k(highs, lows, closes, n: int = 10) -> np.ndarray:
    return _stochastic_position(highs, lows, closes, n)


def stoch_d(k_series, n: int = 10) -> np.ndarray:
    k_series = as_float_vector(k_series, "k_series")
    n = validate_window(n, "n")
    defined = k_series[~np.isnan(k_series)]
    require_length(defined, n, "K% values")
    return _padded(_windows(defined, n).mean(axis=1), len(k_series))


def williams_r(highs, lows, closes, n: int = 10) -> np.ndarray:
    """Larry Williams' R% on the [-100, 0] scale, i.e. K% - 100."""
    return _stochastic_position(highs, lows, closes, n) - 100.0


def rsi(closes, n: int = 10) -> np.ndarray:
    """RSI from simple n-day means of up and down moves (no Wilder smoothing)."""
    closes = as_float_vector(closes, "closes")
    n = validate_window(n, "n")
    require_length(closes, n + 1, "closes")

    changes = np.diff(closes)
    avg_up = _windows(np.where(changes > 0, changes, 0.0), n).mean(axis=1)
    avg_down = _windows(np.where(changes < 0, -changes, 0.0), n).mean(axis=1)

    with np.errstate(divide="ignore", invalid="ignore"):
        values = 100.0 - 100.0 / (1.0 + avg_up / avg_down)
    values = np.where(avg_down == 0, 100.0, values)
    values = np.where(avg_up == 0, 0.0, values)
    values = np.where((avg_up == 0) & (avg_down == 0), 50.0, values)
    return _padded(values, len(closes))


def macd(closes, cfg: IndicatorConfig = IndicatorConfig()) -> np.ndarray:
    """MACD line smoothed by its own EMA, seeded with the first DIFF value."""
    closes = as_float_vector(closes, "closes")
    if len(closes) == 0:
        raise ValueError("closes is empty")
    diff = ema(closes, cfg.ema_short) - ema(closes, cfg.ema_long)
    return ema(diff, cfg.macd_signal_n)


def ad_oscillator(highs, lows, closes) -> np.ndarray:
    highs = as_float_vector(highs, "highs")
    lows = as_float_vector(lows, "lows")
    closes = as_float_vector(closes, "closes")
    if not len(highs) == len(lows) == len(closes):
        raise ValueError("highs, lows and closes must have equal length")
    require_length(closes, 2, "bars")

    span = highs[1:] - lows[1:]
    flat = span == 0
    values = (highs[1:] - closes[:-1]) / np.where(flat, 1.0, span)
    values[flat] = 0.0
    return _padded(values, len(closes))


# Assembly
def compute_features(series: PriceSeries, cfg: IndicatorConfig = IndicatorConfig()) -> FeatureMatrix:
    first = cfg.first_row()
    if len(series) <= first:
        raise ValueError(
            f"series has {len(series)} bars; at least {first + 1} are needed to clear the indicator warmup"
        )

    highs, lows, closes = series.highs, series.lows, series.closes
    k = stoch_k(highs, lows, closes, cfg.n)
    columns = {
        "ma": sma(closes, cfg.ma_window),
        "wma": wma(closes, cfg.wma_window),
        "mom": momentum(closes, cfg.n),
        "k": k,
        "d": stoch_d(k, cfg.n),
        "rsi": rsi(closes, cfg.n),
        "macd": macd(closes, cfg),
        "lw": williams_r(highs, lows, closes, cfg.n),
        "ad": ad_oscillator(highs, lows, closes),
    }
    values = np.column_stack([columns[name] for name in COLUMNS])[first:]
    if not np.all(np.isfinite(values)):
        raise ValueError("indicator matrix contains non-finite values after warmup")

    logger.info("Computed %d feature rows (%d warmup bars dropped)", len(values), first)
    return FeatureMatrix(dates=series.dates[first:], values=values)


def describe_features(matrix: FeatureMatrix) -> pd.DataFrame:
    """Minimum, maximum, mean and standard deviation of each indicator."""
    frame = pd.DataFrame(matrix.values, columns=[DISPLAY_NAMES.get(c, c) for c in matrix.columns])
    summary = pd.DataFrame({
        "minimum": frame.min(),
        "maximum": frame.max(),
        "mean": frame.mean(),
        "std": frame.std(ddof=1),
    })
    summary.index.name = "indicator"
    return summary


def write_features(matrix, path: str | Path, integer: bool = False) -> Path:
    """Export a dated matrix as CSV: 9 significant digits, or plain integers for sign matrices."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = matrix.to_frame()
    if integer:
        frame[list(matrix.columns)] = frame[list(matrix.columns)].astype(int)
        frame.to_csv(path, index=False)
    else:
        frame.to_csv(path, index=False, float_format="%.9g")
    return path
