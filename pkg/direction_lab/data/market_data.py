import logging
import math
from dataclasses import dataclass, field
from datetime import date
from functools import cached_property
from pathlib import Path
from typing import BinaryIO, Protocol

import numpy as np
import pandas as pd

from .utils import to_date, to_price
from .validators import require_sign_labels, validate_fraction

logger = logging.getLogger(__name__)

REQUIRED_COLUMNS = ("date", "high", "low", "close")
OPTIONAL_COLUMNS = ("open", "volume")


@dataclass(frozen=True)
class OhlcBar:
    date: date
    high: float
    low: float
    close: float
    open: float | None = None
    volume: float | None = None

    def __post_init__(self):
        for name in ("high", "low", "close"):
            if not getattr(self, name) > 0:
                raise ValueError(f"non-positive price: {name}={getattr(self, name)}")
        if self.open is not None and not self.open > 0:
            raise ValueError(f"non-positive price: open={self.open}")
        if self.volume is not None and self.volume < 0:
            raise ValueError(f"negative volume: {self.volume}")
        if self.low > self.high:
            raise ValueError(f"low > high ({self.low} > {self.high})")


@dataclass(frozen=True)
class PriceSeries:
    """Date-ordered daily bars. Dates strictly increase; the series is never empty."""

    bars: tuple[OhlcBar, ...]

    def __post_init__(self):
        if len(self.bars) < 1:
            raise ValueError("price series must contain at least one bar")
        for previous, current in zip(self.bars, self.bars[1:]):
            if current.date <= previous.date:
                raise ValueError(f"non-increasing dates: {current.date} follows {previous.date}")

    def __len__(self) -> int:
        return len(self.bars)

    @cached_property
    def dates(self) -> tuple[date, ...]:
        return tuple(bar.date for bar in self.bars)

    @cached_property
    def closes(self) -> np.ndarray:
        return _frozen_array([bar.close for bar in self.bars])

    @cached_property
    def highs(self) -> np.ndarray:
        return _frozen_array([bar.high for bar in self.bars])

    @cached_property
    def lows(self) -> np.ndarray:
        return _frozen_array([bar.low for bar in self.bars])

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame({
            "date": [d.isoformat() for d in self.dates],
            "open": [bar.open for bar in self.bars],
            "high": self.highs,
            "low": self.lows,
            "close": self.closes,
            "volume": [bar.volume for bar in self.bars],
        })
        return frame.dropna(axis=1, how="all")


class DatedMatrix(Protocol):
    dates: tuple[date, ...]
    values: np.ndarray
    columns: tuple[str, ...]


@dataclass(frozen=True)
class LabeledDataset:
    dates: tuple[date, ...]
    features: np.ndarray
    labels: np.ndarray
    columns: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if self.features.ndim != 2:
            raise ValueError("features must be a two-dimensional matrix")
        if not (len(self.dates) == self.features.shape[0] == len(self.labels)):
            raise ValueError(
                f"row mismatch: {len(self.dates)} dates, {self.features.shape[0]} feature rows, "
                f"{len(self.labels)} labels"
            )
        require_sign_labels(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def rows(self, start: int, stop: int | None = None) -> "LabeledDataset":
        return LabeledDataset(
            dates=self.dates[start:stop],
            features=self.features[start:stop],
            labels=self.labels[start:stop],
            columns=self.columns,
        )

    def with_features(self, features: np.ndarray) -> "LabeledDataset":
        return LabeledDataset(self.dates, np.asarray(features, dtype=float), self.labels, self.columns)

    @property
    def positive_rate(self) -> float:
        return float(np.mean(self.labels == 1))


@dataclass(frozen=True)
class DatasetSplit:
    train: LabeledDataset
    test: LabeledDataset

    def __post_init__(self):
        if self.train.dates and self.test.dates and self.train.dates[-1] >= self.test.dates[0]:
            raise ValueError("train partition must precede the test partition")


@dataclass(frozen=True)
class NormalizationParams:
    minimum: np.ndarray
    maximum: np.ndarray

    def __post_init__(self):
        if self.minimum.shape != self.maximum.shape:
            raise ValueError("minimum and maximum must have the same length")
        if np.any(self.minimum > self.maximum):
            raise ValueError("normalization minimum exceeds maximum")

    def to_dict(self) -> dict:
        return {"minimum": self.minimum.tolist(), "maximum": self.maximum.tolist()}

    @classmethod
    def from_dict(cls, payload: dict) -> "NormalizationParams":
        return cls(np.asarray(payload["minimum"], dtype=float), np.asarray(payload["maximum"], dtype=float))


# HELPERS
def _frozen_array(values) -> np.ndarray:
    array = np.asarray(values, dtype=float)
    array.flags.writeable = False
    return array


def _optional_value(row: pd.Series, column: str) -> float | None:
    if column not in row.index:
        return None
    raw = row[column]
    if raw is None or (isinstance(raw, float) and math.isnan(raw)) or not str(raw).strip():
        return None
    return to_price(raw, column)


# Ingestion
def load_csv(source: BinaryIO | str | Path) -> PriceSeries:
    """Read a UTF-8 OHLC CSV. Rows must already be in date order; nothing is re-sorted."""
    try:
        frame = pd.read_csv(
            source,
            dtype=str,
            keep_default_na=False,
            skip_blank_lines=False,
            encoding="utf-8",
            skipinitialspace=True,
        )
    except pd.errors.EmptyDataError:
        raise ValueError("CSV is empty") from None
    except pd.errors.ParserError as e:
        raise ValueError(f"malformed CSV: {e}") from e
    except UnicodeDecodeError as e:
        raise ValueError(f"CSV is not valid UTF-8: {e}") from e

    frame.columns = [str(c).strip().lower() for c in frame.columns]
    missing = [c for c in REQUIRED_COLUMNS if c not in frame.columns]
    if missing:
        raise ValueError(f"line 1: missing required columns: {', '.join(missing)}")
    if frame.empty:
        raise ValueError("CSV has a header but no rows")

    bars = []
    for position, (_, row) in enumerate(frame.iterrows()):
        line = position + 2
        try:
            if any(pd.isna(row[c]) for c in REQUIRED_COLUMNS):
                raise ValueError("malformed row (missing fields)")
            bar = OhlcBar(
                date=to_date(row["date"]),
                high=to_price(row["high"], "high"),
                low=to_price(row["low"], "low"),
                close=to_price(row["close"], "close"),
                open=_optional_value(row, "open"),
                volume=_optional_value(row, "volume"),
            )
        except ValueError as e:
            raise ValueError(f"line {line}: {e}") from None
        if bars and bar.date <= bars[-1].date:
            raise ValueError(f"line {line}: non-increasing dates ({bar.date} after {bars[-1].date})")
        bars.append(bar)

    logger.info("Loaded %d bars (%s .. %s)", len(bars), bars[0].date, bars[-1].date)
    return PriceSeries(tuple(bars))


def write_csv(series: PriceSeries, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    series.to_frame().to_csv(path, index=False, float_format="%.6f")
    return path


# Labels
def aligned_closes(series: PriceSeries, dates) -> np.ndarray:
    """Closing prices of `series` on each of `dates`."""
    index = {d: i for i, d in enumerate(series.dates)}
    try:
        return np.array([series.closes[index[d]] for d in dates], dtype=float)
    except KeyError as e:
        raise ValueError(f"alignment mismatch: {e.args[0]} is not a date of the price series") from None


def make_labels(series: PriceSeries, features: DatedMatrix) -> LabeledDataset:
    """Label each feature row +1 when the next close is higher, else -1.

    Rows whose date has no following close are dropped.
    """
    index = {d: i for i, d in enumerate(series.dates)}
    positions = []
    for d in features.dates:
        if d not in index:
            raise ValueError(f"alignment mismatch: feature date {d} is not in the price series")
        positions.append(index[d])
    positions = np.asarray(positions, dtype=int)

    keep = positions < len(series) - 1
    closes = series.closes
    current = closes[positions[keep]]
    following = closes[positions[keep] + 1]
    labels = np.where(following > current, 1, -1).astype(np.int8)

    dates = tuple(d for d, k in zip(features.dates, keep) if k)
    return LabeledDataset(
        dates=dates,
        features=np.asarray(features.values, dtype=float)[keep],
        labels=labels,
        columns=tuple(features.columns),
    )


# Splits
def chronological_split(data: LabeledDataset, train_fraction: float) -> DatasetSplit:
    train_fraction = validate_fraction(train_fraction)
    n_rows = len(data)
    if n_rows < 2:
        raise ValueError(f"need at least 2 rows to split, got {n_rows}")
    cut = math.floor(train_fraction * n_rows)
    if cut == 0 or cut == n_rows:
        raise ValueError(f"train fraction {train_fraction} leaves an empty partition for {n_rows} rows")
    return DatasetSplit(train=data.rows(0, cut), test=data.rows(cut))


# Normalization
def fit_normalizer(train) -> NormalizationParams:
    matrix = np.asarray(train, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] == 0:
        raise ValueError("cannot fit a normalizer on an empty matrix")
    return NormalizationParams(matrix.min(axis=0), matrix.max(axis=0))


def apply_normalizer(params: NormalizationParams, matrix) -> np.ndarray:
    """Min-max scale each column with the fitted range; values outside it are not clipped."""
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[1] != params.minimum.shape[0]:
        raise ValueError(
            f"column count mismatch: normalizer has {params.minimum.shape[0]} columns, "
            f"matrix has shape {matrix.shape}"
        )
    span = params.maximum - params.minimum
    constant = span == 0
    scaled = (matrix - params.minimum) / np.where(constant, 1.0, span)
    scaled[:, constant] = 0.0
    return scaled


def normalize_split(split: DatasetSplit) -> tuple[DatasetSplit, NormalizationParams]:
    params = fit_normalizer(split.train.features)
    return (
        DatasetSplit(
            train=split.train.with_features(apply_normalizer(params, split.train.features)),
            test=split.test.with_features(apply_normalizer(params, split.test.features)),
        ),
        params,
    )
