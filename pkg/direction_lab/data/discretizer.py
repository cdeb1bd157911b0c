from dataclasses import dataclass
from datetime import date

import numpy as np
import pandas as pd

from .indicators import COLUMNS, FeatureMatrix

RSI_OVERSOLD = 30.0
RSI_OVERBOUGHT = 70.0

PRICE_VS_AVERAGE = ("ma", "wma")
RISING = ("k", "d", "lw", "macd", "ad")


@dataclass(frozen=True)
class SignMatrix:
    dates: tuple[date, ...]
    values: np.ndarray
    columns: tuple[str, ...] = COLUMNS

    def __post_init__(self):
        if self.values.shape != (len(self.dates), len(self.columns)):
            raise ValueError("sign matrix shape does not match its dates and columns")
        if not np.all(np.isin(self.values, (-1, 1))):
            raise ValueError("sign matrix entries must be +1 or -1")

    def __len__(self) -> int:
        return len(self.dates)

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.values.astype(int), columns=list(self.columns))
        frame.insert(0, "date", [d.isoformat() for d in self.dates])
        return frame


def _sign(condition: np.ndarray) -> np.ndarray:
    return np.where(condition, 1, -1).astype(np.int8)


def discretize(features: FeatureMatrix, closes) -> SignMatrix:
    """Turn each indicator into its trend direction (+1 up, -1 down).

    The first row only serves as the previous value for the rules that compare
    against t-1, so the result is one row shorter than `features`.
    """
    closes = np.asarray(closes, dtype=float)
    if closes.shape != (len(features),):
        raise ValueError(f"alignment mismatch: {len(features)} feature rows but {closes.shape[0]} closes")
    if len(features) < 2:
        raise ValueError("discretization needs at least 2 rows")

    current = features.values[1:]
    previous = features.values[:-1]
    close_now = closes[1:]
    signs = np.empty(current.shape, dtype=np.int8)

    for j, name in enumerate(features.columns):
        if name in PRICE_VS_AVERAGE:
            signs[:, j] = _sign(close_now >= current[:, j])
        elif name == "mom":
            signs[:, j] = _sign(current[:, j] >= 0)
        elif name in RISING:
            signs[:, j] = _sign(current[:, j] > previous[:, j])
        elif name == "rsi":
            value = current[:, j]
            rising = _sign(value > previous[:, j])
            signs[:, j] = np.where(value < RSI_OVERSOLD, 1, np.where(value > RSI_OVERBOUGHT, -1, rising))
        else:
            raise ValueError(f"no discretization rule for column '{name}'")

    return SignMatrix(dates=features.dates[1:], values=signs, columns=features.columns)
