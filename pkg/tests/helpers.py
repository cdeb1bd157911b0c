from datetime import date, timedelta

import numpy as np

from direction_lab.data.market_data import LabeledDataset, OhlcBar, PriceSeries

START = date(2020, 1, 1)


def make_series(closes, highs=None, lows=None, start: date = START) -> PriceSeries:
    closes = np.asarray(closes, dtype=float)
    highs = closes + 1.0 if highs is None else np.asarray(highs, dtype=float)
    lows = closes - 1.0 if lows is None else np.asarray(lows, dtype=float)
    return PriceSeries(tuple(
        OhlcBar(date=start + timedelta(days=i), high=float(h), low=float(l), close=float(c))
        for i, (c, h, l) in enumerate(zip(closes, highs, lows))
    ))


def random_walk(n_bars: int, seed: int) -> PriceSeries:
    rng = np.random.default_rng(seed)
    closes = 100.0 * np.exp(np.cumsum(rng.normal(0.0, 0.02, n_bars)))
    highs = closes * np.exp(np.abs(rng.normal(0.0, 0.01, n_bars)))
    lows = closes * np.exp(-np.abs(rng.normal(0.0, 0.01, n_bars)))
    return make_series(closes, highs, lows)


def labeled(n_rows: int, n_features: int = 2) -> LabeledDataset:
    dates = tuple(START + timedelta(days=i) for i in range(n_rows))
    features = np.arange(n_rows * n_features, dtype=float).reshape(n_rows, n_features)
    labels = np.where(np.arange(n_rows) % 3 == 0, 1, -1)
    return LabeledDataset(dates, features, labels)


def write_ohlc(path, series: PriceSeries) -> str:
    series.to_frame().to_csv(path, index=False, float_format="%.6f")
    return str(path)
