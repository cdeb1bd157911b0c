from dataclasses import dataclass
from datetime import date, timedelta

import numpy as np

from .market_data import OhlcBar, PriceSeries
from .validators import validate_window

BUNDLE_SEED = 2020
BUNDLE_MAIN_BARS = 520
BUNDLE_VALIDATION_BARS = 140
BUNDLE_START = date(2016, 1, 1)


@dataclass(frozen=True)
class Regime:
    length: int
    drift: float


def alternating_regimes(n_bars: int, length: int = 40, drift: float = 0.004) -> list[Regime]:
    regimes, sign, covered = [], 1.0, 0
    while covered < n_bars:
        regimes.append(Regime(length, sign * drift))
        covered += length
        sign = -sign
    return regimes


def generate_series(
    n_bars: int,
    seed: int,
    *,
    start: date = BUNDLE_START,
    first_close: float = 100.0,
    volatility: float = 0.01,
    autocorrelation: float = 0.45,
    regimes: list[Regime] | None = None,
) -> PriceSeries:
    """Geometric random walk whose log returns follow drift regimes plus AR(1) persistence."""
    n_bars = validate_window(n_bars, "n_bars")
    rng = np.random.default_rng(seed)
    regimes = regimes or alternating_regimes(n_bars)
    drift = np.concatenate([np.full(r.length, r.drift) for r in regimes])
    if len(drift) < n_bars:
        raise ValueError(f"regimes cover {len(drift)} bars, {n_bars} requested")

    shocks = rng.normal(0.0, volatility, n_bars)
    wicks = np.abs(rng.normal(0.0, volatility / 2, (n_bars, 2)))
    volumes = rng.uniform(1_000.0, 5_000.0, n_bars)

    bars, close, previous_return = [], first_close, 0.0
    for t in range(n_bars):
        log_return = drift[t] + autocorrelation * previous_return + shocks[t]
        open_ = close
        close = open_ * float(np.exp(log_return))
        high = max(open_, close) * float(np.exp(wicks[t, 0]))
        low = min(open_, close) * float(np.exp(-wicks[t, 1]))
        bars.append(OhlcBar(
            date=start + timedelta(days=t),
            high=round(high, 6),
            low=round(low, 6),
            close=round(close, 6),
            open=round(open_, 6),
            volume=round(float(volumes[t]), 2),
        ))
        previous_return = log_return
    return PriceSeries(tuple(bars))


def bundled_series() -> tuple[PriceSeries, PriceSeries]:
    """The shipped demo data: a main series and the validation series that follows it."""
    full = generate_series(BUNDLE_MAIN_BARS + BUNDLE_VALIDATION_BARS, BUNDLE_SEED)
    return (
        PriceSeries(full.bars[:BUNDLE_MAIN_BARS]),
        PriceSeries(full.bars[BUNDLE_MAIN_BARS:]),
    )
