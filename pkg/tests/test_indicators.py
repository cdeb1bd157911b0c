import time

import numpy as np
import pytest

from direction_lab.data.indicators import (
    COLUMNS, IndicatorConfig, ad_oscillator, compute_features, describe_features,
    ema, macd, momentum, rsi, sma, stoch_d, stoch_k, williams_r, wma, write_features,
)
from tests.helpers import make_series

TOL = 1e-9


# ---------- Brute-force oracles ----------
def naive_sma(c, w):
    return {t: sum(c[t - w + 1:t + 1]) / w for t in range(w - 1, len(c))}


def naive_wma(c, w):
    weights = range(1, w + 1)
    return {t: sum(wt * c[t - w + j] for j, wt in enumerate(weights, start=1)) / sum(weights)
            for t in range(w - 1, len(c))}


def naive_k(h, l, c, n):
    out = {}
    for t in range(n - 1, len(c)):
        hh, ll = max(h[t - n + 1:t + 1]), min(l[t - n + 1:t + 1])
        out[t] = 100.0 * (c[t] - ll) / (hh - ll)
    return out


def naive_lw(h, l, c, n):
    out = {}
    for t in range(n - 1, len(c)):
        hh, ll = max(h[t - n + 1:t + 1]), min(l[t - n + 1:t + 1])
        out[t] = -100.0 * (hh - c[t]) / (hh - ll)
    return out


def naive_rsi(c, n):
    out = {}
    for t in range(n, len(c)):
        ups = [max(c[i] - c[i - 1], 0.0) for i in range(t - n + 1, t + 1)]
        downs = [max(c[i - 1] - c[i], 0.0) for i in range(t - n + 1, t + 1)]
        up, down = sum(ups) / n, sum(downs) / n
        out[t] = 100.0 if down == 0 else 100.0 - 100.0 / (1.0 + up / down)
    return out


def naive_ema(x, k):
    alpha = 2.0 / (k + 1.0)
    out = [x[0]]
    for value in x[1:]:
        out.append(alpha * value + (1.0 - alpha) * out[-1])
    return out


def assert_matches(actual, expected: dict):
    for t, value in expected.items():
        assert abs(actual[t] - value) < TOL, (t, actual[t], value)


# ---------- Oracle suite on a 1,000-bar walk ----------
def test_sma_and_wma_match_oracle(walk_1000):
    c = walk_1000.closes.tolist()
    assert_matches(sma(c, 14), naive_sma(c, 14))
    assert_matches(wma(c, 14), naive_wma(c, 14))


def test_momentum_matches_oracle(walk_1000):
    c = walk_1000.closes.tolist()
    assert_matches(momentum(c, 10), {t: c[t] - c[t - 10] for t in range(10, len(c))})


def test_stochastics_match_oracle(walk_1000):
    h, l, c = walk_1000.highs.tolist(), walk_1000.lows.tolist(), walk_1000.closes.tolist()
    k_expected = naive_k(h, l, c, 10)
    k = stoch_k(h, l, c, 10)
    assert_matches(k, k_expected)
    assert_matches(williams_r(h, l, c, 10), naive_lw(h, l, c, 10))

    d_expected = {t: sum(k_expected[s] for s in range(t - 9, t + 1)) / 10 for t in range(18, len(c))}
    assert_matches(stoch_d(k, 10), d_expected)


def test_rsi_matches_oracle(walk_1000):
    c = walk_1000.closes.tolist()
    assert_matches(rsi(c, 10), naive_rsi(c, 10))


def test_macd_matches_oracle(walk_1000):
    c = walk_1000.closes.tolist()
    diff = [a - b for a, b in zip(naive_ema(c, 12), naive_ema(c, 26))]
    expected = naive_ema(diff, 10)
    assert_matches(macd(c), dict(enumerate(expected)))


def test_ad_matches_oracle(walk_1000):
    h, l, c = walk_1000.highs.tolist(), walk_1000.lows.tolist(), walk_1000.closes.tolist()
    expected = {t: (h[t] - c[t - 1]) / (h[t] - l[t]) for t in range(1, len(c))}
    assert_matches(ad_oscillator(h, l, c), expected)


def test_compute_features_fast_and_finite(walk_1000):
    started = time.perf_counter()
    matrix = compute_features(walk_1000)
    assert time.perf_counter() - started < 1.0
    assert matrix.columns == COLUMNS
    assert len(matrix) == 1000 - IndicatorConfig().first_row()
    assert np.all(np.isfinite(matrix.values))


def test_williams_mirrors_stochastic(walk_1000):
    matrix = compute_features(walk_1000)
    k, lw = matrix.column("k"), matrix.column("lw")
    assert np.mean(lw) - np.mean(k) == pytest.approx(-100.0, abs=TOL)
    assert np.std(lw) == pytest.approx(np.std(k), abs=TOL)


def test_indicators_are_causal(walk_1000):
    full = compute_features(walk_1000)
    prefix = make_series(walk_1000.closes[:600], walk_1000.highs[:600], walk_1000.lows[:600])
    head = compute_features(prefix)
    assert np.allclose(full.values[:len(head)], head.values, atol=TOL, rtol=0)


# ---------- Small hand cases ----------
def test_sma_hand_values():
    assert sma([1, 2, 3, 4], 2)[1:].tolist() == [1.5, 2.5, 3.5]
    assert np.isnan(sma([1, 2, 3, 4], 2)[0])


def test_wma_newest_weighs_most():
    # (1*1 + 2*2 + 3*3) / 6
    assert wma([1, 2, 3], 3)[2] == pytest.approx(14 / 6)


def test_ema_seeded_with_first_value():
    values = ema([10.0, 10.0, 20.0], 3)
    assert values.tolist() == [10.0, 10.0, 15.0]


def test_flat_window_indicators():
    closes = np.full(40, 50.0)
    series = make_series(closes, highs=closes, lows=closes)
    matrix = compute_features(series)
    assert np.all(matrix.column("k") == 50.0)
    assert np.all(matrix.column("lw") == -50.0)
    assert np.all(matrix.column("rsi") == 50.0)
    assert np.all(matrix.column("ad") == 0.0)
    assert np.all(matrix.column("mom") == 0.0)
    assert np.allclose(matrix.column("macd"), 0.0)


def test_rsi_one_sided_moves():
    rising = np.arange(1.0, 20.0)
    assert rsi(rising, 10)[-1] == 100.0
    assert rsi(rising[::-1], 10)[-1] == 0.0


def test_stochastic_clips_close_outside_range():
    closes = np.array([10.0, 11.0, 12.0])
    k = stoch_k(closes - 0.5, closes - 1.0, closes, 2)
    assert k[-1] == 100.0


# ---------- Warmup and validation ----------
def test_warmup_rows_for_default_config(series_100):
    assert IndicatorConfig().first_row() == 25
    assert len(compute_features(series_100)) == 75


def test_first_kept_row_completes_the_long_window():
    series = make_series(np.linspace(10, 20, 26))
    matrix = compute_features(series)
    assert len(matrix) == 1
    assert matrix.dates[0] == series.dates[25]


def test_warmup_follows_overrides():
    cfg = IndicatorConfig(ma_window=30, ema_long=40)
    assert cfg.first_row() == 39


def test_short_series_rejected():
    series = make_series(np.linspace(10, 20, 25))
    with pytest.raises(ValueError, match="warmup"):
        compute_features(series)


@pytest.mark.parametrize("kwargs", [
    {"n": 0},
    {"ma_window": -3},
    {"ema_short": 26, "ema_long": 12},
])
def test_indicator_config_rejects(kwargs):
    with pytest.raises(ValueError):
        IndicatorConfig(**kwargs)


def test_window_longer_than_series():
    with pytest.raises(ValueError):
        sma([1.0, 2.0], 5)


# ---------- Exports ----------
def test_describe_features(walk_1000):
    summary = describe_features(compute_features(walk_1000))
    assert list(summary.columns) == ["minimum", "maximum", "mean", "std"]
    assert summary.loc["K%", "minimum"] >= 0.0
    assert summary.loc["LW", "maximum"] <= 0.0


def test_write_features(tmp_path, series_100):
    matrix = compute_features(series_100)
    path = write_features(matrix, tmp_path / "features.csv")
    lines = path.read_text().splitlines()
    assert lines[0] == "date," + ",".join(COLUMNS)
    assert len(lines) == 76
