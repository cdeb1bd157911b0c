from pathlib import Path
from typing import Optional

import typer

from direction_lab.data.discretizer import discretize
from direction_lab.data.indicators import compute_features, describe_features, write_features
from direction_lab.data.market_data import aligned_closes
from . import common, render_report, require
from .config import resolve_config


def features(
    input: Optional[str] = typer.Option(None, "-i", "--input", help="OHLC CSV (date,open,high,low,close,volume) or 'synthetic'."),
    mode: Optional[str] = typer.Option(None, "-m", "--mode", help="continuous | discrete | both"),
    out: Optional[str] = typer.Option(None, "-o", "--out", help="Output directory (default: $DIRECTIONLAB_OUT or 'results')."),
    seed: Optional[int] = typer.Option(None, "--seed", help="Master seed, recorded with the outputs."),
    config: Optional[str] = typer.Option(None, "--config", help="JSON config file; flags override its values."),
    ma_window: Optional[int] = typer.Option(None, "--ma-window", help="Simple moving average window (default 14)."),
    wma_window: Optional[int] = typer.Option(None, "--wma-window", help="Weighted moving average window (default 14)."),
    n: Optional[int] = typer.Option(None, "--n", help="Look-back of Mom, K%, D%, RSI and LW (default 10)."),
    ema_short: Optional[int] = typer.Option(None, "--ema-short", help="Short EMA span of MACD (default 12)."),
    ema_long: Optional[int] = typer.Option(None, "--ema-long", help="Long EMA span of MACD (default 26)."),
    macd_signal: Optional[int] = typer.Option(None, "--macd-signal", help="EMA span applied to DIFF (default 10)."),
):
    """Compute the indicator matrix, and its trend signs in discrete/both mode."""
    try:
        cfg = resolve_config(
            config,
            indicator_flags=dict(
                ma_window=ma_window, wma_window=wma_window, n=n,
                ema_short=ema_short, ema_long=ema_long, macd_signal=macd_signal,
            ),
            input=input, mode=mode, out=out, seed=seed,
        )
    except ValueError as ve:
        common.input_error(ve)

    series = require.require_series(cfg.input, "input")
    try:
        matrix = compute_features(series, cfg.indicators)
        signs = None
        if cfg.mode != "continuous":
            signs = discretize(matrix, aligned_closes(series, matrix.dates))
    except ValueError as ve:
        common.input_error(ve)

    out_dir = Path(cfg.out)
    written = [write_features(matrix, out_dir / "features_continuous.csv")]
    if signs is not None:
        written.append(write_features(signs, out_dir / "features_discrete.csv", integer=True))

    warmup = len(series) - len(matrix)
    common.console.print(
        f"{len(series)} bars, {warmup} warmup rows dropped, {len(matrix)} feature rows", style="highlight"
    )
    render_report.print_describe_table(describe_features(matrix))
    for path in written:
        common.console.print(f"Wrote {path}", style="success")
