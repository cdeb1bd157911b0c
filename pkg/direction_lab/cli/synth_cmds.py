import typer

from direction_lab.data.market_data import write_csv
from direction_lab.data.synthetic import BUNDLE_MAIN_BARS, BUNDLE_SEED, generate_series
from . import common


def synth(
    out_file: str = typer.Option(..., "--out-file", help="Where to write the OHLC CSV."),
    bars: int = typer.Option(BUNDLE_MAIN_BARS, "--bars", min=2, help="Number of daily bars."),
    seed: int = typer.Option(BUNDLE_SEED, "--seed", help="Generator seed."),
):
    """Write a seeded synthetic OHLC series with alternating trend regimes."""
    try:
        series = generate_series(bars, seed)
    except ValueError as ve:
        common.input_error(ve)
    path = write_csv(series, out_file)
    common.console.print(
        f"Wrote {len(series)} bars ({series.dates[0]} to {series.dates[-1]}) to {path}", style="success"
    )
