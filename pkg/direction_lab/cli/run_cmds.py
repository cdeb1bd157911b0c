import logging
from pathlib import Path
from typing import Optional

import numpy as np
import typer

from direction_lab.experiment import artifacts, report
from direction_lab.experiment.grids import resolve_grids
from direction_lab.experiment.pipeline import prepare_dataset, prepare_split, run_mode
from direction_lab.experiment.validation import FOLD_COUNT, FOLD_SIZE, run_validation
from . import common, render_report, require
from .config import resolve_config

logger = logging.getLogger(__name__)

RUN_FAILURES = (ValueError, ArithmeticError, np.linalg.LinAlgError, OSError)


def run(
    input: Optional[str] = typer.Option(None, "-i", "--input", help="Main OHLC CSV or 'synthetic'."),
    validation: Optional[str] = typer.Option(None, "--validation", help="Hold-out OHLC CSV (or 'synthetic') for the 10x10 t-tests."),
    mode: Optional[str] = typer.Option(None, "-m", "--mode", help="continuous | discrete | both (default both)."),
    grid: Optional[str] = typer.Option(None, "-g", "--grid", help="Preset (paper-full | smoke) or a JSON grid file."),
    train_frac: Optional[float] = typer.Option(None, "--train-frac", help="Chronological training share (default 0.75)."),
    seed: Optional[int] = typer.Option(None, "--seed", help="Master seed (default 0)."),
    out: Optional[str] = typer.Option(None, "-o", "--out", help="Output directory (default: $DIRECTIONLAB_OUT or 'results')."),
    jobs: Optional[int] = typer.Option(None, "-j", "--jobs", help="Worker processes for the grid (default 1)."),
    full: bool = typer.Option(False, "--full", help="Use the untruncated paper-full ANN grid."),
    independent: bool = typer.Option(False, "--independent", help="Two-sample t-tests in validation instead of paired ones."),
    config: Optional[str] = typer.Option(None, "--config", help="JSON config file; flags override its values."),
    ma_window: Optional[int] = typer.Option(None, "--ma-window", help="Simple moving average window (default 14)."),
    wma_window: Optional[int] = typer.Option(None, "--wma-window", help="Weighted moving average window (default 14)."),
    n: Optional[int] = typer.Option(None, "--n", help="Look-back of Mom, K%, D%, RSI and LW (default 10)."),
    ema_short: Optional[int] = typer.Option(None, "--ema-short", help="Short EMA span of MACD (default 12)."),
    ema_long: Optional[int] = typer.Option(None, "--ema-long", help="Long EMA span of MACD (default 26)."),
    macd_signal: Optional[int] = typer.Option(None, "--macd-signal", help="EMA span applied to DIFF (default 10)."),
):
    """Grid-search every model family, validate the winners and write the report."""
    try:
        cfg = resolve_config(
            config,
            indicator_flags=dict(
                ma_window=ma_window, wma_window=wma_window, n=n,
                ema_short=ema_short, ema_long=ema_long, macd_signal=macd_signal,
            ),
            input=input, validation=validation, mode=mode, grid=grid, train_frac=train_frac,
            seed=seed, out=out, jobs=jobs, full=full or None, independent=independent or None,
        )
    except ValueError as ve:
        common.input_error(ve)

    out_dir = Path(cfg.out)
    main_series = require.require_series(cfg.input, "input")
    validation_series = require.require_series(cfg.validation, "validation") if cfg.validation else None

    # input problems surface before any training
    stage = "prepare"
    try:
        grids = {m: resolve_grids(cfg.grid, m, cfg.full) for m in cfg.modes}
        prepared = [prepare_split(main_series, cfg.indicators, m, cfg.train_frac) for m in cfg.modes]
        if validation_series is not None:
            for m in cfg.modes:
                usable = len(prepare_dataset(validation_series, cfg.indicators, m)[0])
                if usable < FOLD_COUNT * FOLD_SIZE:
                    raise ValueError(
                        f"validation series yields {usable} usable {m} rows; {FOLD_COUNT * FOLD_SIZE} required"
                    )
    except ValueError as ve:
        common.write_run_status(out_dir, "failed", stage=stage, error=str(ve))
        common.input_error(ve)

    common.write_run_status(out_dir, "running", stage="grid")
    try:
        stage = "grid"
        results = [run_mode(data, grids[data.mode], cfg.seed, cfg.jobs) for data in prepared]

        stage = "artifacts"
        hashes = {}
        for result in results:
            hashes.update(artifacts.save_artifacts(out_dir, result, cfg.indicators))

        stage = "validation"
        outcomes = None
        note = None
        if validation_series is None:
            note = "no validation series was supplied"
        else:
            outcomes = {
                r.mode: run_validation(
                    r.models, validation_series, r.mode, cfg.indicators, r.data.normalizer,
                    paired=not cfg.independent,
                )
                for r in results
            }

        stage = "report"
        document = report.build_report(
            cfg.echo(), main_series, results,
            validation=outcomes, validation_note=note,
            artifacts=hashes, validation_series=validation_series,
        )
        json_path, md_path = report.emit_report(out_dir, document)
    except RUN_FAILURES as e:
        logger.debug("run failed during %s", stage, exc_info=True)
        common.write_run_status(out_dir, "failed", stage=stage, error=str(e))
        common.experiment_error(f"{stage}: {e}")
    except Exception as e:
        logger.error("unexpected failure during %s", stage, exc_info=True)
        common.write_run_status(out_dir, "failed", stage=stage, error=f"{type(e).__name__}: {e}")
        common.experiment_error(f"{stage}: {type(e).__name__}: {e}")

    common.write_run_status(out_dir, "complete")
    render_report.print_report(document)
    common.console.print(f"Wrote {json_path} and {md_path}", style="success")
