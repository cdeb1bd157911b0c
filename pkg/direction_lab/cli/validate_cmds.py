import json
from pathlib import Path
from typing import Optional

import typer

from direction_lab.experiment import artifacts
from direction_lab.experiment.validation import run_validation
from . import common, render_report, require
from .config import resolve_config

VALIDATION_JSON = "validation.json"


def validate(
    validation: Optional[str] = typer.Option(None, "--validation", help="Hold-out OHLC CSV or 'synthetic'."),
    mode: Optional[str] = typer.Option(None, "-m", "--mode", help="continuous | discrete | both (default both)."),
    seed: Optional[int] = typer.Option(None, "--seed", help="Master seed, recorded with the results."),
    out: Optional[str] = typer.Option(None, "-o", "--out", help="Directory holding the run artifacts."),
    independent: bool = typer.Option(False, "--independent", help="Two-sample t-test instead of the paired test."),
    config: Optional[str] = typer.Option(None, "--config", help="JSON config file; flags override its values."),
):
    """Run the 10 folds x 10 rows t-test protocol against saved run artifacts."""
    try:
        cfg = resolve_config(
            config, validation=validation, mode=mode, seed=seed, out=out, independent=independent or None,
        )
    except ValueError as ve:
        common.input_error(ve)

    series = require.require_series(cfg.validation, "validation")
    outcomes = []
    for m in cfg.modes:
        try:
            pipeline = artifacts.load_pipeline(cfg.out, m)
            models = artifacts.load_models(cfg.out, m)
            outcome = run_validation(
                models, series, m, pipeline.indicators, pipeline.normalizer, paired=not cfg.independent,
            )
        except ValueError as ve:
            common.input_error(ve)
        outcomes.append(outcome.to_dict())
        render_report.print_validation(outcomes[-1])

    path = Path(cfg.out) / VALIDATION_JSON
    document = {"seed": cfg.seed, "validation": outcomes}
    path.write_text(json.dumps(document, sort_keys=True, indent=2, allow_nan=False) + "\n", encoding="utf-8")
    common.console.print(f"Wrote {path}", style="success")
