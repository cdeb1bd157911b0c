from pathlib import Path
from typing import Optional

import typer

from direction_lab.experiment.report import REPORT_MD, load_report, render_markdown
from . import common, render_report
from .config import OUT_DIR


def report(
    out: str = typer.Option(OUT_DIR, "-o", "--out", help="Directory holding report.json."),
    seed: Optional[int] = typer.Option(None, "--seed", help="Refuse a report produced with a different master seed."),
):
    """Re-render report.md from report.json and print its tables."""
    try:
        document = load_report(out)
    except ValueError as ve:
        common.input_error(ve)

    recorded = document.get("config", {}).get("seed")
    if seed is not None and seed != recorded:
        common.input_error(f"report in {out} was produced with seed {recorded}, not {seed}")

    path = Path(out) / REPORT_MD
    path.write_text(render_markdown(document), encoding="utf-8")
    render_report.print_report(document)
    common.console.print(f"Wrote {path}", style="success")
