import json
import logging
from pathlib import Path

import typer
from rich.console import Console
from rich.logging import RichHandler
from rich.theme import Theme

THEME = Theme({
    "success": "green",
    "warning": "yellow",
    "error": "red",
    "danger": "bold red",
    "accent": "magenta",
    "highlight": "cyan",
    "muted": "dim",
    "title": "bold",
})

console = Console(highlight=False, theme=THEME)

EXIT_FAILURE = 1
EXIT_USAGE = 2

RUN_STATUS = "run_status.json"


def setup_logging(verbose: bool = False, debug: bool = False) -> None:
    level = logging.DEBUG if debug else logging.INFO if verbose else logging.WARNING
    logger = logging.getLogger("direction_lab")
    logger.handlers.clear()
    handler = RichHandler(console=Console(stderr=True, theme=THEME), show_path=debug, markup=False)
    handler.setFormatter(logging.Formatter("%(message)s"))
    logger.addHandler(handler)
    logger.setLevel(level)
    logger.propagate = False


def input_error(e: Exception | str) -> None:
    """Bad input or usage: exit 2."""
    console.print(f"{e}", style="error")
    raise typer.Exit(code=EXIT_USAGE)


def experiment_error(e: Exception | str) -> None:
    console.print(f"Experiment failed: {e}", style="danger")
    raise typer.Exit(code=EXIT_FAILURE)


def write_run_status(out_dir: str | Path, status: str, **details) -> Path:
    path = Path(out_dir) / RUN_STATUS
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps({"status": status, **details}, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    return path
