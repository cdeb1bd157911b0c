import typer

from direction_lab import __version__
from .common import console, setup_logging

app = typer.Typer(
    help=(
        "Bitcoin direction forecasting lab: technical indicators, five classifier families, "
        "grid search and t-test validation.\n\n"
        "Use '--help' after any command for more details.\n\n"
        "Example: directionlab run --input synthetic --validation synthetic --grid smoke"
    ),
    no_args_is_help=True,
)


@app.callback(invoke_without_command=True)
def main(
    ctx: typer.Context,
    version: bool = typer.Option(
        None, "--version", "-v",
        help="Show the CLI version and exit.",
        is_eager=True,
    ),
    verbose: bool = typer.Option(False, "--verbose", help="Log progress (INFO) to stderr."),
    debug: bool = typer.Option(False, "--debug", help="Log details (DEBUG) to stderr."),
):
    if version:
        console.print(f"direction-lab CLI version [highlight]{__version__}[/highlight]")
        raise typer.Exit()
    setup_logging(verbose=verbose, debug=debug)


from .features_cmds import features
from .report_cmds import report
from .run_cmds import run
from .synth_cmds import synth
from .validate_cmds import validate

app.command("features", help="Compute indicator features (and trend signs) from an OHLC CSV.")(features)
app.command("run", help="Run the full experiment and write the report.")(run)
app.command("validate", help="Run the 10x10 validation t-tests on saved models.")(validate)
app.command("report", help="Re-render the human report from report.json.")(report)
app.command("synth", help="Write a synthetic OHLC series.")(synth)
