from rich.table import Table

from direction_lab.data.utils import fmt_metric
from direction_lab.experiment.families import family_label
from . import common

TOP_ROWS = 3


def _params(params: dict) -> str:
    return ", ".join(f"{k}={v}" for k, v in sorted(params.items())) or "[muted]-[/muted]"


def print_describe_table(describe, title: str = "Descriptive statistics") -> None:
    table = Table(title=f"[title]{title}[/title]")
    table.add_column("Indicator", justify="left")
    for column in ("Min", "Max", "Mean", "Std"):
        table.add_column(column, justify="right")
    for name, row in describe.iterrows():
        table.add_row(name, *(fmt_metric(row[k], 3) for k in ("minimum", "maximum", "mean", "std")))
    common.console.print(table)


def print_leaderboard(board: dict) -> None:
    table = Table(title=f"[title]{family_label(board['family'])} ({board['mode']})[/title]")
    table.add_column("Rank", justify="right")
    table.add_column("Parameters", justify="left")
    table.add_column("Accuracy", justify="right")
    table.add_column("MAE", justify="right")
    table.add_column("RMSE", justify="right")
    table.add_column("RAE", justify="right")

    for row in board["rows"][:TOP_ROWS]:
        if row["error"]:
            table.add_row(str(row["rank"]), _params(row["params"]), f"[error]{row['error']}[/error]", "", "", "")
            continue
        table.add_row(
            str(row["rank"]),
            _params(row["params"]),
            *(fmt_metric(row[k]) for k in ("accuracy", "mae", "rmse", "rae")),
        )
    common.console.print(table)
    note = f"{board['combinations']} combinations, baseline {fmt_metric(board['majority_baseline'])}"
    if board["truncated"]:
        note += ", truncated grid"
    common.console.print(note, style="muted")


def print_comparison(block: dict) -> None:
    table = Table(title=f"[title]Best models ({block['mode']})[/title]")
    table.add_column("Model", justify="left")
    table.add_column("TP Rate", justify="right")
    table.add_column("FP Rate", justify="right")
    table.add_column("ROC", justify="right")
    table.add_column("F", justify="right")
    table.add_column("Rank", justify="right")

    for row in block["rows"]:
        label = f"[accent]{row['label']}[/accent]" if row["rank"] == 1 else row["label"]
        table.add_row(label, *(fmt_metric(row[k], 3) for k in ("tp_rate", "fp_rate", "auc", "f_weighted")), str(row["rank"]))
    common.console.print(table)


def print_f_comparison(rows: list[dict]) -> None:
    table = Table(title="[title]F statistics, continuous vs discrete[/title]")
    table.add_column("Model", justify="left")
    table.add_column("Continuous", justify="right")
    table.add_column("Discrete", justify="right")
    table.add_column("Difference", justify="right")
    for row in rows:
        style = "success" if row["difference"] > 0 else "warning"
        table.add_row(
            row["label"],
            fmt_metric(row["continuous"], 3),
            fmt_metric(row["discrete"], 3),
            f"[{style}]{row['difference']:+.3f}[/{style}]",
        )
    common.console.print(table)


def print_validation(block: dict) -> None:
    kind = "paired" if block["paired"] else "independent"
    table = Table(title=f"[title]t-test vs benchmark ({block['mode']}, {kind})[/title]")
    table.add_column("Model", justify="left")
    table.add_column("Mean", justify="right")
    table.add_column("Std", justify="right")
    table.add_column("t", justify="right")
    table.add_column("df", justify="right")
    table.add_column("Sig.", justify="center")

    for row in block["rows"]:
        test = row["t_test"]
        if test is None:
            t_cell, df_cell, sig = "[muted]-[/muted]", "", ""
        elif test["degenerate"]:
            t_cell, df_cell, sig = "[warning]degenerate[/warning]", str(test["df"]), ""
        else:
            t_cell, df_cell = f"{test['t']:.3f}", str(test["df"])
            sig = "[danger]0.01[/danger]" if test["significant_01"] else "[highlight]0.05[/highlight]" if test["significant_05"] else ""
        table.add_row(row["label"], fmt_metric(row["mean"], 3), fmt_metric(row["std"], 3), t_cell, df_cell, sig)
    common.console.print(table)
    common.console.print(
        f"{block['fold_count']} folds of {block['fold_size']} rows ({block['first_date']} to {block['last_date']})",
        style="muted",
    )


def print_report(document: dict) -> None:
    for board in document["leaderboards"]:
        print_leaderboard(board)
    for block in document["comparison"]:
        print_comparison(block)
    if document.get("f_comparison"):
        print_f_comparison(document["f_comparison"])
    if document.get("validation"):
        for block in document["validation"]:
            print_validation(block)
    else:
        note = document.get("validation_note") or "no validation series was supplied"
        common.console.print(f"Validation omitted: {note}", style="warning")
