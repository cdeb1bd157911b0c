"""Report documents: a JSON record for machines and a markdown rendering for people.

The JSON carries no timestamps or paths that vary between runs, so the same
data, config and seed reproduce it byte for byte.
"""
import json
import logging
import math
from pathlib import Path

import numpy as np
import pandas as pd
import scipy

import direction_lab
from direction_lab.data.indicators import describe_features
from direction_lab.data.market_data import PriceSeries
from direction_lab.data.utils import fmt_metric, sha256_bytes
from .families import family_label
from .grids import FAMILIES
from .pipeline import ModeResult
from .validation import ValidationOutcome

logger = logging.getLogger(__name__)

REPORT_VERSION = 1
REPORT_JSON = "report.json"
REPORT_MD = "report.md"
TOP_ROWS = 3


# HELPERS
def _clean(value):
    """JSON-safe copy: NaN/inf become null, numpy scalars become Python numbers."""
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def versions() -> dict:
    return {
        "report": REPORT_VERSION,
        "direction_lab": direction_lab.__version__,
        "numpy": np.__version__,
        "pandas": pd.__version__,
        "scipy": scipy.__version__,
    }


def series_fingerprint(series: PriceSeries) -> dict:
    """Hash of the parsed series in canonical CSV form, with its span."""
    canonical = series.to_frame().to_csv(index=False, float_format="%.6f").encode("utf-8")
    return {
        "sha256": sha256_bytes(canonical),
        "bars": len(series),
        "first_date": series.dates[0].isoformat(),
        "last_date": series.dates[-1].isoformat(),
    }


def f_comparison(results: list[ModeResult]) -> list[dict]:
    """Weighted F of each family's best model, continuous next to discrete."""
    by_mode = {r.mode: {row.family: row.f_weighted for row in r.comparison} for r in results}
    if not {"continuous", "discrete"} <= by_mode.keys():
        return []
    rows = []
    for family in FAMILIES:
        cont = by_mode["continuous"].get(family)
        disc = by_mode["discrete"].get(family)
        if cont is None or disc is None:
            continue
        rows.append({
            "family": family,
            "label": family_label(family),
            "continuous": cont,
            "discrete": disc,
            "difference": disc - cont,
        })
    return rows


# Document
def build_report(
    config: dict,
    main_series: PriceSeries,
    results: list[ModeResult],
    validation: dict[str, ValidationOutcome] | None = None,
    validation_note: str | None = None,
    artifacts: dict[str, str] | None = None,
    validation_series: PriceSeries | None = None,
) -> dict:
    if not results:
        raise ValueError("a report needs at least one leaderboard")

    fingerprint = {"main": series_fingerprint(main_series)}
    if validation_series is not None:
        fingerprint["validation"] = series_fingerprint(validation_series)

    describe = describe_features(results[0].data.features)
    document = {
        "config": config,
        "data_fingerprint": fingerprint,
        "seeds": {
            "master": config.get("seed"),
            "best": {r.mode: r.best_seeds for r in results},
        },
        "descriptive_statistics": [
            {"indicator": name, **{k: float(v) for k, v in row.items()}}
            for name, row in describe.iterrows()
        ],
        "leaderboards": [
            r.leaderboards[family].to_dict()
            for r in results for family in FAMILIES if family in r.leaderboards
        ],
        "comparison": [
            {"mode": r.mode, "rows": [row.to_dict() for row in r.comparison]}
            for r in results
        ],
        "f_comparison": f_comparison(results),
        "validation": None if not validation else [validation[m].to_dict() for m in sorted(validation)],
        "validation_note": validation_note,
        "artifacts": dict(sorted((artifacts or {}).items())),
        "versions": versions(),
    }
    return _clean(document)


def dumps_report(document: dict) -> str:
    return json.dumps(document, sort_keys=True, indent=2, allow_nan=False) + "\n"


# Markdown
def _table(headers: list[str], rows: list[list[str]]) -> list[str]:
    lines = ["| " + " | ".join(headers) + " |", "|" + "|".join("---" for _ in headers) + "|"]
    lines += ["| " + " | ".join(row) + " |" for row in rows]
    return lines + [""]


def _params(params: dict) -> str:
    return ", ".join(f"{k}={v}" for k, v in sorted(params.items())) or "-"


def render_markdown(document: dict) -> str:
    config = document.get("config", {})
    lines = ["# Direction forecasting report", ""]
    lines += [
        f"- input: `{config.get('input')}`",
        f"- mode: {config.get('mode')}",
        f"- grid: {config.get('grid')}" + (" (full)" if config.get("full") else ""),
        f"- train fraction: {config.get('train_frac')}",
        f"- master seed: {config.get('seed')}",
        f"- data sha256: `{document['data_fingerprint']['main']['sha256']}`",
        "",
    ]

    stats = document.get("descriptive_statistics") or []
    if stats:
        lines += ["## Descriptive statistics", ""]
        lines += _table(
            ["Indicator", "Min", "Max", "Mean", "Std"],
            [[s["indicator"], *(fmt_metric(s[k], 3) for k in ("minimum", "maximum", "mean", "std"))] for s in stats],
        )

    for board in document["leaderboards"]:
        title = f"## {family_label(board['family'])} ({board['mode']}) top {TOP_ROWS}"
        lines += [title, ""]
        if board.get("truncated"):
            lines += ["_Grid truncated: neurons 5..20, epochs {250, 500}; pass --full for the whole grid._", ""]
        lines += _table(
            ["Rank", "Parameters", "Accuracy", "MAE", "RMSE", "RAE"],
            [
                [str(r["rank"]), _params(r["params"]), *(fmt_metric(r[k]) for k in ("accuracy", "mae", "rmse", "rae"))]
                for r in board["rows"][:TOP_ROWS]
            ],
        )
        failures = f", {board['failures']} failed" if board["failures"] else ""
        lines += [
            f"{board['combinations']} combinations{failures}; "
            f"majority-class baseline accuracy {fmt_metric(board['majority_baseline'])}",
            "",
        ]

    for block in document["comparison"]:
        lines += [f"## Best models ({block['mode']})", ""]
        lines += _table(
            ["Model", "TP Rate", "FP Rate", "ROC", "F", "Rank"],
            [
                [r["label"], *(fmt_metric(r[k], 3) for k in ("tp_rate", "fp_rate", "auc", "f_weighted")), str(r["rank"])]
                for r in block["rows"]
            ],
        )

    if document.get("f_comparison"):
        lines += ["## F statistics, continuous vs discrete", ""]
        lines += _table(
            ["Model", "Continuous", "Discrete", "Difference"],
            [
                [r["label"], fmt_metric(r["continuous"], 3), fmt_metric(r["discrete"], 3), f"{r['difference']:+.3f}"]
                for r in document["f_comparison"]
            ],
        )

    validation = document.get("validation")
    if validation:
        for block in validation:
            kind = "paired" if block["paired"] else "independent"
            lines += [f"## Validation t-tests ({block['mode']}, {kind})", ""]
            lines += [
                f"{block['fold_count']} folds of {block['fold_size']} rows, "
                f"{block['first_date']} to {block['last_date']}",
                "",
            ]
            lines += _table(["Model", "Mean", "Std", "t", "df"], [_validation_row(row) for row in block["rows"]])
        lines += ["`*` significant at 0.05, `**` at 0.01. Positive t favours the model over LR.", ""]
    else:
        note = document.get("validation_note") or "no validation series was supplied"
        lines += ["## Validation t-tests", "", f"Omitted: {note}.", ""]

    return "\n".join(lines)


def _validation_row(row: dict) -> list[str]:
    test = row["t_test"]
    if test is None:
        t_cell, df_cell = "-", "-"
    elif test["degenerate"]:
        t_cell, df_cell = "degenerate", str(test["df"])
    else:
        marks = "**" if test["significant_01"] else "*" if test["significant_05"] else ""
        t_cell, df_cell = f"{test['t']:.3f}{marks}", str(test["df"])
    return [row["label"], fmt_metric(row["mean"], 3), fmt_metric(row["std"], 3), t_cell, df_cell]


# Output
def emit_report(out_dir: str | Path, document: dict) -> tuple[Path, Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    json_path = out_dir / REPORT_JSON
    md_path = out_dir / REPORT_MD
    json_path.write_text(dumps_report(document), encoding="utf-8")
    md_path.write_text(render_markdown(document), encoding="utf-8")
    logger.info("Report written to %s", json_path)
    return json_path, md_path


def load_report(out_dir: str | Path) -> dict:
    path = Path(out_dir) / REPORT_JSON
    if not path.is_file():
        raise ValueError(f"report not found: {path}")
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ValueError(f"{path}: invalid report JSON ({e.msg})") from None
