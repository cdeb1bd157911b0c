import json

import pytest

from direction_lab.data.indicators import IndicatorConfig
from direction_lab.experiment.artifacts import load_models, load_pipeline, models_dir, save_artifacts
from direction_lab.experiment.report import (
    build_report, dumps_report, emit_report, f_comparison, load_report, render_markdown,
)
from direction_lab.experiment.validation import run_validation

CONFIG = {"input": "synthetic", "mode": "both", "grid": "smoke", "seed": 0, "train_frac": 0.75}


@pytest.fixture(scope="module")
def validation(bundle, mode_results):
    return {
        r.mode: run_validation(r.models, bundle[1], r.mode, IndicatorConfig(), r.data.normalizer)
        for r in mode_results
    }


# ---------- Document ----------
def test_report_sections(bundle, mode_results, validation):
    doc = build_report(CONFIG, bundle[0], mode_results, validation, validation_series=bundle[1])
    assert len(doc["leaderboards"]) == 10
    assert [block["mode"] for block in doc["comparison"]] == ["continuous", "discrete"]
    assert len(doc["descriptive_statistics"]) == 9
    assert set(doc["data_fingerprint"]) == {"main", "validation"}
    assert [v["mode"] for v in doc["validation"]] == ["continuous", "discrete"]


def test_report_json_is_reproducible(bundle, mode_results):
    first = dumps_report(build_report(CONFIG, bundle[0], mode_results))
    second = dumps_report(build_report(CONFIG, bundle[0], mode_results))
    assert first == second
    assert "NaN" not in first


def test_f_comparison(mode_results):
    rows = f_comparison(mode_results)
    assert [r["family"] for r in rows] == ["ann", "svm", "nb", "rf", "lr"]
    for row in rows:
        assert row["difference"] == pytest.approx(row["discrete"] - row["continuous"])


def test_f_comparison_needs_both_modes(mode_results):
    assert f_comparison(mode_results[:1]) == []


def test_needs_results(bundle):
    with pytest.raises(ValueError):
        build_report(CONFIG, bundle[0], [])


# ---------- Markdown ----------
def test_markdown_without_validation(bundle, mode_results):
    doc = build_report(CONFIG, bundle[0], mode_results, validation_note="no validation series was supplied")
    text = render_markdown(doc)
    assert "Omitted: no validation series was supplied." in text
    assert "LR (Benchmark)" in text
    assert "F statistics, continuous vs discrete" in text


def test_markdown_with_validation(bundle, mode_results, validation):
    text = render_markdown(build_report(CONFIG, bundle[0], mode_results, validation))
    assert "Validation t-tests (continuous, paired)" in text
    assert "10 folds of 10 rows" in text


# ---------- Files ----------
def test_emit_and_load(tmp_path, bundle, mode_results):
    doc = build_report(CONFIG, bundle[0], mode_results)
    json_path, md_path = emit_report(tmp_path, doc)
    assert load_report(tmp_path) == json.loads(json_path.read_text())
    assert md_path.read_text().startswith("# Direction forecasting report")


def test_load_missing_report(tmp_path):
    with pytest.raises(ValueError, match="report not found"):
        load_report(tmp_path)


# ---------- Artifacts ----------
def test_artifacts_round_trip(tmp_path, mode_results):
    result = mode_results[0]
    hashes = save_artifacts(tmp_path, result, IndicatorConfig())
    assert "models/continuous/lr.json" in hashes
    assert "models/continuous/pipeline.json" in hashes
    assert all(len(h) == 64 for h in hashes.values())

    record = load_pipeline(tmp_path, "continuous")
    assert record.best_params == result.best_params
    assert record.normalizer is not None
    models = load_models(tmp_path, "continuous")
    X = result.data.split.test.features
    assert (models["svm"].predict_proba(X) == result.models["svm"].predict_proba(X)).all()


def test_missing_benchmark_artifact(tmp_path, mode_results):
    save_artifacts(tmp_path, mode_results[1], IndicatorConfig())
    (models_dir(tmp_path, "discrete") / "lr.json").unlink()
    with pytest.raises(ValueError, match="LR"):
        load_models(tmp_path, "discrete")


def test_missing_pipeline(tmp_path):
    with pytest.raises(ValueError, match="missing run artifacts"):
        load_pipeline(tmp_path, "continuous")
