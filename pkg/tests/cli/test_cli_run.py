import json

import pytest

from direction_lab.cli.app import app
from direction_lab.data.synthetic import generate_series
from direction_lab.data.utils import sha256_file
from direction_lab.experiment import artifacts
from direction_lab.experiment.grids import FAMILIES
from tests.helpers import write_ohlc

QUICK_GRID = {
    "ann": {"hidden_neurons": [3], "epochs": [5], "momentum": [0.2], "learning_rate": [0.3]},
    "svm": {"kernel": "polynomial", "degree": [1], "C": [1.0]},
    "rf": {"mtry": [3], "n_trees": [5]},
}


@pytest.fixture
def quick_grid(tmp_path):
    path = tmp_path / "grid.json"
    path.write_text(json.dumps(QUICK_GRID))
    return str(path)


def read_report(out_dir) -> dict:
    return json.loads((out_dir / "report.json").read_text())


# Smoke run
def test_smoke_run_outputs(smoke_run):
    report = read_report(smoke_run)
    boards = {(b["family"], b["mode"]) for b in report["leaderboards"]}
    assert boards == {(f, m) for f in FAMILIES for m in ("continuous", "discrete")}
    assert [v["mode"] for v in report["validation"]] == ["continuous", "discrete"]
    assert report["validation_note"] is None
    assert (smoke_run / "report.md").exists()
    assert json.loads((smoke_run / "run_status.json").read_text())["status"] == "complete"
    for mode in ("continuous", "discrete"):
        for family in FAMILIES:
            assert (smoke_run / "models" / mode / f"{family}.json").exists()


def test_smoke_run_comparison(smoke_run):
    report = read_report(smoke_run)
    for block in report["comparison"]:
        labels = [row["label"] for row in block["rows"]]
        assert "LR (Benchmark)" in labels
        assert [row["rank"] for row in block["rows"]] == [1, 2, 3, 4, 5]


def test_every_family_beats_majority_baseline(smoke_run):
    boards = read_report(smoke_run)["leaderboards"]
    assert len(boards) == 2 * len(FAMILIES)
    for board in boards:
        assert board["majority_baseline"] <= 0.52
        best = board["rows"][0]
        assert best["accuracy"] > board["majority_baseline"], (board["family"], board["mode"])


def test_report_hashes_match_files(smoke_run):
    for relative, digest in read_report(smoke_run)["artifacts"].items():
        assert sha256_file(smoke_run / relative) == digest


# Determinism
def test_same_seed_same_report(runner, tmp_path, quick_grid):
    outputs = []
    for name in ("first", "second"):
        out_dir = tmp_path / name
        result = runner.invoke(app, [
            "run", "--input", "synthetic", "--mode", "discrete", "--grid", quick_grid,
            "--seed", "5", "--out", str(out_dir),
        ])
        assert result.exit_code == 0, result.stdout
        outputs.append((out_dir / "report.json").read_bytes())
    assert outputs[0] == outputs[1]


def test_run_without_validation(runner, tmp_path, quick_grid):
    result = runner.invoke(app, [
        "run", "--input", "synthetic", "--mode", "continuous", "--grid", quick_grid, "--out", str(tmp_path),
    ])
    assert result.exit_code == 0, result.stdout
    report = read_report(tmp_path)
    assert report["validation"] is None
    assert report["validation_note"] == "no validation series was supplied"
    assert "Omitted" in (tmp_path / "report.md").read_text()


def test_config_file_supplies_defaults(runner, tmp_path, quick_grid):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"input": "synthetic", "mode": "discrete", "grid": quick_grid, "seed": 3}))
    result = runner.invoke(app, ["run", "--config", str(config), "--out", str(tmp_path / "out")])
    assert result.exit_code == 0, result.stdout
    echoed = read_report(tmp_path / "out")["config"]
    assert echoed["seed"] == 3
    assert echoed["mode"] == "discrete"


def test_config_file_selects_independent_tests(runner, tmp_path, quick_grid):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"input": "synthetic", "validation": "synthetic", "independent": True}))
    result = runner.invoke(app, [
        "run", "--config", str(config), "--mode", "discrete", "--grid", quick_grid, "--out", str(tmp_path / "out"),
    ])
    assert result.exit_code == 0, result.stdout
    block = read_report(tmp_path / "out")["validation"][0]
    assert block["paired"] is False
    assert all(row["t_test"]["df"] == 18 for row in block["rows"] if row["t_test"] is not None)


# Negative Tests
def test_unknown_config_key(runner, tmp_path):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"input": "synthetic", "learning_speed": 2}))
    result = runner.invoke(app, ["run", "--config", str(config), "--out", str(tmp_path)])
    assert result.exit_code == 2, result.stdout
    assert "learning_speed" in result.stdout


def test_missing_input(runner, tmp_path):
    result = runner.invoke(app, ["run", "--input", str(tmp_path / "nope.csv"), "--out", str(tmp_path)])
    assert result.exit_code == 2, result.stdout
    assert "not found" in result.stdout


def test_bad_train_fraction(runner, tmp_path):
    result = runner.invoke(app, ["run", "--input", "synthetic", "--train-frac", "1.5", "--out", str(tmp_path)])
    assert result.exit_code == 2, result.stdout


def test_short_validation_series(runner, tmp_path, quick_grid):
    short = write_ohlc(tmp_path / "short.csv", generate_series(115, seed=4))
    result = runner.invoke(app, [
        "run", "--input", "synthetic", "--validation", short, "--grid", quick_grid, "--out", str(tmp_path / "out"),
    ])
    assert result.exit_code == 2, result.stdout
    assert "100 required" in result.stdout
    status = json.loads((tmp_path / "out" / "run_status.json").read_text())
    assert status["status"] == "failed"
    assert status["stage"] == "prepare"


def test_unexpected_error_marks_partial_run(runner, tmp_path, quick_grid, monkeypatch):
    def broken_save(*args, **kwargs):
        raise TypeError("Object of type bool is not JSON serializable")

    monkeypatch.setattr(artifacts, "save_artifacts", broken_save)
    result = runner.invoke(app, [
        "run", "--input", "synthetic", "--mode", "discrete", "--grid", quick_grid, "--out", str(tmp_path),
    ])
    assert result.exit_code == 1, result.stdout
    assert "artifacts" in result.stdout
    status = json.loads((tmp_path / "run_status.json").read_text())
    assert status["status"] == "failed"
    assert status["stage"] == "artifacts"
    assert "TypeError" in status["error"]
    assert not (tmp_path / "report.json").exists()
