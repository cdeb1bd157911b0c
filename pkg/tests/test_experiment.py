import numpy as np
import pytest

from direction_lab.data.indicators import IndicatorConfig
from direction_lab.data.market_data import chronological_split, fit_normalizer
from direction_lab.experiment.families import derive_seed, family_label, train_family
from direction_lab.experiment.grids import FAMILIES, GridSpec
from direction_lab.experiment.pipeline import prepare_dataset, prepare_split
from direction_lab.experiment.runner import (
    Leaderboard, compare_best, fit_best, majority_baseline, run_grid, select_best,
)

CFG = IndicatorConfig()


@pytest.fixture(scope="module")
def continuous(bundle):
    return prepare_split(bundle[0], CFG, "continuous", 0.75)


@pytest.fixture(scope="module")
def discrete(bundle):
    return prepare_split(bundle[0], CFG, "discrete", 0.75)


# ---------- Preparation ----------
def test_bundled_split_sizes(continuous, discrete):
    assert (len(continuous.split.train), len(continuous.split.test)) == (370, 124)
    assert len(discrete.split.train) + len(discrete.split.test) == 493


def test_normalizer_fitted_on_training_rows_only(bundle, continuous):
    raw, _ = prepare_dataset(bundle[0], CFG, "continuous")
    raw_split = chronological_split(raw, 0.75)
    refit = fit_normalizer(raw_split.train.features)
    assert np.array_equal(continuous.normalizer.minimum, refit.minimum)
    assert np.array_equal(continuous.normalizer.maximum, refit.maximum)
    assert continuous.split.train.features.min() == 0.0
    assert continuous.split.train.features.max() == 1.0


def test_discrete_has_no_normalizer(discrete):
    assert discrete.normalizer is None
    assert set(np.unique(discrete.split.train.features)) == {-1.0, 1.0}


def test_invalid_mode(bundle):
    with pytest.raises(ValueError, match="mode"):
        prepare_dataset(bundle[0], CFG, "weekly")


# ---------- Seeds ----------
def test_derived_seeds_are_stable_and_distinct():
    assert derive_seed(0, 3) == derive_seed(0, 3)
    assert len({derive_seed(0, i) for i in range(50)}) == 50
    assert derive_seed(1, 3) != derive_seed(0, 3)


def test_benchmark_label():
    assert family_label("lr") == "LR (Benchmark)"
    assert family_label("svm") == "SVM"


# ---------- Grid search ----------
def test_singleton_grid(continuous):
    board = run_grid("lr", GridSpec("lr", ({"l2": (0.0,)},)), continuous.split, "continuous", 0)
    assert len(board.rows) == 1
    assert board.rows[0].rank == 1
    assert 0.0 <= board.rows[0].accuracy <= 1.0


def test_grid_is_deterministic(discrete):
    grid = GridSpec("rf", ({"mtry": (2, 5), "n_trees": (5,)},))
    first = run_grid("rf", grid, discrete.split, "discrete", 7)
    second = run_grid("rf", grid, discrete.split, "discrete", 7)
    assert [r.to_dict() for r in first.rows] == [r.to_dict() for r in second.rows]


def test_parallel_matches_serial(discrete):
    grid = GridSpec("rf", ({"mtry": (2, 5), "n_trees": (5,)},))
    serial = run_grid("rf", grid, discrete.split, "discrete", 7, jobs=1)
    parallel = run_grid("rf", grid, discrete.split, "discrete", 7, jobs=2)
    assert [r.to_dict() for r in serial.rows] == [r.to_dict() for r in parallel.rows]


def test_ties_keep_enumeration_order(continuous):
    grid = GridSpec("nb", ({"variant": ("gaussian", "gaussian")},))
    board = run_grid("nb", grid, continuous.split, "continuous", 0)
    assert [r.index for r in board.rows] == [0, 1]
    assert board.rows[0].accuracy == board.rows[1].accuracy


def test_failed_combination_is_recorded(continuous):
    grid = GridSpec("rf", ({"mtry": (20, 3), "n_trees": (5,)},))
    board = run_grid("rf", grid, continuous.split, "continuous", 0)
    assert board.failures == 1
    assert board.rows[-1].failed
    assert "mtry" in board.rows[-1].error
    assert select_best(board).params["mtry"] == 3


def test_all_failed_grid(continuous):
    board = run_grid("rf", GridSpec("rf", ({"mtry": (20,), "n_trees": (5,)},)), continuous.split, "continuous", 0)
    with pytest.raises(ValueError, match="every rf combination failed"):
        select_best(board)


def test_empty_leaderboard():
    with pytest.raises(ValueError, match="empty"):
        select_best(Leaderboard(family="lr", mode="continuous", rows=(), majority_baseline=0.5))


def test_grid_family_mismatch(continuous):
    with pytest.raises(ValueError):
        run_grid("nb", GridSpec("lr", ({"l2": (0.0,)},)), continuous.split, "continuous", 0)


def test_refit_reproduces_grid_score(discrete):
    grid = GridSpec("ann", ({"hidden_neurons": (3,), "epochs": (3,), "momentum": (0.2,), "learning_rate": (0.3,)},))
    board = run_grid("ann", grid, discrete.split, "discrete", 11)
    best = select_best(board)
    model = fit_best("ann", best, discrete.split)
    accuracy = np.mean(model.predict(discrete.split.test.features) == discrete.split.test.labels)
    assert accuracy == pytest.approx(best.accuracy)


def test_majority_baseline(continuous):
    split = continuous.split
    majority = 1 if np.mean(split.train.labels == 1) >= 0.5 else -1
    assert majority_baseline(split.train, split.test) == pytest.approx(np.mean(split.test.labels == majority))


# ---------- Comparison ----------
def test_comparison_ranks_by_weighted_f(continuous):
    split = continuous.split
    models = {
        family: train_family(family, combo, 0, split.train.features, split.train.labels)
        for family, combo in (("nb", {"variant": "gaussian"}), ("lr", {"l2": 0.0}), ("rf", {"mtry": 3, "n_trees": 5}))
    }
    rows = compare_best(models, {}, split)
    assert [r.rank for r in rows] == [1, 2, 3]
    scores = [r.f_weighted for r in rows]
    assert scores == sorted(scores, reverse=True)
    assert "LR (Benchmark)" in {r.label for r in rows}


def test_comparison_needs_benchmark(continuous):
    split = continuous.split
    model = train_family("nb", {"variant": "gaussian"}, 0, split.train.features, split.train.labels)
    with pytest.raises(ValueError, match="benchmark"):
        compare_best({"nb": model}, {}, split)


# ---------- Whole mode ----------
def test_run_mode_covers_every_family(mode_results):
    for result in mode_results:
        assert set(result.leaderboards) == set(FAMILIES)
        assert set(result.models) == set(FAMILIES)
        assert len(result.comparison) == len(FAMILIES)
        assert result.best_params["rf"]["n_trees"] in (5, 10)
