import numpy as np
import pytest

from direction_lab.data.indicators import IndicatorConfig
from direction_lab.data.synthetic import bundled_series, generate_series
from direction_lab.experiment.grids import GridSpec
from direction_lab.experiment.pipeline import prepare_split, run_mode
from tests.helpers import random_walk


# Series fixtures
@pytest.fixture
def walk_1000():
    return random_walk(1000, seed=7)


@pytest.fixture
def series_100():
    return generate_series(100, seed=11)


@pytest.fixture(scope="session")
def bundle():
    return bundled_series()


# Model fixtures
@pytest.fixture
def xor_data():
    X = np.array([[-1.0, -1.0], [-1.0, 1.0], [1.0, -1.0], [1.0, 1.0]])
    y = np.array([-1, 1, 1, -1])
    return X, y


@pytest.fixture
def separable_data():
    rng = np.random.default_rng(3)
    X = np.vstack([rng.normal(-2.0, 0.5, (20, 2)), rng.normal(2.0, 0.5, (20, 2))])
    y = np.array([-1] * 20 + [1] * 20)
    return X, y


@pytest.fixture
def noisy_data():
    rng = np.random.default_rng(5)
    X = rng.normal(0.0, 1.0, (60, 3))
    y = np.where(X[:, 0] + 0.5 * X[:, 1] + rng.normal(0.0, 0.7, 60) > 0, 1, -1)
    return X, y


# Experiment fixtures
@pytest.fixture(scope="session")
def tiny_grids():
    return {
        "ann": GridSpec("ann", ({"hidden_neurons": (3,), "epochs": (5,), "momentum": (0.2,), "learning_rate": (0.3,)},)),
        "svm": GridSpec("svm", ({"kernel": ("polynomial",), "degree": (1,), "C": (1.0,)},)),
        "nb": GridSpec("nb", ({"variant": ("gaussian",)},)),
        "rf": GridSpec("rf", ({"mtry": (3,), "n_trees": (5, 10)},)),
        "lr": GridSpec("lr", ({"l2": (0.0,)},)),
    }


@pytest.fixture(scope="session")
def mode_results(bundle, tiny_grids):
    main, _ = bundle
    return [
        run_mode(prepare_split(main, IndicatorConfig(), mode, 0.75), tiny_grids, master_seed=0)
        for mode in ("continuous", "discrete")
    ]
