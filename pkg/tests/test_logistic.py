import numpy as np
import pytest

from direction_lab.models.logistic import LrParams, train_lr


# ---------- Fitting ----------
def test_symmetric_data_has_zero_intercept():
    X = np.array([[-2.0], [-1.0], [1.0], [2.0], [-0.5], [0.5]])
    y = np.array([-1, -1, 1, 1, 1, -1])
    model = train_lr(X, y)
    assert model.converged
    assert model.intercept == pytest.approx(0.0, abs=1e-6)
    assert model.coefficients[0] > 0


def test_two_groups_match_closed_form():
    # x=0: three up, one down; x=1: one up, three down
    X = np.array([[0.0]] * 4 + [[1.0]] * 4)
    y = np.array([1, 1, 1, -1, 1, -1, -1, -1])
    model = train_lr(X, y)
    assert model.intercept == pytest.approx(np.log(3.0), abs=1e-6)
    assert model.coefficients[0] == pytest.approx(-2.0 * np.log(3.0), abs=1e-6)
    assert model.predict_proba([0.0]) == pytest.approx(0.75, abs=1e-9)


def test_log_likelihood_never_drops(noisy_data):
    X, y = noisy_data
    model = train_lr(X, y)
    steps = np.diff(model.log_likelihoods)
    assert np.all(steps >= -1e-12)
    assert model.iterations == len(model.log_likelihoods) - 1


def test_separable_data_does_not_converge(separable_data):
    X, y = separable_data
    model = train_lr(X, y, LrParams(max_iterations=25))
    assert not model.converged
    assert model.iterations == 25
    assert np.mean(model.predict(X) == y) == 1.0


def test_ridge_converges_on_separable_data(separable_data):
    X, y = separable_data
    model = train_lr(X, y, LrParams(l2=1.0))
    assert model.converged


def test_half_probability_predicts_up():
    X = np.array([[-1.0], [-1.0], [1.0], [1.0]])
    y = np.array([-1, 1, 1, -1])
    model = train_lr(X, y)
    assert model.predict_proba([0.7]) == pytest.approx(0.5)
    assert model.predict([0.7]) == 1


# ---------- Errors ----------
def test_needs_two_rows():
    with pytest.raises(ValueError):
        train_lr(np.array([[1.0]]), np.array([1]))


@pytest.mark.parametrize("kwargs", [{"max_iterations": 0}, {"tolerance": 0.0}, {"l2": -0.1}])
def test_params_validation(kwargs):
    with pytest.raises(ValueError):
        LrParams(**kwargs)
