import numpy as np
import pytest
from scipy.optimize import brentq

from direction_lab.models.svm import (
    Kernel, SvmModel, SvmParams, dual_objective, kernel_eval, kkt_violations, train_smo,
)

LINEAR = Kernel("polynomial", degree=1)


# ---------- Projected-gradient oracle ----------
def project(v: np.ndarray, y: np.ndarray, C: float) -> np.ndarray:
    """Closest point to v in {0 <= a <= C, y.a = 0}."""
    def balance(shift):
        return float(y @ np.clip(v - shift * y, 0.0, C))

    bound = np.max(np.abs(v)) + C + 1.0
    shift = brentq(balance, -bound, bound, xtol=1e-14)
    return np.clip(v - shift * y, 0.0, C)


def oracle_dual(K: np.ndarray, y: np.ndarray, C: float, iterations: int = 5000) -> float:
    """Accelerated projected gradient ascent on the dual."""
    Q = K * np.outer(y, y)
    step = 1.0 / np.linalg.eigvalsh(Q)[-1]
    alphas = previous = np.zeros(len(y))
    momentum = 1.0
    for _ in range(iterations):
        upcoming = (1.0 + np.sqrt(1.0 + 4.0 * momentum ** 2)) / 2.0
        lookahead = alphas + (momentum - 1.0) / upcoming * (alphas - previous)
        previous, alphas = alphas, project(lookahead + step * (1.0 - Q @ lookahead), y, C)
        momentum = upcoming
    return dual_objective(alphas, y, K)


@pytest.mark.parametrize("kernel", [LINEAR, Kernel("polynomial", degree=2), Kernel("rbf", gamma=0.5)])
def test_dual_matches_oracle(kernel):
    rng = np.random.default_rng(12)
    for _ in range(10):
        X = rng.uniform(-1.0, 1.0, (8, 2))
        y = np.array([1, -1] * 4)
        params = SvmParams(kernel=kernel, C=1.0, tolerance=1e-5)
        model = train_smo(X, y, params)

        full = np.zeros(8)
        full[model.support_indices] = model.alphas
        K = kernel.matrix(X, X)
        assert dual_objective(full, y.astype(float), K) == pytest.approx(oracle_dual(K, y.astype(float), 1.0), abs=1e-3)


# ---------- Solution properties ----------
def test_two_points_split_at_midpoint():
    X = np.array([[1.0, 0.0], [-1.0, 0.0]])
    model = train_smo(X, np.array([1, -1]), SvmParams(kernel=LINEAR, C=1.0))
    assert model.decision_function([[0.0, 0.0]])[0] == pytest.approx(0.0, abs=1e-6)
    assert model.alphas.tolist() == pytest.approx([0.5, 0.5])


def test_kkt_hold_after_training(noisy_data):
    X, y = noisy_data
    model = train_smo(X, y, SvmParams(kernel=Kernel("rbf", gamma=0.5), C=10.0))
    assert model.converged
    assert kkt_violations(model, X, y) == []


def test_box_and_balance(noisy_data):
    X, y = noisy_data
    params = SvmParams(kernel=LINEAR, C=1.0)
    model = train_smo(X, y, params)
    assert np.all((model.alphas >= 0.0) & (model.alphas <= params.C))
    assert abs(np.sum(model.dual_coef)) <= 1e-8


def test_dual_objective_never_drops(noisy_data):
    X, y = noisy_data
    trace = []
    train_smo(X, y, SvmParams(kernel=Kernel("polynomial", degree=2), C=20.0), trace=trace)
    assert len(trace) > 1
    assert np.all(np.diff(trace) >= -1e-9)


def test_reruns_are_identical(noisy_data):
    X, y = noisy_data
    params = SvmParams(kernel=Kernel("rbf", gamma=1.0), C=10.0)
    runs = [train_smo(X, y, params) for _ in range(3)]
    for other in runs[1:]:
        assert np.array_equal(other.alphas, runs[0].alphas)
        assert other.bias == runs[0].bias


def test_label_flip_negates_margin(noisy_data):
    X, y = noisy_data
    params = SvmParams(kernel=LINEAR, C=1.0)
    forward, backward = train_smo(X, y, params), train_smo(X, -y, params)
    assert np.allclose(backward.decision_function(X), -forward.decision_function(X), atol=1e-9)


def test_rbf_solves_xor(xor_data):
    X, y = xor_data
    model = train_smo(X, y, SvmParams(kernel=Kernel("rbf", gamma=1.0), C=10.0))
    assert np.array_equal(model.predict(X), y)


def test_zero_margin_predicts_up():
    model = SvmModel(
        params=SvmParams(), n_features=2,
        support_vectors=np.empty((0, 2)), support_indices=np.empty(0, dtype=int),
        alphas=np.empty(0), dual_coef=np.empty(0),
        bias=0.0, converged=True, passes=0,
    )
    assert model.predict_proba([1.0, 2.0]) == 0.5
    assert model.predict([1.0, 2.0]) == 1


# ---------- Kernels ----------
def test_kernel_values():
    assert kernel_eval(Kernel("polynomial", degree=2), [1.0, 2.0], [3.0, 4.0]) == 144.0
    assert kernel_eval(Kernel("rbf", gamma=0.5), [0.0, 0.0], [2.0, 2.0]) == pytest.approx(np.exp(-4.0))
    assert kernel_eval(Kernel("rbf", gamma=0.0), [0.0, 1.0], [5.0, 5.0]) == 1.0


def test_kernel_matrix_agrees_with_pairs():
    rng = np.random.default_rng(0)
    A, B = rng.normal(size=(4, 3)), rng.normal(size=(5, 3))
    kernel = Kernel("rbf", gamma=0.3)
    expected = [[kernel_eval(kernel, a, b) for b in B] for a in A]
    assert np.allclose(kernel.matrix(A, B), expected, atol=1e-12)


def test_kernel_dimension_mismatch():
    with pytest.raises(ValueError, match="dimension"):
        kernel_eval(LINEAR, [1.0, 2.0], [1.0])


@pytest.mark.parametrize("kwargs", [{"kind": "sigmoid"}, {"degree": 0}, {"kind": "rbf", "gamma": -1.0}])
def test_kernel_validation(kwargs):
    with pytest.raises(ValueError):
        Kernel(**kwargs)


# ---------- Errors ----------
def test_single_class_rejected():
    with pytest.raises(ValueError, match="both classes"):
        train_smo(np.array([[0.0], [1.0]]), np.array([1, 1]))


def test_non_positive_C():
    with pytest.raises(ValueError):
        SvmParams(C=0.0)
