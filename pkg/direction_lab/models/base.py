from abc import ABC, abstractmethod

import numpy as np

from direction_lab.data.validators import require_finite

THRESHOLD = 0.5


class TrainedModel(ABC):
    """A fitted binary classifier over ±1 labels.

    Subclasses are frozen dataclasses; prediction is a pure function of the
    model and its input.
    """

    family: str
    n_features: int

    @abstractmethod
    def _probabilities(self, X: np.ndarray) -> np.ndarray:
        """P(label = +1) for each row of an already validated matrix."""

    @abstractmethod
    def to_dict(self) -> dict:
        ...

    def predict_proba(self, X):
        return predict_proba(self, X)

    def predict(self, X):
        return predict(self, X)


# HELPERS
def as_query(model: TrainedModel, X) -> tuple[np.ndarray, bool]:
    """Coerce a single row or a batch to a 2-D matrix; report whether it was a single row."""
    matrix = np.asarray(X, dtype=float)
    single = matrix.ndim == 1
    if single:
        matrix = matrix[np.newaxis, :]
    if matrix.ndim != 2 or matrix.shape[1] != model.n_features:
        raise ValueError(
            f"dimension mismatch: {model.family} model expects {model.n_features} features, "
            f"got shape {np.asarray(X).shape}"
        )
    require_finite(matrix, "query")
    return matrix, single


def labels_from_probabilities(probabilities: np.ndarray) -> np.ndarray:
    return np.where(probabilities >= THRESHOLD, 1, -1).astype(np.int8)


# Prediction
def predict_proba(model: TrainedModel, X):
    matrix, single = as_query(model, X)
    probabilities = np.clip(model._probabilities(matrix), 0.0, 1.0)
    return float(probabilities[0]) if single else probabilities


def predict(model: TrainedModel, X):
    probabilities = np.atleast_1d(predict_proba(model, X))
    labels = labels_from_probabilities(probabilities)
    return int(labels[0]) if np.asarray(X).ndim == 1 else labels


def to_targets(y: np.ndarray) -> np.ndarray:
    """Map ±1 labels onto {1, 0} targets."""
    return (np.asarray(y) == 1).astype(float)
