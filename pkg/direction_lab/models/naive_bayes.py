from dataclasses import asdict, dataclass
from typing import ClassVar, Literal

import numpy as np
from scipy.special import expit

from direction_lab.data.validators import require_training_data
from .base import TrainedModel

NB_VARIANTS = ("gaussian", "bernoulli")


@dataclass(frozen=True)
class NbParams:
    variant: Literal["gaussian", "bernoulli"] = "gaussian"
    var_floor: float = 1e-9
    alpha: float = 1.0

    def __post_init__(self):
        if self.variant not in NB_VARIANTS:
            raise ValueError(f"Invalid naive Bayes variant: {self.variant}")
        if not self.var_floor > 0:
            raise ValueError("var_floor must be > 0")
        if not self.alpha >= 0:
            raise ValueError("alpha must be >= 0")


@dataclass(frozen=True)
class NaiveBayesModel(TrainedModel):
    """Per-class statistics; row 0 describes class -1, row 1 class +1."""

    params: NbParams
    n_features: int
    log_priors: np.ndarray   # (2,)
    means: np.ndarray        # gaussian: (2, features); bernoulli: rate of +1
    variances: np.ndarray    # gaussian only, else empty
    family: ClassVar[str] = "nb"

    def log_likelihoods(self, X: np.ndarray) -> np.ndarray:
        """Joint log-probability of each row with each class, shape (rows, 2)."""
        if self.params.variant == "bernoulli":
            _require_signs(X)
            ones = (X == 1).astype(float)
            log_rate = np.log(self.means)
            log_rest = np.log1p(-self.means)
            joint = ones @ log_rate.T + (1.0 - ones) @ log_rest.T
        else:
            joint = np.stack([
                -0.5 * np.sum(np.log(2.0 * np.pi * self.variances[c]) + (X - self.means[c]) ** 2 / self.variances[c], axis=1)
                for c in (0, 1)
            ], axis=1)
        return joint + self.log_priors

    def _probabilities(self, X: np.ndarray) -> np.ndarray:
        joint = self.log_likelihoods(X)
        return expit(joint[:, 1] - joint[:, 0])

    def to_dict(self) -> dict:
        return {
            "params": asdict(self.params),
            "n_features": self.n_features,
            "log_priors": self.log_priors.tolist(),
            "means": self.means.tolist(),
            "variances": self.variances.tolist(),
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "NaiveBayesModel":
        return cls(
            params=NbParams(**payload["params"]),
            n_features=payload["n_features"],
            log_priors=np.asarray(payload["log_priors"], dtype=float),
            means=np.asarray(payload["means"], dtype=float),
            variances=np.asarray(payload["variances"], dtype=float),
        )


def _require_signs(X: np.ndarray) -> None:
    if not np.all(np.isin(X, (-1, 1))):
        raise ValueError("bernoulli naive Bayes needs +1/-1 features")


def train_nb(X, y, params: NbParams = NbParams()) -> NaiveBayesModel:
    X, y = require_training_data(X, y)
    classes = (-1, 1)
    counts = np.array([np.sum(y == c) for c in classes], dtype=float)
    missing = [c for c, n in zip(classes, counts) if n == 0]
    if missing:
        raise ValueError(f"class {missing[0]:+d} is absent from the training data")
    log_priors = np.log(counts / counts.sum())

    if params.variant == "bernoulli":
        _require_signs(X)
        ones = np.stack([np.sum(X[y == c] == 1, axis=0) for c in classes]).astype(float)
        rates = (ones + params.alpha) / (counts[:, np.newaxis] + 2.0 * params.alpha)
        if np.any((rates <= 0) | (rates >= 1)):
            raise ValueError("a Bernoulli rate hit 0 or 1; use alpha > 0 for degenerate columns")
        return NaiveBayesModel(params, X.shape[1], log_priors, rates, np.empty((0,)))

    means = np.stack([X[y == c].mean(axis=0) for c in classes])
    variances = np.stack([np.maximum(X[y == c].var(axis=0), params.var_floor) for c in classes])
    return NaiveBayesModel(params, X.shape[1], log_priors, means, variances)
