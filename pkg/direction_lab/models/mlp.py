import logging
from dataclasses import asdict, dataclass
from typing import ClassVar

import numpy as np
from scipy.special import expit

from direction_lab.data.validators import require_training_data, validate_positive, validate_window
from .base import TrainedModel, to_targets

logger = logging.getLogger(__name__)

INIT_RANGE = 0.5


@dataclass(frozen=True)
class MlpParams:
    hidden_neurons: int = 6
    epochs: int = 500
    momentum: float = 0.2
    learning_rate: float = 0.3
    seed: int = 0

    def __post_init__(self):
        validate_window(self.hidden_neurons, "hidden_neurons")
        validate_window(self.epochs, "epochs")
        validate_positive(self.learning_rate, "learning_rate")
        if not 0.0 <= self.momentum < 1.0:
            raise ValueError(f"momentum must lie in [0, 1), got {self.momentum}")


@dataclass
class MlpWeights:
    """One tanh hidden layer feeding a single logistic output unit."""

    hidden_weights: np.ndarray  # (hidden, features)
    hidden_bias: np.ndarray     # (hidden,)
    output_weights: np.ndarray  # (hidden,)
    output_bias: np.ndarray     # (1,)

    def arrays(self) -> tuple[np.ndarray, ...]:
        return (self.hidden_weights, self.hidden_bias, self.output_weights, self.output_bias)

    def flat(self) -> np.ndarray:
        return np.concatenate([a.ravel() for a in self.arrays()])

    def from_flat(self, vector: np.ndarray) -> "MlpWeights":
        pieces, offset = [], 0
        for array in self.arrays():
            pieces.append(vector[offset:offset + array.size].reshape(array.shape).copy())
            offset += array.size
        return MlpWeights(*pieces)

    def zeros_like(self) -> "MlpWeights":
        return MlpWeights(*(np.zeros_like(a) for a in self.arrays()))

    @classmethod
    def initialize(cls, n_features: int, hidden: int, rng: np.random.Generator) -> "MlpWeights":
        return cls(
            hidden_weights=rng.uniform(-INIT_RANGE, INIT_RANGE, (hidden, n_features)),
            hidden_bias=rng.uniform(-INIT_RANGE, INIT_RANGE, hidden),
            output_weights=rng.uniform(-INIT_RANGE, INIT_RANGE, hidden),
            output_bias=rng.uniform(-INIT_RANGE, INIT_RANGE, 1),
        )


@dataclass(frozen=True)
class MlpModel(TrainedModel):
    weights: MlpWeights
    params: MlpParams
    n_features: int
    family: ClassVar[str] = "ann"

    def _probabilities(self, X: np.ndarray) -> np.ndarray:
        hidden = np.tanh(X @ self.weights.hidden_weights.T + self.weights.hidden_bias)
        return expit(hidden @ self.weights.output_weights + self.weights.output_bias[0])

    def to_dict(self) -> dict:
        return {
            "params": asdict(self.params),
            "n_features": self.n_features,
            "hidden_weights": self.weights.hidden_weights.tolist(),
            "hidden_bias": self.weights.hidden_bias.tolist(),
            "output_weights": self.weights.output_weights.tolist(),
            "output_bias": self.weights.output_bias.tolist(),
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "MlpModel":
        weights = MlpWeights(*(
            np.asarray(payload[k], dtype=float)
            for k in ("hidden_weights", "hidden_bias", "output_weights", "output_bias")
        ))
        return cls(weights=weights, params=MlpParams(**payload["params"]), n_features=payload["n_features"])


# Backpropagation
def loss_and_gradient(weights: MlpWeights, x: np.ndarray, target: float) -> tuple[float, MlpWeights]:
    """Squared error 0.5 * (output - target)^2 of one sample and its gradient."""
    hidden = np.tanh(weights.hidden_weights @ x + weights.hidden_bias)
    output = expit(hidden @ weights.output_weights + weights.output_bias[0])
    error = output - target

    output_delta = error * output * (1.0 - output)
    hidden_delta = output_delta * weights.output_weights * (1.0 - hidden ** 2)
    gradient = MlpWeights(
        hidden_weights=np.outer(hidden_delta, x),
        hidden_bias=hidden_delta,
        output_weights=output_delta * hidden,
        output_bias=np.array([output_delta]),
    )
    return 0.5 * error ** 2, gradient


# Training
def train_mlp(X, y, params: MlpParams = MlpParams()) -> MlpModel:
    """Online gradient descent with momentum; sample order is reshuffled every epoch."""
    X, y = require_training_data(X, y)
    targets = to_targets(y)
    rng = np.random.default_rng(params.seed)
    weights = MlpWeights.initialize(X.shape[1], params.hidden_neurons, rng)
    velocity = weights.zeros_like()

    for epoch in range(params.epochs):
        epoch_loss = 0.0
        for i in rng.permutation(X.shape[0]):
            loss, gradient = loss_and_gradient(weights, X[i], targets[i])
            epoch_loss += loss
            for param, step, grad in zip(weights.arrays(), velocity.arrays(), gradient.arrays()):
                step *= params.momentum
                step -= params.learning_rate * grad
                param += step
        if logger.isEnabledFor(logging.DEBUG) and (epoch + 1) % 100 == 0:
            logger.debug("ann epoch %d/%d loss %.6f", epoch + 1, params.epochs, epoch_loss / X.shape[0])

    return MlpModel(weights=weights, params=params, n_features=X.shape[1])
