import logging
from dataclasses import asdict, dataclass
from typing import ClassVar

import numpy as np
from scipy.special import expit, log_expit

from direction_lab.data.validators import require_training_data, validate_positive, validate_window
from .base import TrainedModel, to_targets

logger = logging.getLogger(__name__)

MAX_STEP_HALVINGS = 30


@dataclass(frozen=True)
class LrParams:
    max_iterations: int = 100
    tolerance: float = 1e-10
    l2: float = 0.0

    def __post_init__(self):
        validate_window(self.max_iterations, "max_iterations")
        validate_positive(self.tolerance, "tolerance")
        if self.l2 < 0:
            raise ValueError("l2 must be >= 0")


@dataclass(frozen=True)
class LogisticModel(TrainedModel):
    params: LrParams
    n_features: int
    intercept: float
    coefficients: np.ndarray
    converged: bool
    iterations: int
    log_likelihoods: tuple[float, ...]
    family: ClassVar[str] = "lr"

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        return self.intercept + X @ self.coefficients

    def _probabilities(self, X: np.ndarray) -> np.ndarray:
        return expit(self.decision_function(X))

    def to_dict(self) -> dict:
        return {
            "params": asdict(self.params),
            "n_features": self.n_features,
            "intercept": self.intercept,
            "coefficients": self.coefficients.tolist(),
            "converged": self.converged,
            "iterations": self.iterations,
            "log_likelihoods": list(self.log_likelihoods),
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "LogisticModel":
        return cls(
            params=LrParams(**payload["params"]),
            n_features=payload["n_features"],
            intercept=float(payload["intercept"]),
            coefficients=np.asarray(payload["coefficients"], dtype=float),
            converged=bool(payload["converged"]),
            iterations=int(payload["iterations"]),
            log_likelihoods=tuple(payload["log_likelihoods"]),
        )


def penalized_log_likelihood(design: np.ndarray, targets: np.ndarray, beta: np.ndarray, l2: float) -> float:
    scores = design @ beta
    value = np.sum(targets * log_expit(scores) + (1.0 - targets) * log_expit(-scores))
    return float(value - 0.5 * l2 * np.sum(beta[1:] ** 2))


def separates(scores: np.ndarray, targets: np.ndarray) -> bool:
    return bool(np.all(np.where(targets == 1.0, scores > 0, scores < 0)))


def train_lr(X, y, params: LrParams = LrParams()) -> LogisticModel:
    """Maximum likelihood logistic regression with intercept, fitted by IRLS.

    Each Newton step is halved until the (penalized) log-likelihood does not
    drop. On separable data the likelihood has no maximum; fitting stops at
    max_iterations with converged=False.
    """
    X, y = require_training_data(X, y)
    if X.shape[0] < 2:
        raise ValueError("logistic regression needs at least 2 rows")
    targets = to_targets(y)
    design = np.column_stack([np.ones(X.shape[0]), X])
    penalty = params.l2 * np.eye(design.shape[1])
    penalty[0, 0] = 0.0

    beta = np.zeros(design.shape[1])
    current = penalized_log_likelihood(design, targets, beta, params.l2)
    history = [current]
    converged = False
    iteration = 0

    while iteration < params.max_iterations:
        iteration += 1
        probabilities = expit(design @ beta)
        weights = probabilities * (1.0 - probabilities)
        gradient = design.T @ (targets - probabilities) - penalty @ beta
        hessian = design.T @ (design * weights[:, np.newaxis]) + penalty
        step = np.linalg.lstsq(hessian, gradient, rcond=None)[0]

        scale = 1.0
        for _ in range(MAX_STEP_HALVINGS):
            candidate = beta + scale * step
            value = penalized_log_likelihood(design, targets, candidate, params.l2)
            if value >= current:
                break
            scale /= 2.0
        else:
            candidate, value = beta, current

        change = np.max(np.abs(candidate - beta))
        beta, improvement, current = candidate, value - current, value
        history.append(current)
        logger.debug("lr iteration %d log-likelihood %.10f", iteration, current)
        settled = change < params.tolerance or improvement < params.tolerance * (abs(current) + params.tolerance)
        # a separating fit has no finite maximum; keep going to max_iterations
        if settled and not (params.l2 == 0 and separates(design @ beta, targets)):
            converged = True
            break

    if not converged:
        logger.info("logistic regression stopped after %d iterations without converging", iteration)

    return LogisticModel(
        params=params,
        n_features=X.shape[1],
        intercept=float(beta[0]),
        coefficients=beta[1:].copy(),
        converged=converged,
        iterations=iteration,
        log_likelihoods=tuple(history),
    )
