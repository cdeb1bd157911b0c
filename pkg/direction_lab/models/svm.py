"""Soft-margin SVM trained by sequential minimal optimization.

The solver is fully deterministic: sweeps alternate between the whole
training set and the non-bound multipliers, the second multiplier is the one
with the largest |E1 - E2| (lowest index on ties), and fallbacks scan in index
order.
"""
import logging
from dataclasses import asdict, dataclass, field
from typing import ClassVar, Literal

import numpy as np
from scipy.special import expit

from direction_lab.data.validators import require_training_data, validate_positive, validate_window
from .base import TrainedModel

logger = logging.getLogger(__name__)

KERNELS = ("polynomial", "rbf")
ALPHA_EPS = 1e-12
STEP_EPS = 1e-10


@dataclass(frozen=True)
class Kernel:
    kind: Literal["polynomial", "rbf"] = "polynomial"
    degree: int = 1
    gamma: float = 0.0

    def __post_init__(self):
        if self.kind not in KERNELS:
            raise ValueError(f"Invalid kernel: {self.kind}")
        if self.kind == "polynomial":
            validate_window(self.degree, "degree")
        if self.gamma < 0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")

    def matrix(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        if A.shape[1] != B.shape[1]:
            raise ValueError(f"dimension mismatch: {A.shape[1]} vs {B.shape[1]} features")
        if self.kind == "polynomial":
            return (A @ B.T + 1.0) ** self.degree
        distances = (
            np.sum(A ** 2, axis=1)[:, np.newaxis]
            + np.sum(B ** 2, axis=1)[np.newaxis, :]
            - 2.0 * A @ B.T
        )
        return np.exp(-self.gamma * np.maximum(distances, 0.0))


def kernel_eval(kernel: Kernel, x, z) -> float:
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    if x.shape != z.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {z.shape}")
    if kernel.kind == "polynomial":
        return float((x @ z + 1.0) ** kernel.degree)
    return float(np.exp(-kernel.gamma * np.sum((x - z) ** 2)))


@dataclass(frozen=True)
class SvmParams:
    kernel: Kernel = field(default_factory=Kernel)
    C: float = 1.0
    tolerance: float = 1e-3
    max_passes: int = 10_000

    def __post_init__(self):
        validate_positive(self.C, "C")
        validate_positive(self.tolerance, "tolerance")
        validate_window(self.max_passes, "max_passes")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, payload: dict) -> "SvmParams":
        payload = dict(payload)
        return cls(kernel=Kernel(**payload.pop("kernel")), **payload)


@dataclass(frozen=True)
class SvmModel(TrainedModel):
    params: SvmParams
    n_features: int
    support_vectors: np.ndarray
    support_indices: np.ndarray
    alphas: np.ndarray      # multipliers of the support vectors
    dual_coef: np.ndarray   # alpha_i * y_i
    bias: float
    converged: bool
    passes: int
    family: ClassVar[str] = "svm"

    def decision_function(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.n_features:
            raise ValueError(f"dimension mismatch: model expects {self.n_features} features, got {X.shape[1]}")
        if len(self.dual_coef) == 0:
            return np.full(X.shape[0], self.bias)
        return self.params.kernel.matrix(X, self.support_vectors) @ self.dual_coef + self.bias

    def _probabilities(self, X: np.ndarray) -> np.ndarray:
        # fixed logistic squash of the margin; no Platt calibration
        return expit(self.decision_function(X))

    def to_dict(self) -> dict:
        return {
            "params": self.params.to_dict(),
            "n_features": self.n_features,
            "support_vectors": self.support_vectors.tolist(),
            "support_indices": self.support_indices.tolist(),
            "alphas": self.alphas.tolist(),
            "dual_coef": self.dual_coef.tolist(),
            "bias": self.bias,
            "converged": bool(self.converged),
            "passes": self.passes,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "SvmModel":
        n_features = payload["n_features"]
        return cls(
            params=SvmParams.from_dict(payload["params"]),
            n_features=n_features,
            support_vectors=np.asarray(payload["support_vectors"], dtype=float).reshape(-1, n_features),
            support_indices=np.asarray(payload["support_indices"], dtype=int),
            alphas=np.asarray(payload["alphas"], dtype=float),
            dual_coef=np.asarray(payload["dual_coef"], dtype=float),
            bias=float(payload["bias"]),
            converged=bool(payload["converged"]),
            passes=int(payload["passes"]),
        )


def dual_objective(alphas: np.ndarray, y: np.ndarray, K: np.ndarray) -> float:
    weighted = alphas * y
    return float(np.sum(alphas) - 0.5 * weighted @ K @ weighted)


class _SmoSolver:
    def __init__(self, K: np.ndarray, y: np.ndarray, params: SvmParams, trace: list | None):
        self.K = K
        self.y = y.astype(float)
        self.C = params.C
        self.tol = params.tolerance
        self.alphas = np.zeros(len(y))
        self.bias = 0.0
        self.errors = -self.y.copy()  # f(x) - y with all multipliers at zero
        self.trace = trace
        if trace is not None:
            trace.append(0.0)

    def non_bound(self) -> np.ndarray:
        return np.flatnonzero((self.alphas > ALPHA_EPS) & (self.alphas < self.C - ALPHA_EPS))

    def violates_kkt(self, i: int) -> bool:
        r = self.errors[i] * self.y[i]
        return (r < -self.tol and self.alphas[i] < self.C) or (r > self.tol and self.alphas[i] > 0)

    def examine(self, i2: int) -> int:
        if not self.violates_kkt(i2):
            return 0
        free = self.non_bound()
        if free.size > 1:
            gaps = np.abs(self.errors[free] - self.errors[i2])
            if self.take_step(int(free[np.argmax(gaps)]), i2):
                return 1
        for i1 in free:
            if self.take_step(int(i1), i2):
                return 1
        for i1 in range(len(self.alphas)):
            if self.take_step(i1, i2):
                return 1
        return 0

    def _objective_at(self, i1: int, i2: int, a1: float, a2: float) -> float:
        # dual objective restricted to the (i1, i2) pair, other multipliers fixed
        y1, y2 = self.y[i1], self.y[i2]
        K = self.K
        f1 = self.errors[i1] + y1 - self.bias - self.alphas[i1] * y1 * K[i1, i1] - self.alphas[i2] * y2 * K[i1, i2]
        f2 = self.errors[i2] + y2 - self.bias - self.alphas[i1] * y1 * K[i1, i2] - self.alphas[i2] * y2 * K[i2, i2]
        return (
            a1 + a2
            - 0.5 * K[i1, i1] * a1 ** 2
            - 0.5 * K[i2, i2] * a2 ** 2
            - y1 * y2 * K[i1, i2] * a1 * a2
            - y1 * a1 * f1
            - y2 * a2 * f2
        )

    def take_step(self, i1: int, i2: int) -> bool:
        if i1 == i2:
            return False
        y1, y2 = self.y[i1], self.y[i2]
        alpha1, alpha2 = self.alphas[i1], self.alphas[i2]
        E1, E2 = self.errors[i1], self.errors[i2]
        s = y1 * y2
        if s < 0:
            low, high = max(0.0, alpha2 - alpha1), min(self.C, self.C + alpha2 - alpha1)
        else:
            low, high = max(0.0, alpha1 + alpha2 - self.C), min(self.C, alpha1 + alpha2)
        if high - low < ALPHA_EPS:
            return False

        K = self.K
        eta = K[i1, i1] + K[i2, i2] - 2.0 * K[i1, i2]
        if eta > 0:
            a2 = float(np.clip(alpha2 + y2 * (E1 - E2) / eta, low, high))
        else:
            at_low = self._objective_at(i1, i2, alpha1 + s * (alpha2 - low), low)
            at_high = self._objective_at(i1, i2, alpha1 + s * (alpha2 - high), high)
            if at_low > at_high + STEP_EPS:
                a2 = low
            elif at_high > at_low + STEP_EPS:
                a2 = high
            else:
                a2 = alpha2

        if a2 < ALPHA_EPS:
            a2 = 0.0
        elif a2 > self.C - ALPHA_EPS:
            a2 = self.C
        if abs(a2 - alpha2) < STEP_EPS * (a2 + alpha2 + STEP_EPS):
            return False

        a1 = alpha1 + s * (alpha2 - a2)
        if a1 < ALPHA_EPS:
            a2 += s * a1
            a1 = 0.0
        elif a1 > self.C - ALPHA_EPS:
            a2 += s * (a1 - self.C)
            a1 = self.C
        a2 = min(max(a2, 0.0), self.C)

        delta1, delta2 = y1 * (a1 - alpha1), y2 * (a2 - alpha2)
        b1 = self.bias - E1 - delta1 * K[i1, i1] - delta2 * K[i1, i2]
        b2 = self.bias - E2 - delta1 * K[i1, i2] - delta2 * K[i2, i2]
        if 0.0 < a1 < self.C:
            bias = b1
        elif 0.0 < a2 < self.C:
            bias = b2
        else:
            bias = (b1 + b2) / 2.0

        self.errors += delta1 * K[:, i1] + delta2 * K[:, i2] + (bias - self.bias)
        self.alphas[i1], self.alphas[i2] = a1, a2
        self.bias = bias
        if self.trace is not None:
            self.trace.append(dual_objective(self.alphas, self.y, self.K))
        return True

    def solve(self, max_passes: int) -> tuple[bool, int]:
        examine_all, changed, passes = True, 0, 0
        while (changed > 0 or examine_all) and passes < max_passes:
            indices = range(len(self.alphas)) if examine_all else self.non_bound()
            changed = sum(self.examine(int(i)) for i in indices)
            passes += 1
            if examine_all:
                examine_all = False
            elif changed == 0:
                examine_all = True
            logger.debug("smo pass %d changed %d", passes, changed)
        return bool(self.violation_count() == 0), passes

    def violation_count(self) -> int:
        return int(sum(self.violates_kkt(i) for i in range(len(self.alphas))))

    def refit_bias(self) -> None:
        """Average the bias over free support vectors once the multipliers are final.

        The averaged bias is kept only if it adds no KKT violations.
        """
        free = self.non_bound()
        if free.size == 0:
            return
        margins = self.K[free] @ (self.alphas * self.y)
        bias = float(np.mean(self.y[free] - margins))
        before, previous = self.violation_count(), self.bias
        self.errors += bias - previous
        self.bias = bias
        if self.violation_count() > before:
            self.errors += previous - bias
            self.bias = previous


def train_smo(X, y, params: SvmParams = SvmParams(), *, trace: list | None = None) -> SvmModel:
    """Fit the soft-margin dual. Pass a list as `trace` to record the dual objective after every step."""
    X, y = require_training_data(X, y)
    if X.shape[0] < 2:
        raise ValueError("SVM needs at least 2 rows")
    if np.unique(y).size < 2:
        raise ValueError("SVM needs both classes in the training data")

    K = params.kernel.matrix(X, X)
    solver = _SmoSolver(K, y, params, trace)
    _, passes = solver.solve(params.max_passes)
    solver.refit_bias()
    converged = bool(solver.violation_count() == 0)
    if not converged:
        logger.info("SMO stopped after %d passes with KKT violations above %.1e", passes, params.tolerance)

    support = np.flatnonzero(solver.alphas > 0)
    return SvmModel(
        params=params,
        n_features=X.shape[1],
        support_vectors=X[support].copy(),
        support_indices=support,
        alphas=solver.alphas[support].copy(),
        dual_coef=solver.alphas[support] * solver.y[support],
        bias=solver.bias,
        converged=converged,
        passes=passes,
    )


def decision_function(model: SvmModel, X) -> np.ndarray:
    return model.decision_function(X)


def kkt_violations(model: SvmModel, X, y, tolerance: float | None = None) -> list[int]:
    """Training rows breaking the tolerance-relaxed KKT conditions."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    tol = model.params.tolerance if tolerance is None else tolerance
    alphas = np.zeros(len(y))
    alphas[model.support_indices] = model.alphas
    margins = y * model.decision_function(X)
    C = model.params.C
    at_zero = (alphas <= 0) & (margins < 1 - tol)
    free = (alphas > 0) & (alphas < C) & (np.abs(margins - 1) > tol)
    at_bound = (alphas >= C) & (margins > 1 + tol)
    return np.flatnonzero(at_zero | free | at_bound).tolist()
