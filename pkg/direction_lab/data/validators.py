import numpy as np

SIGN_VALUES = (-1, 1)


# Scalars
def validate_window(window: int, name: str = "window") -> int:
    if isinstance(window, bool) or not isinstance(window, (int, np.integer)):
        raise ValueError(f"{name} must be an integer, got {window!r}")
    if window < 1:
        raise ValueError(f"{name} must be >= 1, got {window}")
    return int(window)


def validate_fraction(fraction: float, name: str = "train_fraction") -> float:
    try:
        fraction = float(fraction)
    except (TypeError, ValueError):
        raise ValueError(f"{name} must be a number.") from None
    if not 0.0 < fraction < 1.0:
        raise ValueError(f"{name} must lie strictly between 0 and 1, got {fraction}")
    return fraction


def validate_positive(value: float, name: str) -> float:
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ValueError(f"{name} must be a number.") from None
    if not np.isfinite(value) or value <= 0:
        raise ValueError(f"{name} must be > 0, got {value}")
    return value


# Arrays
def as_float_vector(values, name: str = "series") -> np.ndarray:
    array = np.asarray(values, dtype=float)
    if array.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {array.shape}")
    return array


def require_length(values: np.ndarray, minimum: int, name: str = "series") -> None:
    if len(values) < minimum:
        raise ValueError(f"{name} has {len(values)} values; at least {minimum} required")


def require_finite(matrix: np.ndarray, name: str = "input") -> None:
    if not np.all(np.isfinite(matrix)):
        raise ValueError(f"{name} contains non-finite values")


def require_sign_labels(labels: np.ndarray, name: str = "labels") -> np.ndarray:
    labels = np.asarray(labels)
    if labels.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional")
    if not np.all(np.isin(labels, SIGN_VALUES)):
        raise ValueError(f"{name} must only contain +1 and -1")
    return labels.astype(np.int8)


def require_training_data(X, y) -> tuple[np.ndarray, np.ndarray]:
    """Coerce a feature matrix and a ±1 label vector, checking shapes and finiteness."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ValueError(f"feature matrix must be two-dimensional, got shape {X.shape}")
    if X.shape[0] == 0:
        raise ValueError("training data is empty")
    y = require_sign_labels(y)
    if X.shape[0] != y.shape[0]:
        raise ValueError(f"dimension mismatch: {X.shape[0]} rows but {y.shape[0]} labels")
    require_finite(X, "feature matrix")
    return X, y
