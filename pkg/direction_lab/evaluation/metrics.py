from dataclasses import asdict, dataclass, field

import numpy as np
from sklearn.metrics import accuracy_score, confusion_matrix, precision_recall_fscore_support, roc_auc_score

from direction_lab.data.validators import require_sign_labels
from direction_lab.models.base import labels_from_probabilities, to_targets

CLASS_ORDER = [1, -1]


@dataclass(frozen=True)
class ConfusionMatrix:
    TP: int
    FP: int
    TN: int
    FN: int

    def __post_init__(self):
        if min(self.TP, self.FP, self.TN, self.FN) < 0:
            raise ValueError("confusion counts must be non-negative")

    @property
    def total(self) -> int:
        return self.TP + self.FP + self.TN + self.FN

    @property
    def positives(self) -> int:
        return self.TP + self.FN

    @property
    def negatives(self) -> int:
        return self.TN + self.FP


@dataclass(frozen=True)
class CoreMetrics:
    precision_pos: float
    precision_neg: float
    recall_pos: float
    recall_neg: float
    f_pos: float
    f_neg: float
    accuracy: float
    f_weighted: float
    tp_rate: float   # support-weighted over both classes
    fp_rate: float
    undefined: tuple[str, ...] = ()  # ratios whose denominator was zero, reported as 0


@dataclass(frozen=True)
class MetricsReport:
    precision_pos: float
    precision_neg: float
    recall_pos: float
    recall_neg: float
    accuracy: float
    f_weighted: float
    mae: float
    rmse: float
    rae: float
    auc: float | None
    tp_rate: float
    fp_rate: float
    confusion: ConfusionMatrix
    undefined: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        payload = asdict(self)
        payload["undefined"] = list(self.undefined)
        return payload


# HELPERS
def _undefined(cm: ConfusionMatrix) -> tuple[str, ...]:
    denominators = {
        "precision_pos": cm.TP + cm.FP,
        "precision_neg": cm.TN + cm.FN,
        "recall_pos": cm.positives,
        "recall_neg": cm.negatives,
        "fp_rate_pos": cm.negatives,
        "fp_rate_neg": cm.positives,
    }
    return tuple(name for name, denominator in denominators.items() if denominator == 0)


def _expand(cm: ConfusionMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Label and prediction vectors that reproduce the counts of cm."""
    truth = np.repeat([1, 1, -1, -1], [cm.TP, cm.FN, cm.FP, cm.TN])
    predicted = np.repeat([1, -1, 1, -1], [cm.TP, cm.FN, cm.FP, cm.TN])
    return truth, predicted


def _paired(a, b, a_name: str, b_name: str) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {len(a)} {a_name} vs {len(b)} {b_name}")
    if a.size == 0:
        raise ValueError("cannot evaluate an empty set")
    return a, b


# Confusion statistics
def confusion(predictions, labels) -> ConfusionMatrix:
    predictions, labels = _paired(predictions, labels, "predictions", "labels")
    predictions = require_sign_labels(predictions, "predictions")
    labels = require_sign_labels(labels)
    tp, fn, fp, tn = confusion_matrix(labels, predictions, labels=CLASS_ORDER).ravel()
    return ConfusionMatrix(TP=int(tp), FP=int(fp), TN=int(tn), FN=int(fn))


def core_metrics(cm: ConfusionMatrix) -> CoreMetrics:
    """Per-class precision/recall/F and their support-weighted averages; zero denominators give 0."""
    if cm.total == 0:
        raise ValueError("empty confusion matrix")
    truth, predicted = _expand(cm)
    precision, recall, f_score, support = precision_recall_fscore_support(
        truth, predicted, labels=CLASS_ORDER, zero_division=0,
    )
    fp_rate_pos = cm.FP / cm.negatives if cm.negatives else 0.0
    fp_rate_neg = cm.FN / cm.positives if cm.positives else 0.0
    return CoreMetrics(
        precision_pos=float(precision[0]),
        precision_neg=float(precision[1]),
        recall_pos=float(recall[0]),
        recall_neg=float(recall[1]),
        f_pos=float(f_score[0]),
        f_neg=float(f_score[1]),
        accuracy=float(accuracy_score(truth, predicted)),
        f_weighted=float(np.average(f_score, weights=support)),
        tp_rate=float(np.average(recall, weights=support)),
        fp_rate=float(np.average([fp_rate_pos, fp_rate_neg], weights=support)),
        undefined=_undefined(cm),
    )


# Probability errors
def probability_errors(probs, labels, train_prior_pos: float) -> tuple[float, float, float]:
    """MAE, RMSE and RAE of probabilities against {0, 1} targets.

    RAE divides by the absolute error of always predicting the training prior.
    """
    probs, labels = _paired(probs, labels, "probabilities", "labels")
    probs = probs.astype(float)
    if np.any((probs < 0) | (probs > 1)) or not np.all(np.isfinite(probs)):
        raise ValueError("probabilities must lie in [0, 1]")
    if not 0.0 <= train_prior_pos <= 1.0:
        raise ValueError(f"train prior must lie in [0, 1], got {train_prior_pos}")
    targets = to_targets(require_sign_labels(labels))

    residuals = np.abs(probs - targets)
    baseline = np.sum(np.abs(train_prior_pos - targets))
    if baseline == 0:
        raise ValueError("RAE is undefined: every label equals the degenerate training prior")
    mae = float(np.mean(residuals))
    rmse = float(np.sqrt(np.mean(residuals ** 2)))
    return mae, rmse, float(np.sum(residuals) / baseline)


def roc_auc(probs, labels) -> float:
    """Area under the ROC curve; tied scores count half."""
    probs, labels = _paired(probs, labels, "scores", "labels")
    labels = require_sign_labels(labels)
    n_pos = int(np.sum(labels == 1))
    n_neg = labels.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("AUC needs both classes among the labels")
    return float(roc_auc_score(labels == 1, np.asarray(probs, dtype=float)))


# Full report
def evaluate(probs, labels, train_prior_pos: float) -> MetricsReport:
    """Every metric of one model on one evaluation set; AUC is None when the set holds a single class."""
    probs = np.asarray(probs, dtype=float)
    predictions = labels_from_probabilities(probs)
    cm = confusion(predictions, labels)
    core = core_metrics(cm)
    mae, rmse, rae = probability_errors(probs, labels, train_prior_pos)
    auc = roc_auc(probs, labels) if 0 < cm.positives < cm.total else None
    return MetricsReport(
        precision_pos=core.precision_pos,
        precision_neg=core.precision_neg,
        recall_pos=core.recall_pos,
        recall_neg=core.recall_neg,
        accuracy=core.accuracy,
        f_weighted=core.f_weighted,
        mae=mae,
        rmse=rmse,
        rae=rae,
        auc=auc,
        tp_rate=core.tp_rate,
        fp_rate=core.fp_rate,
        confusion=cm,
        undefined=core.undefined,
    )
