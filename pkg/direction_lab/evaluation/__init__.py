from .metrics import ConfusionMatrix, MetricsReport, confusion, core_metrics, evaluate, probability_errors, roc_auc
from .stats import TTestResult, paired_t_test

__all__ = [
    "ConfusionMatrix", "MetricsReport", "confusion", "core_metrics", "evaluate",
    "probability_errors", "roc_auc", "TTestResult", "paired_t_test",
]
