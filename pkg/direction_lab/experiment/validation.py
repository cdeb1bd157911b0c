import logging
from dataclasses import dataclass

import numpy as np

from direction_lab.data.indicators import IndicatorConfig
from direction_lab.data.market_data import NormalizationParams, PriceSeries, apply_normalizer
from direction_lab.evaluation.stats import TTestResult, paired_t_test
from direction_lab.models import TrainedModel
from .families import BENCHMARK, family_label
from .grids import FAMILIES
from .pipeline import prepare_dataset

logger = logging.getLogger(__name__)

FOLD_COUNT = 10
FOLD_SIZE = 10


@dataclass(frozen=True)
class ValidationOutcome:
    mode: str
    usable_rows: int
    fold_count: int
    fold_size: int
    first_date: str
    last_date: str
    accuracies: dict[str, list[float]]
    tests: dict[str, TTestResult]
    paired: bool = True

    def mean(self, family: str) -> float:
        return float(np.mean(self.accuracies[family]))

    def std(self, family: str) -> float:
        return float(np.std(self.accuracies[family], ddof=1))

    def to_dict(self) -> dict:
        families = [f for f in FAMILIES if f in self.accuracies]
        return {
            "mode": self.mode,
            "usable_rows": self.usable_rows,
            "fold_count": self.fold_count,
            "fold_size": self.fold_size,
            "first_date": self.first_date,
            "last_date": self.last_date,
            "paired": self.paired,
            "rows": [
                {
                    "family": family,
                    "label": family_label(family),
                    "fold_accuracies": self.accuracies[family],
                    "mean": self.mean(family),
                    "std": self.std(family),
                    "t_test": self.tests[family].to_dict() if family in self.tests else None,
                }
                for family in families
            ],
        }


def fold_accuracies(model: TrainedModel, X: np.ndarray, y: np.ndarray, fold_count: int, fold_size: int) -> list[float]:
    """Accuracy on consecutive chronological folds."""
    predictions = model.predict(X)
    correct = (predictions == y).reshape(fold_count, fold_size)
    return [float(v) for v in correct.mean(axis=1)]


def run_validation(
    models: dict[str, TrainedModel],
    series: PriceSeries,
    mode: str,
    cfg: IndicatorConfig = IndicatorConfig(),
    normalizer: NormalizationParams | None = None,
    *,
    paired: bool = True,
    fold_count: int = FOLD_COUNT,
    fold_size: int = FOLD_SIZE,
) -> ValidationOutcome:
    """Score every model on the last fold_count x fold_size rows of a hold-out series.

    Earlier bars of the series only feed the indicator warmup. Continuous
    features are scaled with the main training normalizer.
    """
    if BENCHMARK not in models:
        raise ValueError("the LR benchmark model is required for validation")
    if mode == "continuous" and normalizer is None:
        raise ValueError("continuous validation needs the training normalizer")

    required = fold_count * fold_size
    try:
        dataset, _ = prepare_dataset(series, cfg, mode)
        usable = len(dataset)
    except ValueError as e:
        raise ValueError(f"validation series is too short: {e}") from None
    if usable < required:
        raise ValueError(f"validation series yields {usable} usable rows; {required} required")

    rows = dataset.rows(usable - required)
    X = rows.features
    if normalizer is not None:
        X = apply_normalizer(normalizer, X)

    accuracies = {
        family: fold_accuracies(models[family], X, rows.labels, fold_count, fold_size)
        for family in FAMILIES if family in models
    }
    tests = {
        family: paired_t_test(accuracies[family], accuracies[BENCHMARK], paired=paired)
        for family in accuracies if family != BENCHMARK
    }
    logger.info("Validated %d models on %d folds of %d (%s)", len(accuracies), fold_count, fold_size, mode)
    return ValidationOutcome(
        mode=mode,
        usable_rows=usable,
        fold_count=fold_count,
        fold_size=fold_size,
        first_date=rows.dates[0].isoformat(),
        last_date=rows.dates[-1].isoformat(),
        accuracies=accuracies,
        tests=tests,
        paired=paired,
    )
