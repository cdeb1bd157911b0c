import logging
from dataclasses import dataclass, field, replace

import numpy as np
from joblib import Parallel, delayed

from direction_lab.data.market_data import DatasetSplit, LabeledDataset
from direction_lab.evaluation.metrics import evaluate
from direction_lab.models import TrainedModel
from .families import BENCHMARK, derive_seed, family_label, train_family
from .grids import FAMILIES, GridSpec

logger = logging.getLogger(__name__)

GRID_FAILURES = (ValueError, ArithmeticError, np.linalg.LinAlgError)


@dataclass(frozen=True)
class LeaderboardRow:
    family: str
    index: int
    params: dict
    seed: int
    accuracy: float | None = None
    mae: float | None = None
    rmse: float | None = None
    rae: float | None = None
    f_weighted: float | None = None
    auc: float | None = None
    error: str | None = None
    rank: int = 0

    @property
    def failed(self) -> bool:
        return self.error is not None

    def to_dict(self) -> dict:
        return {
            "rank": self.rank,
            "index": self.index,
            "params": self.params,
            "seed": self.seed,
            "accuracy": self.accuracy,
            "mae": self.mae,
            "rmse": self.rmse,
            "rae": self.rae,
            "f_weighted": self.f_weighted,
            "auc": self.auc,
            "error": self.error,
        }


@dataclass(frozen=True)
class Leaderboard:
    family: str
    mode: str
    rows: tuple[LeaderboardRow, ...]
    majority_baseline: float
    truncated: bool = False

    def top(self, n: int = 3) -> tuple[LeaderboardRow, ...]:
        return self.rows[:n]

    @property
    def failures(self) -> int:
        return sum(row.failed for row in self.rows)

    def to_dict(self, limit: int | None = None) -> dict:
        rows = self.rows if limit is None else self.rows[:limit]
        return {
            "family": self.family,
            "mode": self.mode,
            "combinations": len(self.rows),
            "failures": self.failures,
            "majority_baseline": self.majority_baseline,
            "truncated": self.truncated,
            "rows": [row.to_dict() for row in rows],
        }


@dataclass(frozen=True)
class ComparisonRow:
    family: str
    label: str
    params: dict
    accuracy: float
    tp_rate: float
    fp_rate: float
    auc: float | None
    f_weighted: float
    rank: int = 0
    undefined: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "rank": self.rank,
            "family": self.family,
            "label": self.label,
            "params": self.params,
            "accuracy": self.accuracy,
            "tp_rate": self.tp_rate,
            "fp_rate": self.fp_rate,
            "auc": self.auc,
            "f_weighted": self.f_weighted,
            "undefined": list(self.undefined),
        }


# HELPERS
def majority_baseline(train: LabeledDataset, test: LabeledDataset) -> float:
    """Test accuracy of always predicting the majority training class (+1 on ties)."""
    majority = 1 if train.positive_rate >= 0.5 else -1
    return float(np.mean(test.labels == majority))


def _evaluate_combination(family: str, index: int, combo: dict, seed: int, split: DatasetSplit) -> LeaderboardRow:
    row = LeaderboardRow(family=family, index=index, params=combo, seed=seed)
    try:
        model = train_family(family, combo, seed, split.train.features, split.train.labels)
        report = evaluate(model.predict_proba(split.test.features), split.test.labels, split.train.positive_rate)
    except GRID_FAILURES as e:
        return replace(row, error=f"{type(e).__name__}: {e}")
    return replace(
        row,
        accuracy=report.accuracy,
        mae=report.mae,
        rmse=report.rmse,
        rae=report.rae,
        f_weighted=report.f_weighted,
        auc=report.auc,
    )


def rank_rows(rows: list[LeaderboardRow]) -> tuple[LeaderboardRow, ...]:
    """Sort by accuracy descending, enumeration order on ties, failed rows last."""
    ordered = sorted(rows, key=lambda r: (r.failed, -(r.accuracy or 0.0), r.index))
    return tuple(replace(row, rank=rank) for rank, row in enumerate(ordered, start=1))


# Grid search
def run_grid(
    family: str,
    grid: GridSpec,
    split: DatasetSplit,
    mode: str,
    master_seed: int,
    jobs: int = 1,
) -> Leaderboard:
    if grid.family != family:
        raise ValueError(f"grid is for {grid.family}, not {family}")
    combos = grid.combinations()
    if not combos:
        raise ValueError(f"{family} grid is empty")

    logger.info("Running %s grid: %d combinations (%s)", family, len(combos), mode)
    rows = Parallel(n_jobs=jobs)(
        delayed(_evaluate_combination)(family, index, combo, derive_seed(master_seed, index), split)
        for index, combo in enumerate(combos)
    )
    for row in rows:
        if row.failed:
            logger.warning("%s combination %d failed: %s", family, row.index, row.error)
        else:
            logger.debug("%s %s accuracy %.4f", family, row.params, row.accuracy)

    return Leaderboard(
        family=family,
        mode=mode,
        rows=rank_rows(rows),
        majority_baseline=majority_baseline(split.train, split.test),
        truncated=grid.truncated,
    )


def select_best(leaderboard: Leaderboard) -> LeaderboardRow:
    if not leaderboard.rows:
        raise ValueError("leaderboard is empty")
    best = leaderboard.rows[0]
    if best.failed:
        raise ValueError(f"every {leaderboard.family} combination failed; first error: {best.error}")
    return best


def fit_best(family: str, row: LeaderboardRow, split: DatasetSplit) -> TrainedModel:
    """Retrain the selected combination on the training partition with its recorded seed."""
    return train_family(family, row.params, row.seed, split.train.features, split.train.labels)


def compare_best(models: dict[str, TrainedModel], params: dict[str, dict], split: DatasetSplit) -> list[ComparisonRow]:
    """Best model of each family on the test partition, ranked by weighted F."""
    if BENCHMARK not in models:
        raise ValueError("the LR benchmark is required for the comparison")
    rows = []
    for family in FAMILIES:
        if family not in models:
            continue
        report = evaluate(models[family].predict_proba(split.test.features), split.test.labels, split.train.positive_rate)
        rows.append(ComparisonRow(
            family=family,
            label=family_label(family),
            params=params.get(family, {}),
            accuracy=report.accuracy,
            tp_rate=report.tp_rate,
            fp_rate=report.fp_rate,
            auc=report.auc,
            f_weighted=report.f_weighted,
            undefined=report.undefined,
        ))
    ordered = sorted(rows, key=lambda r: (-r.f_weighted, FAMILIES.index(r.family)))
    return [replace(row, rank=rank) for rank, row in enumerate(ordered, start=1)]
