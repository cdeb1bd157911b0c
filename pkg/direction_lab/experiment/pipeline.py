"""From price series to trained best models, one mode at a time."""
import logging
from dataclasses import dataclass, field

from direction_lab.data.discretizer import discretize
from direction_lab.data.indicators import FeatureMatrix, IndicatorConfig, compute_features
from direction_lab.data.market_data import (
    DatasetSplit, LabeledDataset, NormalizationParams, PriceSeries,
    aligned_closes, chronological_split, make_labels, normalize_split,
)
from direction_lab.models import TrainedModel
from .grids import FAMILIES, GridSpec
from .runner import ComparisonRow, Leaderboard, compare_best, fit_best, run_grid, select_best

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PreparedData:
    mode: str
    split: DatasetSplit
    normalizer: NormalizationParams | None
    features: FeatureMatrix


@dataclass(frozen=True)
class ModeResult:
    mode: str
    data: PreparedData
    leaderboards: dict[str, Leaderboard]
    models: dict[str, TrainedModel]
    best_params: dict[str, dict] = field(default_factory=dict)
    best_seeds: dict[str, int] = field(default_factory=dict)
    comparison: list[ComparisonRow] = field(default_factory=list)


def prepare_dataset(series: PriceSeries, cfg: IndicatorConfig, mode: str) -> tuple[LabeledDataset, FeatureMatrix]:
    """Labeled rows of one series: raw indicator values, or their trend signs in discrete mode."""
    features = compute_features(series, cfg)
    if mode == "continuous":
        return make_labels(series, features), features
    if mode == "discrete":
        signs = discretize(features, aligned_closes(series, features.dates))
        return make_labels(series, signs), features
    raise ValueError(f"Invalid mode: {mode}")


def prepare_split(series: PriceSeries, cfg: IndicatorConfig, mode: str, train_fraction: float) -> PreparedData:
    """Chronological split; continuous features are min-max scaled with training-partition ranges."""
    dataset, features = prepare_dataset(series, cfg, mode)
    split = chronological_split(dataset, train_fraction)
    normalizer = None
    if mode == "continuous":
        split, normalizer = normalize_split(split)
    logger.info("%s dataset: %d train rows, %d test rows", mode, len(split.train), len(split.test))
    return PreparedData(mode=mode, split=split, normalizer=normalizer, features=features)


def run_mode(data: PreparedData, grids: dict[str, GridSpec], master_seed: int, jobs: int = 1) -> ModeResult:
    """Grid-search every family, retrain each winner and compare the winners."""
    leaderboards, models, best_params, best_seeds = {}, {}, {}, {}
    for family in FAMILIES:
        board = run_grid(family, grids[family], data.split, data.mode, master_seed, jobs)
        best = select_best(board)
        leaderboards[family] = board
        models[family] = fit_best(family, best, data.split)
        best_params[family] = best.params
        best_seeds[family] = best.seed
        logger.info("best %s (%s): %s accuracy %.4f", family, data.mode, best.params, best.accuracy)
    comparison = compare_best(models, best_params, data.split)
    return ModeResult(
        mode=data.mode,
        data=data,
        leaderboards=leaderboards,
        models=models,
        best_params=best_params,
        best_seeds=best_seeds,
        comparison=comparison,
    )
