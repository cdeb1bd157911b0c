import logging
from dataclasses import asdict, dataclass
from typing import ClassVar

import numpy as np

from direction_lab.data.validators import require_training_data, validate_window
from .base import TrainedModel, to_targets

logger = logging.getLogger(__name__)

LEAF = -1


@dataclass(frozen=True)
class RfParams:
    mtry: int = 3
    n_trees: int = 100
    seed: int = 0

    def __post_init__(self):
        validate_window(self.mtry, "mtry")
        validate_window(self.n_trees, "n_trees")


@dataclass(frozen=True)
class Tree:
    """Flat CART tree. Rows go left when x[feature] <= threshold; leaves have feature == LEAF."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray  # fraction of +1 among the training rows reaching the node

    def leaf_values(self, X: np.ndarray) -> np.ndarray:
        node = np.zeros(X.shape[0], dtype=int)
        active = self.feature[node] != LEAF
        while np.any(active):
            rows = np.flatnonzero(active)
            at = node[rows]
            go_left = X[rows, self.feature[at]] <= self.threshold[at]
            node[rows] = np.where(go_left, self.left[at], self.right[at])
            active = self.feature[node] != LEAF
        return self.value[node]

    def votes(self, X: np.ndarray) -> np.ndarray:
        return (self.leaf_values(X) >= 0.5).astype(int)

    def to_dict(self) -> dict:
        return {k: getattr(self, k).tolist() for k in ("feature", "threshold", "left", "right", "value")}

    @classmethod
    def from_dict(cls, payload: dict) -> "Tree":
        return cls(
            feature=np.asarray(payload["feature"], dtype=int),
            threshold=np.asarray(payload["threshold"], dtype=float),
            left=np.asarray(payload["left"], dtype=int),
            right=np.asarray(payload["right"], dtype=int),
            value=np.asarray(payload["value"], dtype=float),
        )


@dataclass(frozen=True)
class ForestModel(TrainedModel):
    params: RfParams
    n_features: int
    trees: tuple[Tree, ...]
    family: ClassVar[str] = "rf"

    def _probabilities(self, X: np.ndarray) -> np.ndarray:
        votes = np.zeros(X.shape[0], dtype=int)
        for tree in self.trees:
            votes += tree.votes(X)
        return votes / len(self.trees)

    def to_dict(self) -> dict:
        return {
            "params": asdict(self.params),
            "n_features": self.n_features,
            "trees": [tree.to_dict() for tree in self.trees],
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "ForestModel":
        return cls(
            params=RfParams(**payload["params"]),
            n_features=payload["n_features"],
            trees=tuple(Tree.from_dict(t) for t in payload["trees"]),
        )


# Split search
def gini(positives: np.ndarray, totals: np.ndarray) -> np.ndarray:
    share = positives / totals
    return 2.0 * share * (1.0 - share)


def best_split_on_feature(values: np.ndarray, targets: np.ndarray) -> tuple[float, float] | None:
    """Largest Gini decrease over midpoints between distinct values, lowest threshold on ties."""
    order = np.argsort(values, kind="stable")
    sorted_values = values[order]
    boundaries = np.flatnonzero(sorted_values[1:] > sorted_values[:-1])
    if boundaries.size == 0:
        return None

    n = values.size
    cumulative = np.cumsum(targets[order])
    left_n = boundaries + 1.0
    left_pos = cumulative[boundaries]
    right_n = n - left_n
    right_pos = cumulative[-1] - left_pos

    parent = gini(np.array([cumulative[-1]]), np.array([float(n)]))[0]
    children = (left_n * gini(left_pos, left_n) + right_n * gini(right_pos, right_n)) / n
    decrease = parent - children
    best = int(np.argmax(decrease))
    threshold = (sorted_values[boundaries[best]] + sorted_values[boundaries[best] + 1]) / 2.0
    return float(decrease[best]), float(threshold)


def find_split(X: np.ndarray, targets: np.ndarray, candidates: np.ndarray) -> tuple[int, float] | None:
    best = None
    for feature in candidates:
        found = best_split_on_feature(X[:, feature], targets)
        if found is None:
            continue
        decrease, threshold = found
        if best is None or decrease > best[0]:
            best = (decrease, int(feature), threshold)
    return None if best is None else (best[1], best[2])


# Growing
def grow_tree(X: np.ndarray, targets: np.ndarray, mtry: int, rng: np.random.Generator) -> Tree:
    """Grow an unpruned CART tree to purity, sampling `mtry` candidate features per node."""
    n_features = X.shape[1]
    feature, threshold, left, right, value = [], [], [], [], []

    def new_node(rows: np.ndarray) -> int:
        feature.append(LEAF)
        threshold.append(0.0)
        left.append(LEAF)
        right.append(LEAF)
        value.append(float(targets[rows].mean()))
        return len(feature) - 1

    stack = [(new_node(np.arange(X.shape[0])), np.arange(X.shape[0]))]
    while stack:
        node, rows = stack.pop()
        if value[node] in (0.0, 1.0):
            continue
        sampled = np.sort(rng.choice(n_features, size=mtry, replace=False))
        split = find_split(X[rows], targets[rows], sampled)
        if split is None:
            # every sampled feature is constant here; fall back to the rest in index order
            rest = np.setdiff1d(np.arange(n_features), sampled)
            split = find_split(X[rows], targets[rows], rest)
        if split is None:
            continue
        feature[node], threshold[node] = split
        goes_left = X[rows, split[0]] <= split[1]
        left_rows, right_rows = rows[goes_left], rows[~goes_left]
        left[node] = new_node(left_rows)
        right[node] = new_node(right_rows)
        stack.append((right[node], right_rows))
        stack.append((left[node], left_rows))

    return Tree(
        feature=np.asarray(feature, dtype=int),
        threshold=np.asarray(threshold, dtype=float),
        left=np.asarray(left, dtype=int),
        right=np.asarray(right, dtype=int),
        value=np.asarray(value, dtype=float),
    )


def train_rf(X, y, params: RfParams = RfParams()) -> ForestModel:
    X, y = require_training_data(X, y)
    if X.shape[0] < 2:
        raise ValueError("random forest needs at least 2 rows")
    if params.mtry > X.shape[1]:
        raise ValueError(f"mtry={params.mtry} exceeds the {X.shape[1]} available features")

    targets = to_targets(y)
    rng = np.random.default_rng(params.seed)
    trees = []
    for _ in range(params.n_trees):
        sample = rng.integers(0, X.shape[0], X.shape[0])
        trees.append(grow_tree(X[sample], targets[sample], params.mtry, rng))

    logger.debug("rf grew %d trees (mtry=%d)", len(trees), params.mtry)
    return ForestModel(params=params, n_features=X.shape[1], trees=tuple(trees))
