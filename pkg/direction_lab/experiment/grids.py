"""Parameter grids for each model family.

A grid is one or more blocks; each block maps parameter names to level
lists and expands to their cartesian product. Combinations are enumerated
block by block, the last parameter varying fastest.
"""
import itertools
import json
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

logger = logging.getLogger(__name__)

FAMILIES = ("ann", "svm", "nb", "rf", "lr")
PRESETS = ("paper-full", "smoke")
PRESET_ALIASES = {"published": "paper-full"}
MODES = ("continuous", "discrete")

SVM_C_LEVELS = (1.0, 10.0, 20.0, 30.0, 40.0, 100.0)
RF_TREE_LEVELS = (3, *range(25, 301, 25))


@dataclass(frozen=True)
class GridSpec:
    family: str
    blocks: tuple[dict[str, tuple], ...]
    truncated: bool = False

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"Invalid model family: {self.family}")
        if not self.blocks:
            raise ValueError(f"{self.family} grid is empty")
        for block in self.blocks:
            for name, levels in block.items():
                if len(levels) == 0:
                    raise ValueError(f"{self.family} grid parameter {name!r} has no levels")

    def combinations(self) -> list[dict]:
        combos = []
        for block in self.blocks:
            names = list(block)
            for values in itertools.product(*(block[n] for n in names)):
                combos.append(dict(zip(names, values)))
        return combos

    def __len__(self) -> int:
        return sum(int(np.prod([len(v) for v in block.values()])) for block in self.blocks)


# HELPERS
def _levels(start: float, stop: float, step: float) -> tuple[float, ...]:
    count = int(round((stop - start) / step)) + 1
    return tuple(round(start + i * step, 10) for i in range(count))


def _nb_variants(mode: str) -> tuple[str, ...]:
    return ("gaussian",) if mode == "continuous" else ("gaussian", "bernoulli")


def _block(**levels) -> dict[str, tuple]:
    return {name: tuple(values) for name, values in levels.items()}


# Presets
def published_grid(family: str, mode: str, full: bool = False) -> GridSpec:
    """Published levels; the ANN grid is cut to neurons 5..20 and epochs {250, 500} unless `full`."""
    if family == "ann":
        neurons = range(5, 51) if full else range(5, 21)
        epochs = range(250, 2001, 250) if full else (250, 500)
        block = _block(
            hidden_neurons=neurons,
            epochs=epochs,
            momentum=_levels(0.1, 0.9, 0.1),
            learning_rate=(0.1, 0.2, 0.3),
        )
        return GridSpec(family, (block,), truncated=not full)
    if family == "svm":
        return GridSpec(family, (
            _block(kernel=("polynomial",), degree=(1, 2, 3, 4), C=SVM_C_LEVELS),
            _block(kernel=("rbf",), gamma=_levels(0.0, 5.0, 0.1), C=SVM_C_LEVELS),
        ))
    if family == "nb":
        return GridSpec(family, (_block(variant=_nb_variants(mode)),))
    if family == "rf":
        return GridSpec(family, (_block(mtry=range(1, 10), n_trees=RF_TREE_LEVELS),))
    if family == "lr":
        return GridSpec(family, (_block(l2=(0.0,)),))
    raise ValueError(f"Invalid model family: {family}")


def smoke_grid(family: str, mode: str) -> GridSpec:
    if family == "ann":
        block = _block(hidden_neurons=(5, 10), epochs=(250,), momentum=(0.2,), learning_rate=(0.3,))
        return GridSpec(family, (block,))
    if family == "svm":
        return GridSpec(family, (
            _block(kernel=("polynomial",), degree=(1, 2), C=(1.0, 10.0)),
            _block(kernel=("rbf",), gamma=(0.1, 0.5), C=(1.0, 10.0)),
        ))
    if family == "nb":
        return GridSpec(family, (_block(variant=_nb_variants(mode)),))
    if family == "rf":
        return GridSpec(family, (_block(mtry=(3, 9), n_trees=(10, 30)),))
    if family == "lr":
        return GridSpec(family, (_block(l2=(0.0,)),))
    raise ValueError(f"Invalid model family: {family}")


def preset_grid(name: str, family: str, mode: str, full: bool = False) -> GridSpec:
    if mode not in MODES:
        raise ValueError(f"Invalid mode: {mode}")
    name = PRESET_ALIASES.get(name, name)
    if name == "paper-full":
        return published_grid(family, mode, full)
    if name == "smoke":
        return smoke_grid(family, mode)
    raise ValueError(f"Unknown grid preset: {name}. Expected one of: {', '.join(PRESETS)}")


# Grid files
def load_grid_file(path: str | Path, mode: str) -> dict[str, GridSpec]:
    """Read a JSON grid file: {family: {param: [levels]}} or {family: [{...}, {...}]}.

    Families the file leaves out use the smoke preset.
    """
    path = Path(path)
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ValueError(f"{path}: invalid grid JSON ({e.msg})") from None
    if not isinstance(document, dict):
        raise ValueError(f"{path}: grid file must hold a JSON object keyed by family")
    unknown = sorted(set(document) - set(FAMILIES))
    if unknown:
        raise ValueError(f"{path}: unknown model families: {', '.join(unknown)}")

    grids = {}
    for family in FAMILIES:
        if family not in document:
            logger.info("grid file has no %s entry; using the smoke grid", family)
            grids[family] = smoke_grid(family, mode)
            continue
        entry = document[family]
        blocks = entry if isinstance(entry, list) else [entry]
        if not all(isinstance(b, dict) for b in blocks):
            raise ValueError(f"{path}: {family} grid must be an object or a list of objects")
        grids[family] = GridSpec(family, tuple(
            {name: tuple(v if isinstance(v, list) else [v]) for name, v in b.items()} for b in blocks
        ))
    return grids


def resolve_grids(grid: str, mode: str, full: bool = False) -> dict[str, GridSpec]:
    """Grids for every family from a preset name or a path to a grid file."""
    if grid in PRESETS or grid in PRESET_ALIASES:
        return {family: preset_grid(grid, family, mode, full) for family in FAMILIES}
    if not Path(grid).is_file():
        raise ValueError(f"Unknown grid preset or missing grid file: {grid}")
    return load_grid_file(grid, mode)
