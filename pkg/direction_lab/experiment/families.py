from collections.abc import Callable

import numpy as np

from direction_lab.models import (
    Kernel, LrParams, MlpParams, NbParams, RfParams, SvmParams, TrainedModel,
    train_lr, train_mlp, train_nb, train_rf, train_smo,
)

BENCHMARK = "lr"

DISPLAY_NAMES = {
    "ann": "ANN",
    "svm": "SVM",
    "nb": "NB",
    "rf": "RF",
    "lr": "LR",
}


def family_label(family: str) -> str:
    label = DISPLAY_NAMES.get(family, family.upper())
    return f"{label} (Benchmark)" if family == BENCHMARK else label


def derive_seed(master_seed: int, index: int) -> int:
    """Seed of the index-th grid combination, independent of execution order."""
    return int(np.random.SeedSequence([master_seed, index]).generate_state(1)[0])


# Params
def _ann_params(combo: dict, seed: int) -> MlpParams:
    return MlpParams(
        hidden_neurons=int(combo["hidden_neurons"]),
        epochs=int(combo["epochs"]),
        momentum=float(combo["momentum"]),
        learning_rate=float(combo["learning_rate"]),
        seed=seed,
    )


def _svm_params(combo: dict, seed: int) -> SvmParams:
    kind = combo.get("kernel", "polynomial")
    kernel = Kernel(
        kind=kind,
        degree=int(combo.get("degree", 1)),
        gamma=float(combo.get("gamma", 0.0)),
    )
    return SvmParams(kernel=kernel, C=float(combo["C"]))


def _nb_params(combo: dict, seed: int) -> NbParams:
    return NbParams(variant=combo.get("variant", "gaussian"))


def _rf_params(combo: dict, seed: int) -> RfParams:
    return RfParams(mtry=int(combo["mtry"]), n_trees=int(combo["n_trees"]), seed=seed)


def _lr_params(combo: dict, seed: int) -> LrParams:
    return LrParams(l2=float(combo.get("l2", 0.0)))


PARAM_BUILDERS: dict[str, Callable[[dict, int], object]] = {
    "ann": _ann_params,
    "svm": _svm_params,
    "nb": _nb_params,
    "rf": _rf_params,
    "lr": _lr_params,
}

TRAINERS: dict[str, Callable] = {
    "ann": train_mlp,
    "svm": train_smo,
    "nb": train_nb,
    "rf": train_rf,
    "lr": train_lr,
}


def build_params(family: str, combo: dict, seed: int):
    if family not in PARAM_BUILDERS:
        raise ValueError(f"Invalid model family: {family}")
    try:
        return PARAM_BUILDERS[family](combo, seed)
    except KeyError as e:
        raise ValueError(f"{family} combination is missing parameter {e.args[0]!r}") from None
    except TypeError as e:
        raise ValueError(f"invalid {family} parameters {combo}: {e}") from None


def train_family(family: str, combo: dict, seed: int, X: np.ndarray, y: np.ndarray) -> TrainedModel:
    return TRAINERS[family](X, y, build_params(family, combo, seed))
