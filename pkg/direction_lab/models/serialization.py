import json
from pathlib import Path

from .base import TrainedModel
from .forest import ForestModel
from .logistic import LogisticModel
from .mlp import MlpModel
from .naive_bayes import NaiveBayesModel
from .svm import SvmModel

FORMAT_VERSION = 1

MODEL_TYPES: dict[str, type[TrainedModel]] = {
    "ann": MlpModel,
    "nb": NaiveBayesModel,
    "rf": ForestModel,
    "lr": LogisticModel,
    "svm": SvmModel,
}


def model_to_dict(model: TrainedModel) -> dict:
    if model.family not in MODEL_TYPES:
        raise ValueError(f"Unknown model family: {model.family}")
    return {"format_version": FORMAT_VERSION, "family": model.family, "model": model.to_dict()}


def model_from_dict(document: dict) -> TrainedModel:
    version = document.get("format_version")
    if version != FORMAT_VERSION:
        raise ValueError(f"Unsupported model format version: {version!r}")
    family = document.get("family")
    if family not in MODEL_TYPES:
        raise ValueError(f"Unknown model family: {family!r}")
    try:
        return MODEL_TYPES[family].from_dict(document["model"])
    except (KeyError, TypeError) as e:
        raise ValueError(f"Malformed {family} model document: {e}") from None


def dumps_model(model: TrainedModel) -> str:
    return json.dumps(model_to_dict(model), sort_keys=True, indent=2, allow_nan=False)


def save_model(model: TrainedModel, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_model(model) + "\n", encoding="utf-8")
    return path


def load_model(path: str | Path) -> TrainedModel:
    path = Path(path)
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ValueError(f"{path}: not a valid model document ({e.msg})") from None
    return model_from_dict(document)
