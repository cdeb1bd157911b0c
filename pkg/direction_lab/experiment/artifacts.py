"""Models and preprocessing state persisted by a run, consumed by validation."""
import json
from dataclasses import dataclass
from pathlib import Path

from direction_lab.data.indicators import IndicatorConfig
from direction_lab.data.market_data import NormalizationParams
from direction_lab.data.utils import sha256_file
from direction_lab.models import TrainedModel, load_model, save_model
from .families import BENCHMARK
from .grids import FAMILIES
from .pipeline import ModeResult

PIPELINE_VERSION = 1
PIPELINE_FILE = "pipeline.json"


@dataclass(frozen=True)
class PipelineRecord:
    mode: str
    indicators: IndicatorConfig
    normalizer: NormalizationParams | None
    train_prior: float
    best_params: dict[str, dict]
    best_seeds: dict[str, int]

    def to_dict(self) -> dict:
        return {
            "format_version": PIPELINE_VERSION,
            "mode": self.mode,
            "indicators": self.indicators.to_dict(),
            "normalizer": None if self.normalizer is None else self.normalizer.to_dict(),
            "train_prior": self.train_prior,
            "best_params": self.best_params,
            "best_seeds": self.best_seeds,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "PipelineRecord":
        if payload.get("format_version") != PIPELINE_VERSION:
            raise ValueError(f"Unsupported pipeline format version: {payload.get('format_version')!r}")
        normalizer = payload.get("normalizer")
        return cls(
            mode=payload["mode"],
            indicators=IndicatorConfig(**payload["indicators"]),
            normalizer=None if normalizer is None else NormalizationParams.from_dict(normalizer),
            train_prior=float(payload["train_prior"]),
            best_params=payload["best_params"],
            best_seeds={k: int(v) for k, v in payload["best_seeds"].items()},
        )


def models_dir(out_dir: str | Path, mode: str) -> Path:
    return Path(out_dir) / "models" / mode


def save_artifacts(out_dir: str | Path, result: ModeResult, cfg: IndicatorConfig) -> dict[str, str]:
    """Write every best model plus pipeline.json; return sha256 hashes keyed by relative path."""
    out_dir = Path(out_dir)
    target = models_dir(out_dir, result.mode)
    written = [save_model(result.models[family], target / f"{family}.json") for family in FAMILIES if family in result.models]

    record = PipelineRecord(
        mode=result.mode,
        indicators=cfg,
        normalizer=result.data.normalizer,
        train_prior=result.data.split.train.positive_rate,
        best_params=result.best_params,
        best_seeds=result.best_seeds,
    )
    pipeline_path = target / PIPELINE_FILE
    pipeline_path.write_text(json.dumps(record.to_dict(), sort_keys=True, indent=2) + "\n", encoding="utf-8")
    written.append(pipeline_path)
    return {path.relative_to(out_dir).as_posix(): sha256_file(path) for path in written}


def load_pipeline(out_dir: str | Path, mode: str) -> PipelineRecord:
    path = models_dir(out_dir, mode) / PIPELINE_FILE
    if not path.is_file():
        raise ValueError(f"missing run artifacts: {path} not found (run `directionlab run` first)")
    try:
        return PipelineRecord.from_dict(json.loads(path.read_text(encoding="utf-8")))
    except (json.JSONDecodeError, KeyError, TypeError) as e:
        raise ValueError(f"{path}: malformed pipeline record ({e})") from None


def load_models(out_dir: str | Path, mode: str) -> dict[str, TrainedModel]:
    """Every saved family model of one mode; the LR benchmark must be among them."""
    target = models_dir(out_dir, mode)
    models = {
        family: load_model(target / f"{family}.json")
        for family in FAMILIES
        if (target / f"{family}.json").is_file()
    }
    if BENCHMARK not in models:
        raise ValueError(f"benchmark model missing: {target / 'lr.json'} is required (LR)")
    return models
