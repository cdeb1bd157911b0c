"""Run configuration: command-line flags over a JSON config file over defaults."""
import json
import os
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

from direction_lab.data.indicators import IndicatorConfig
from direction_lab.data.validators import validate_fraction, validate_window
from direction_lab.experiment.grids import MODES

OUT_DIR = os.getenv("DIRECTIONLAB_OUT", "results")
SYNTHETIC = "synthetic"
RUN_MODES = (*MODES, "both")

# flag name -> IndicatorConfig field
INDICATOR_FLAGS = {
    "ma_window": "ma_window",
    "wma_window": "wma_window",
    "n": "n",
    "ema_short": "ema_short",
    "ema_long": "ema_long",
    "macd_signal": "macd_signal_n",
}


@dataclass(frozen=True)
class RunConfig:
    input: str | None = None
    validation: str | None = None
    mode: str = "both"
    grid: str = "smoke"
    train_frac: float = 0.75
    seed: int = 0
    out: str = OUT_DIR
    jobs: int = 1
    full: bool = False
    independent: bool = False
    indicators: IndicatorConfig = field(default_factory=IndicatorConfig)

    def __post_init__(self):
        if self.mode not in RUN_MODES:
            raise ValueError(f"Invalid mode: {self.mode}. Expected one of: {', '.join(RUN_MODES)}")
        for name in ("input", "validation", "out", "grid"):
            value = getattr(self, name)
            if value is not None and not str(value).strip():
                raise ValueError(f"{name} cannot be empty")
        validate_fraction(self.train_frac)
        validate_window(self.jobs, "jobs")

    @property
    def modes(self) -> tuple[str, ...]:
        return MODES if self.mode == "both" else (self.mode,)

    def echo(self) -> dict:
        """Settings that determine results; output location and worker count are left out."""
        payload = asdict(self)
        payload.pop("out")
        payload.pop("jobs")
        return payload


def load_config_file(path: str | Path) -> dict:
    path = Path(path)
    if not path.is_file():
        raise ValueError(f"config file not found: {path}")
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ValueError(f"{path}: invalid config JSON ({e.msg})") from None
    if not isinstance(document, dict):
        raise ValueError(f"{path}: config must be a JSON object")

    known = {f.name for f in fields(RunConfig)}
    unknown = sorted(set(document) - known)
    if unknown:
        raise ValueError(f"{path}: unknown config keys: {', '.join(unknown)}")
    indicators = document.get("indicators", {})
    if not isinstance(indicators, dict):
        raise ValueError(f"{path}: 'indicators' must be an object")
    unknown = sorted(set(indicators) - {f.name for f in fields(IndicatorConfig)})
    if unknown:
        raise ValueError(f"{path}: unknown indicator keys: {', '.join(unknown)}")
    return document


def resolve_config(config_path: str | None = None, indicator_flags: dict | None = None, **flags) -> RunConfig:
    """Build a RunConfig; flags left at None fall back to the config file, then to defaults."""
    document = load_config_file(config_path) if config_path else {}
    indicator_values = dict(document.pop("indicators", {}))
    for flag, value in (indicator_flags or {}).items():
        if value is not None:
            indicator_values[INDICATOR_FLAGS[flag]] = value

    values = {**document, **{k: v for k, v in flags.items() if v is not None}}
    try:
        return replace(RunConfig(**values), indicators=IndicatorConfig(**indicator_values))
    except TypeError as e:
        raise ValueError(f"invalid configuration: {e}") from None
