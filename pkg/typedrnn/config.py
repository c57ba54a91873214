"""Hyperparameters, run configuration and key=value config files."""

from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .errors import ConfigError

TaskName = Literal["relatedness", "entailment"]
EncoderKind = Literal["typed", "positional", "relational", "single"]
ActivationName = Literal["tanh", "relu"]

# Tuned settings per task (SICK-R / SICK-E).
TASK_DEFAULTS: dict[str, dict[str, Any]] = {
    "relatedness": {
        "learning_rate": 0.01,
        "batch_size": 25,
        "classifier_hidden": 100,
        "hidden_size": 130,
        "dep_embed_size": 30,
        "epochs": 14,
        "weight_decay": 0.0001,
    },
    "entailment": {
        "learning_rate": 0.015,
        "batch_size": 10,
        "classifier_hidden": 100,
        "hidden_size": 100,
        "dep_embed_size": 10,
        "epochs": 26,
        "weight_decay": 0.0001,
    },
}

PATH_KEYS = ("sick_path", "conllu_a", "conllu_b", "embeddings", "word_list", "out_dir")


class Hyperparams(BaseModel):
    """Model and training settings."""

    model_config = ConfigDict(extra="forbid")

    task: TaskName = "relatedness"
    encoder_kind: EncoderKind = "typed"
    learning_rate: float = Field(0.01, gt=0)
    batch_size: int = Field(25, gt=0)
    classifier_hidden: int = Field(100, gt=0)
    hidden_size: int = Field(130, gt=0)
    dep_embed_size: int = Field(30, gt=0)
    epochs: int = Field(14, gt=0)
    weight_decay: float = Field(0.0001, ge=0)
    seed: int = Field(0, ge=0)
    max_offset: int = Field(10, gt=0)
    coarse_relations: bool = False
    decay_mode: Literal["optimizer", "loss"] = "optimizer"
    composition_activation: ActivationName = "tanh"
    dependency_activation: ActivationName = "relu"
    epsilon: float = Field(1e-8, gt=0)

    @property
    def num_classes(self) -> int:
        return 5 if self.task == "relatedness" else 3

    @classmethod
    def for_task(cls, task: str, **overrides: Any) -> "Hyperparams":
        """Task defaults with overrides applied."""
        if task not in TASK_DEFAULTS:
            raise ConfigError(f"Unknown task: {task} (available: {', '.join(TASK_DEFAULTS)})")
        try:
            return cls(**{**TASK_DEFAULTS[task], **overrides, "task": task})
        except ValidationError as e:
            raise ConfigError(_describe(e)) from e


class RunConfig(BaseModel):
    """Everything a training run needs."""

    model_config = ConfigDict(extra="forbid")

    sick_path: Path
    conllu_a: Path
    conllu_b: Path
    embeddings: Path
    word_list: Path | None = None
    out_dir: Path = Path("runs")
    hp: Hyperparams = Field(default_factory=Hyperparams)

    def check_paths(self) -> None:
        """Raise ConfigError naming the first input path that does not exist."""
        for key in ("sick_path", "conllu_a", "conllu_b", "embeddings", "word_list"):
            path = getattr(self, key)
            if path is not None and not Path(path).exists():
                raise ConfigError(f"{key}: path does not exist: {path}")

    def to_flat(self) -> dict[str, Any]:
        """Flat key → value mapping, the inverse of from_flat."""
        flat: dict[str, Any] = {
            key: str(getattr(self, key)) for key in PATH_KEYS if getattr(self, key) is not None
        }
        flat.update(self.hp.model_dump())
        return flat

    @classmethod
    def from_flat(cls, values: dict[str, Any]) -> "RunConfig":
        """
        Build from flat keys mirroring RunConfig paths and Hyperparams fields.

        Hyperparameters start from the defaults of the configured task.
        """
        unknown = sorted(set(values) - set(PATH_KEYS) - set(Hyperparams.model_fields))
        if unknown:
            raise ConfigError(f"Unknown config keys: {', '.join(unknown)}")

        hp_values = {k: v for k, v in values.items() if k in Hyperparams.model_fields}
        task = hp_values.pop("task", "relatedness")
        hp = Hyperparams.for_task(task, **hp_values)
        try:
            return cls(hp=hp, **{k: v for k, v in values.items() if k in PATH_KEYS})
        except ValidationError as e:
            raise ConfigError(_describe(e)) from e


def parse_kv_text(text: str) -> dict[str, str]:
    """Parse flat key=value lines; blank lines and '#' comments are ignored."""
    values: dict[str, str] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {line_no}: expected key=value, got {raw!r}")
        key, value = line.split("=", 1)
        values[key.strip()] = value.strip()
    return values


def parse_overrides(items: list[str] | None) -> dict[str, str]:
    """--set key=value items from the command line."""
    return parse_kv_text("\n".join(items or []))


def load_run_config(path: str | Path | None, overrides: dict[str, Any] | None = None) -> RunConfig:
    """Config file values (if any) with overrides on top."""
    values: dict[str, Any] = {}
    if path is not None:
        if not Path(path).exists():
            raise ConfigError(f"config: path does not exist: {path}")
        values.update(parse_kv_text(Path(path).read_text(encoding="utf-8")))
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return RunConfig.from_flat(values)


def write_run_config(config: RunConfig, path: str | Path) -> None:
    lines = [f"{key}={value}" for key, value in config.to_flat().items()]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _describe(error: ValidationError) -> str:
    return "; ".join(
        f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in error.errors()
    )
