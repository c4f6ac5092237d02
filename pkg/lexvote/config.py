"""
Configuration module.

Process settings come from the environment (a .env file is loaded if present):
  LEXVOTE_SEED        master seed used when no --seed / SEED is given
  LEXVOTE_MODEL_DIR   model bundle root served over HTTP (default ./models)
  LEXVOTE_LOG_LEVEL   default log level

Experiment settings come from flat KEY=VALUE files; every key has a CLI flag
that overrides it. Precedence: flag > config file > environment > default.
"""
import os
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field
from pathlib import Path

from dotenv import dotenv_values, load_dotenv

from lexvote.exceptions import ValidationError
from lexvote.models import BaggingParams, EnsembleSpec, FeatureExtractionConfig, TreeParams

load_dotenv()

LOG_LEVEL = os.getenv("LEXVOTE_LOG_LEVEL", "WARNING")

# Row set of the accuracy report, in report order
DEFAULT_CLASSIFIERS = ("UBC", "UC", "BC", "UB", "C", "B", "U", "mixed", "stump", "majority")
BASELINES = ("stump", "majority")


def model_dir() -> Path:
    return Path(os.getenv("LEXVOTE_MODEL_DIR", "./models"))


def env_seed(default: int = 0) -> int:
    """Seed from LEXVOTE_SEED, or default when unset."""
    raw = os.getenv("LEXVOTE_SEED")
    if raw is None or raw.strip() == "":
        return default
    return _to_int("LEXVOTE_SEED", raw)


def validate_classifier_name(name: str) -> str:
    """Return the canonical row label for a classifier name."""
    if name.lower() in BASELINES:
        return name.lower()
    return EnsembleSpec.parse(name).name


# ---------------------------------------------------------------------------
# Value parsers
# ---------------------------------------------------------------------------

def _to_int(key: str, raw) -> int:
    try:
        return int(raw)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{key}: expected an integer, got {raw!r}") from exc


def _to_float(key: str, raw) -> float:
    try:
        return float(raw)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{key}: expected a number, got {raw!r}") from exc


def _to_bool(key: str, raw) -> bool:
    if isinstance(raw, bool):
        return raw
    value = str(raw).strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ValidationError(f"{key}: expected a boolean, got {raw!r}")


def _to_list(key: str, raw) -> tuple[str, ...]:
    if isinstance(raw, (list, tuple)):
        items = [str(x) for x in raw]
    else:
        items = str(raw).split(",")
    return tuple(x.strip() for x in items if x.strip())


def _to_path(key: str, raw) -> Path:
    return Path(str(raw))


def _to_optional_int(key: str, raw) -> int | None:
    if raw is None or str(raw).strip().lower() in ("", "none"):
        return None
    return _to_int(key, raw)


# KEY -> parser
CONFIG_KEYS: dict[str, Callable] = {
    "TRAIN": _to_path,
    "TEST": _to_path,
    "STOPLIST": _to_path,
    "OUT": _to_path,
    "SEED": _to_int,
    "CLASSIFIERS": _to_list,
    "EXTERNAL": _to_list,
    "BAGS": _to_int,
    "RESAMPLE": _to_bool,
    "PRUNE": _to_bool,
    "MIN_LEAF": _to_int,
    "CONFIDENCE": _to_float,
    "UNIGRAM_MIN_FREQ": _to_int,
    "BIGRAM_MIN_FREQ": _to_int,
    "BIGRAM_G2": _to_float,
    "BIGRAM_TOP_N": _to_optional_int,
    "COOC_MIN_FREQ": _to_int,
    "COOC_G2": _to_float,
    "COOC_WINDOW": _to_int,
}


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything one reproducible run depends on."""
    train_path: Path | None = None
    test_path: Path | None = None
    stoplist_path: Path | None = None
    out_dir: Path = Path("lexvote-out")
    classifiers: tuple[str, ...] = DEFAULT_CLASSIFIERS
    external_paths: tuple[Path, ...] = ()
    features: FeatureExtractionConfig = field(default_factory=FeatureExtractionConfig)
    tree: TreeParams = field(default_factory=TreeParams)
    bagging: BaggingParams = field(default_factory=BaggingParams)

    def __post_init__(self):
        if not self.classifiers:
            raise ValidationError("at least one classifier must be requested")
        names = tuple(validate_classifier_name(c) for c in self.classifiers)
        if len(set(names)) != len(names):
            raise ValidationError(f"duplicate classifiers in {self.classifiers!r}")
        object.__setattr__(self, "classifiers", names)

    @property
    def seed(self) -> int:
        return self.bagging.seed


def read_config_file(path: str | Path) -> dict[str, str]:
    """Parse a flat KEY=VALUE file; unknown keys are rejected."""
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"config file not found: {path}")
    try:
        entries = dotenv_values(path)
    except UnicodeDecodeError as exc:
        raise ValidationError(f"{path}: not valid UTF-8 ({exc.reason})") from exc
    values = {}
    for key, value in entries.items():
        name = key.strip().upper()
        if name not in CONFIG_KEYS:
            raise ValidationError(f"{path}: unknown config key {key!r}")
        values[name] = value
    return values


def load_experiment_config(
    path: str | Path | None = None,
    overrides: Mapping[str, object] | None = None,
) -> ExperimentConfig:
    """
    Build an ExperimentConfig from (in increasing precedence) built-in
    defaults, LEXVOTE_SEED, an optional config file and explicit overrides
    keyed like the config file (None values are ignored).
    """
    raw: dict[str, object] = {}
    if os.getenv("LEXVOTE_SEED"):
        raw["SEED"] = env_seed()
    if path is not None:
        raw.update(read_config_file(path))
    for key, value in (overrides or {}).items():
        name = key.upper()
        if name not in CONFIG_KEYS:
            raise ValidationError(f"unknown config key {key!r}")
        if value is not None:
            raw[name] = value

    values = {key: CONFIG_KEYS[key](key, value) for key, value in raw.items()}

    features = FeatureExtractionConfig(
        unigram_min_freq=values.get("UNIGRAM_MIN_FREQ", 5),
        bigram_min_freq=values.get("BIGRAM_MIN_FREQ", 2),
        bigram_g2_threshold=values.get("BIGRAM_G2", 6.635),
        cooc_min_freq=values.get("COOC_MIN_FREQ", 2),
        cooc_g2_threshold=values.get("COOC_G2", 2.706),
        cooc_window=values.get("COOC_WINDOW", 2),
        bigram_top_n=values.get("BIGRAM_TOP_N"),
    )
    tree = TreeParams(
        min_leaf_instances=values.get("MIN_LEAF", 2),
        pruning_confidence=values.get("CONFIDENCE", 0.25),
        prune=values.get("PRUNE", True),
    )
    bagging = BaggingParams(
        num_bags=values.get("BAGS", 10),
        seed=values.get("SEED", 0),
        resample=values.get("RESAMPLE", True),
    )
    return ExperimentConfig(
        train_path=values.get("TRAIN"),
        test_path=values.get("TEST"),
        stoplist_path=values.get("STOPLIST"),
        out_dir=values.get("OUT", Path("lexvote-out")),
        classifiers=values.get("CLASSIFIERS", DEFAULT_CLASSIFIERS),
        external_paths=tuple(Path(p) for p in values.get("EXTERNAL", ())),
        features=features,
        tree=tree,
        bagging=bagging,
    )
