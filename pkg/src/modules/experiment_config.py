"""
Experiment configuration model and its `key = value` file format.

Example file:

    # recovery probability vs extracted length, equal-magnitude taps
    n = 96
    m = 32
    p = 8
    k_list = 4
    me_list = 0, 8, 16, 24, 32, 40, 48, 56
    snr_db_list = 20
    dist = uniform
    trials = 500
    master_seed = 42
    noise_mode = Subsample
    arms = TraditionalShort, Proposed, BoundLong
"""
import logging
import math
from enum import Enum
from pathlib import Path
from typing import Dict, List, Union

from pydantic import BaseModel, ConfigDict, ValidationError, field_validator, model_validator

from modules.channel import TapDistribution
from modules.errors import InvalidConfigError
from modules.sensing import NoiseMode, pattern_capacity

logger = logging.getLogger(__name__)


class Arm(str, Enum):
    TRADITIONAL_SHORT = "TraditionalShort"
    PROPOSED = "Proposed"
    BOUND_LONG = "BoundLong"


LIST_FIELDS = {"k_list", "me_list", "snr_db_list", "dist", "arms"}
MAX_SEED = 2 ** 64


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    n: int = 96
    m: int = 32
    p: int = 8
    k_list: List[int] = [4]
    me_list: List[int] = list(range(0, 57, 8))
    snr_db_list: List[float] = [10.0, 15.0, 20.0]
    dist: List[TapDistribution] = [TapDistribution.EQUAL_MAGNITUDE_UNIFORM]
    trials: int = 500
    master_seed: int = 0
    noise_mode: NoiseMode = NoiseMode.SUBSAMPLE
    arms: List[Arm] = [Arm.TRADITIONAL_SHORT, Arm.PROPOSED, Arm.BOUND_LONG]

    @field_validator("k_list", "me_list", "snr_db_list", "dist", "arms")
    @classmethod
    def _non_empty_unique(cls, values):
        if not values:
            raise ValueError("list must not be empty")
        if len(set(values)) != len(values):
            raise ValueError("list must not contain duplicates")
        return values

    @field_validator("snr_db_list")
    @classmethod
    def _no_nan(cls, values):
        if any(math.isnan(v) for v in values):
            raise ValueError("SNR must not be NaN")
        if any(v == -math.inf for v in values):
            raise ValueError("SNR must be finite or +inf")
        return values

    @field_validator("me_list")
    @classmethod
    def _non_negative(cls, values):
        if any(v < 0 for v in values):
            raise ValueError("extracted lengths must be non-negative")
        return values

    @field_validator("n", "m", "p", "trials")
    @classmethod
    def _positive(cls, value):
        if value < 1:
            raise ValueError("must be a positive integer")
        return value

    @field_validator("master_seed")
    @classmethod
    def _seed_range(cls, value):
        if not 0 <= value < MAX_SEED:
            raise ValueError("seed must be an unsigned 64-bit integer")
        return value

    @model_validator(mode="after")
    def _check_grid(self):
        if self.n % self.p != 0:
            raise _keyed_error("p", f"{self.p} branches do not divide channel length {self.n}")
        if any(k < 1 or k > self.n for k in self.k_list):
            raise _keyed_error("k_list", f"every sparsity must lie in [1, {self.n}]")
        capacity = pattern_capacity(self.m, self.p)
        if max(self.me_list) > capacity:
            raise _keyed_error("me_list",
                               f"max extracted length {max(self.me_list)} exceeds the "
                               f"{capacity} patterns available for m={self.m}, p={self.p}")
        return self

    @property
    def training_rows(self) -> int:
        """Rows one training sequence must serve: the longest BoundLong matrix."""
        return self.m + max(self.me_list)

    @classmethod
    def create(cls, **fields) -> "ExperimentConfig":
        try:
            return cls(**fields)
        except ValidationError as e:
            raise _from_validation_error(e) from e

    def with_overrides(self, **overrides) -> "ExperimentConfig":
        updates = {key: value for key, value in overrides.items() if value is not None}
        if not updates:
            return self
        return ExperimentConfig.create(**{**self.model_dump(), **updates})


class _KeyedValueError(ValueError):
    def __init__(self, key: str, message: str):
        super().__init__(message)
        self.key = key


def _keyed_error(key: str, message: str) -> ValueError:
    return _KeyedValueError(key, message)


def _from_validation_error(e: ValidationError) -> InvalidConfigError:
    error = e.errors()[0]
    loc = error.get("loc") or ()
    key = str(loc[0]) if loc else None
    message = error.get("msg", "invalid value")
    cause = (error.get("ctx") or {}).get("error")
    if isinstance(cause, _KeyedValueError):
        key = cause.key
        message = str(cause)
    if key is None:
        return InvalidConfigError(f"invalid config: {message}")
    return InvalidConfigError(f"invalid config key '{key}': {message}", key=key)


def parse_config_text(text: str) -> Dict[str, Union[str, List[str]]]:
    """Parse `key = value` lines into raw strings; list fields are split on commas."""
    fields: Dict[str, Union[str, List[str]]] = {}
    known = set(ExperimentConfig.model_fields)
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidConfigError(f"line {line_number}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in known:
            raise InvalidConfigError(f"unknown config key '{key}' on line {line_number}", key=key)
        if key in fields:
            raise InvalidConfigError(f"duplicate config key '{key}' on line {line_number}", key=key)
        if not value:
            raise InvalidConfigError(f"config key '{key}' has no value", key=key)
        if key in LIST_FIELDS:
            fields[key] = [item.strip() for item in value.split(",") if item.strip()]
        else:
            fields[key] = value
    return fields


def load_experiment_config(path: Union[str, Path]) -> ExperimentConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise InvalidConfigError(f"cannot read config {path}: {e}") from e
    config = ExperimentConfig.create(**parse_config_text(text))
    logger.info(f"Loaded experiment config from {path}: {len(config.k_list)} K x "
                f"{len(config.me_list)} M_e x {len(config.snr_db_list)} SNR x "
                f"{len(config.dist)} dist, {config.trials} trials")
    return config
