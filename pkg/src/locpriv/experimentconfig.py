#!/usr/bin/env python3
"""
Experiment configuration.

A configuration is a JSON object whose keys are the ExperimentConfig fields;
an optional "profile" key ("desk" or "paper") supplies the scale defaults
that the other keys then override. Unknown keys are rejected.

    {"profile": "desk", "world": "q2", "lambdas": [0, 1, 5], "seeds": [0, 1, 2]}
"""

import json
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Dict, List, Optional

from .a2cparameters import TrainConfig
from .actorcritic import MEAN_MODE, SAMPLE_MODE
from .errors import ConfigError

LAMBDA_RANGE = (0.0, 20.0)
DEFAULT_LAMBDAS = [0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0]
METHODS = ("a2c", "myopic")

PROFILES: Dict[str, Dict[str, Any]] = {
    "desk": {"episodes": 500, "horizon": 100, "rollouts": 50, "actor_lr": 1e-3},
    "paper": {"episodes": 5000, "horizon": 300, "rollouts": 100},
}


@dataclass(frozen=True)
class ExperimentConfig:
    world: str = "q2"                  # q0 | q1 | q2 | path of a transition-matrix JSON file
    side: int = 4
    lambdas: List[float] = field(default_factory=lambda: list(DEFAULT_LAMBDAS))
    dbar: float = 0.0
    horizon: int = 100                 # n
    episodes: int = 500                # N
    rollouts: int = 50                 # R
    seeds: List[int] = field(default_factory=lambda: [0])
    out: str = "results"
    methods: List[str] = field(default_factory=lambda: list(METHODS))
    eval_mode: str = MEAN_MODE
    gamma: float = 0.99
    critic_lr: float = 1e-3
    actor_lr: float = 1e-4
    ba_tol: float = 1e-9
    ba_max_iter: int = 500
    workers: int = 1

    def __post_init__(self) -> None:
        if not self.world:
            raise ConfigError("world selector must not be empty")
        if self.side < 1:
            raise ConfigError(f"grid side must be >= 1, got {self.side}")
        if not self.lambdas:
            raise ConfigError("lambda sweep must not be empty")
        low, high = LAMBDA_RANGE
        for lam in self.lambdas:
            if not low <= lam <= high:
                raise ConfigError(f"lambda {lam} outside [{low}, {high}]")
        if self.dbar < 0.0:
            raise ConfigError(f"dbar must be nonnegative, got {self.dbar}")
        if min(self.horizon, self.episodes, self.rollouts, self.ba_max_iter, self.workers) < 1:
            raise ConfigError("horizon, episodes, rollouts, ba_max_iter and workers must be >= 1")
        if not self.seeds:
            raise ConfigError("seed list must not be empty")
        if not self.methods or any(m not in METHODS for m in self.methods):
            raise ConfigError(f"methods must be a nonempty subset of {METHODS}, got {self.methods}")
        if self.eval_mode not in (MEAN_MODE, SAMPLE_MODE):
            raise ConfigError(f"eval_mode must be '{MEAN_MODE}' or '{SAMPLE_MODE}'")
        if not 0.0 < self.gamma <= 1.0 or self.ba_tol <= 0.0:
            raise ConfigError("gamma must lie in (0, 1] and ba_tol must be positive")

    @classmethod
    def from_profile(cls, profile: str = "desk") -> "ExperimentConfig":
        if profile not in PROFILES:
            raise ConfigError(f"unknown profile '{profile}', choose from {sorted(PROFILES)}")
        return cls(**PROFILES[profile])

    @classmethod
    def from_dict(cls, data: Dict[str, Any], profile: Optional[str] = None) -> "ExperimentConfig":
        values = dict(data)
        chosen = profile or values.pop("profile", None) or "desk"
        values.pop("profile", None)
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(values) - known)
        if unknown:
            raise ConfigError(f"unknown configuration keys: {unknown}")
        if values.get("methods") == ["both"] or values.get("methods") == "both":
            values["methods"] = list(METHODS)
        base = cls.from_profile(chosen)
        try:
            return replace(base, **values)
        except TypeError as e:
            raise ConfigError(f"invalid configuration: {e}") from e

    def with_overrides(self, **overrides: Any) -> "ExperimentConfig":
        """Returns a copy with every non-None override applied"""
        values = {k: v for k, v in overrides.items() if v is not None}
        return replace(self, **values) if values else self

    def train_config(self, lam: float, seed: int) -> TrainConfig:
        return TrainConfig(episodes=self.episodes, horizon=self.horizon, gamma=self.gamma, lam=lam,
                           dbar=self.dbar, critic_lr=self.critic_lr, actor_lr=self.actor_lr, seed=seed)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def load_config(file_path: Path, profile: Optional[str] = None) -> ExperimentConfig:
    """Reads an experiment configuration from JSON.

    Raises:
        ConfigError: if the file is missing, is not a JSON object or holds invalid values.
    """
    if not file_path.is_file():
        raise ConfigError(f"config file '{file_path}' does not exist")
    try:
        data = json.loads(file_path.read_text(encoding="utf-8"))
    except ValueError as e:
        raise ConfigError(f"error parsing {file_path}: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"{file_path} must contain a JSON object")
    return ExperimentConfig.from_dict(data, profile)
