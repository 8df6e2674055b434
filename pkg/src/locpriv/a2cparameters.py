#!/usr/bin/env python3

from dataclasses import asdict, dataclass
from typing import Any, Dict, Tuple

from .actorcritic import KERNEL_SCORE, PAIR_SCORE
from .errors import ConfigError


@dataclass(frozen=True)
class TrainConfig:
    episodes: int = 500            # N
    horizon: int = 100             # n
    gamma: float = 0.99            # discount
    lam: float = 0.0               # Lagrange multiplier
    dbar: float = 0.0              # distortion reference
    critic_lr: float = 1e-3
    actor_lr: float = 1e-4
    beta1: float = 0.9
    beta2: float = 0.999
    adam_eps: float = 1e-8
    hidden: Tuple[int, int] = (128, 128)
    kernel_floor: float = 1e-6
    seed: int = 0
    smoothing_window: int = 100    # learning-curve trailing mean
    log_every: int = 50            # episodes between progress messages
    actor_score: str = KERNEL_SCORE  # kernel: every sampled slice | pair: realized (x, x_prev) slice only
    normalize_advantage: bool = True
    advantage_decay: float = 0.99  # running TD-error statistics

    def __post_init__(self) -> None:
        if self.episodes < 1:
            raise ConfigError(f"episodes must be >= 1, got {self.episodes}")
        if self.horizon < 1:
            raise ConfigError(f"horizon must be >= 1, got {self.horizon}")
        if not 0.0 < self.gamma <= 1.0:
            raise ConfigError(f"gamma must lie in (0, 1], got {self.gamma}")
        if self.lam < 0.0 or self.dbar < 0.0:
            raise ConfigError(f"lambda and dbar must be nonnegative, got {self.lam}, {self.dbar}")
        if self.critic_lr <= 0.0 or self.actor_lr <= 0.0:
            raise ConfigError("learning rates must be positive")
        if not (0.0 <= self.beta1 < 1.0 and 0.0 <= self.beta2 < 1.0) or self.adam_eps <= 0.0:
            raise ConfigError("invalid Adam hyper-parameters")
        if len(self.hidden) != 2 or min(self.hidden) < 1:
            raise ConfigError(f"two positive hidden widths required, got {self.hidden}")
        if not 0.0 <= self.kernel_floor < 0.01:
            raise ConfigError(f"kernel floor must lie in [0, 0.01), got {self.kernel_floor}")
        if self.smoothing_window < 1 or self.log_every < 1:
            raise ConfigError("smoothing_window and log_every must be >= 1")
        if self.actor_score not in (KERNEL_SCORE, PAIR_SCORE):
            raise ConfigError(f"actor_score must be kernel or pair, got {self.actor_score}")
        if not 0.0 < self.advantage_decay < 1.0:
            raise ConfigError(f"advantage_decay must lie in (0, 1), got {self.advantage_decay}")

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["hidden"] = list(self.hidden)
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "TrainConfig":
        values = dict(data)
        if "hidden" in values:
            values["hidden"] = tuple(values["hidden"])
        try:
            return cls(**values)
        except TypeError as e:
            raise ConfigError(f"invalid training configuration: {e}") from e


if __name__ == "__main__":
    print(TrainConfig(episodes=5000, horizon=300))
