#!/usr/bin/env python3

import json
from pathlib import Path
from typing import Any, Dict, Optional

import pandas as pd

from .a2cparameters import TrainConfig
from .actorcritic import MEAN_MODE
from .adam import AdamState
from .checkpoint import Checkpoint, load_checkpoint, save_checkpoint
from .errors import ConfigError
from .gridworld import GridWorld
from .kernelprovider import ActorKernelProvider
from .mechanism import Mechanism
from .mlp import MlpParams

CURVE_COLUMNS = ["episode", "avg_leakage_bits", "avg_distortion", "avg_cost"]


class A2CMechanism(Mechanism):
    """A trained actor and critic together with their learning curves"""

    def __init__(self, world: GridWorld, config: TrainConfig, actor: MlpParams, critic: MlpParams,
                 actor_state: Optional[AdamState] = None, critic_state: Optional[AdamState] = None,
                 curves: Optional[pd.DataFrame] = None) -> None:
        super().__init__(world, config.lam)
        self.config: TrainConfig = config
        self.actor: MlpParams = actor
        self.critic: MlpParams = critic
        self.actor_state: Optional[AdamState] = actor_state
        self.critic_state: Optional[AdamState] = critic_state
        self.curves: pd.DataFrame = curves if curves is not None else pd.DataFrame(columns=CURVE_COLUMNS)

    @property
    def episodes_done(self) -> int:
        return len(self.curves)

    def provider(self, mode: str = MEAN_MODE) -> ActorKernelProvider:
        return ActorKernelProvider(self.actor, self.config.kernel_floor, mode)

    def smoothed_curves(self, window: Optional[int] = None) -> pd.DataFrame:
        """Trailing mean of the learning curves over `window` episodes"""
        width = window or self.config.smoothing_window
        smoothed = self.curves.copy()
        value_columns = CURVE_COLUMNS[1:]
        smoothed[value_columns] = self.curves[value_columns].rolling(width, min_periods=1).mean()
        return smoothed

    def training_manifest(self) -> Dict[str, Any]:
        final: Dict[str, float] = {}
        if self.episodes_done:
            last = self.smoothed_curves().iloc[-1]
            final = {column: float(last[column]) for column in CURVE_COLUMNS[1:]}
        return {"config": self.config.to_dict(), "world": self.world.name,
                "episodes": self.episodes_done, "final_metrics": final, "runtime_s": self.get_time()}

    def to_checkpoint(self) -> Checkpoint:
        optimizers: Dict[str, AdamState] = {}
        if self.actor_state is not None:
            optimizers["actor"] = self.actor_state
        if self.critic_state is not None:
            optimizers["critic"] = self.critic_state
        return Checkpoint(networks={"actor": self.actor, "critic": self.critic}, optimizers=optimizers,
                          metadata={"config": self.config.to_dict(), "world": self.world.name,
                                    "episodes": self.episodes_done})

    def save(self, directory: Path, stem: str = "a2c") -> Path:
        """Writes <stem>.ckpt.json, <stem>.training.json and <stem>.curve.csv"""
        directory.mkdir(parents=True, exist_ok=True)
        checkpoint_path = save_checkpoint(self.to_checkpoint(), directory / f"{stem}.ckpt.json")
        (directory / f"{stem}.training.json").write_text(
            json.dumps(self.training_manifest(), indent=2), encoding="utf-8")
        self.curves.to_csv(directory / f"{stem}.curve.csv", index=False, lineterminator="\n")
        return checkpoint_path

    @classmethod
    def load(cls, file_path: Path, world: GridWorld) -> "A2CMechanism":
        checkpoint = load_checkpoint(file_path)
        if "actor" not in checkpoint.networks or "critic" not in checkpoint.networks:
            raise ConfigError(f"checkpoint {file_path} lacks actor or critic")
        config = TrainConfig.from_dict(checkpoint.metadata.get("config", {}))
        if checkpoint.networks["actor"].layer_sizes[-1] != world.cell_count:
            raise ConfigError(f"checkpoint {file_path} does not fit world '{world.name}'")
        return cls(world, config, checkpoint.networks["actor"], checkpoint.networks["critic"],
                   checkpoint.optimizers.get("actor"), checkpoint.optimizers.get("critic"))
