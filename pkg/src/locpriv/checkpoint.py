#!/usr/bin/env python3
"""
JSON checkpoints of trained networks.

    {"version": "locpriv-ckpt-1",
     "networks": {"actor": {"layers": [{"in", "out", "weights", "bias"}, ...]}, ...},
     "optimizers": {"actor": {...}, ...},
     "metadata": {...}}

Weights are written row-major as nested lists of shape (in, out).
"""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict

from .adam import AdamState
from .errors import ConfigError
from .mlp import MlpParams

CHECKPOINT_VERSION = "locpriv-ckpt-1"


@dataclass
class Checkpoint:
    networks: Dict[str, MlpParams]
    optimizers: Dict[str, AdamState] = field(default_factory=dict)
    metadata: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "version": CHECKPOINT_VERSION,
            "networks": {name: params.to_dict() for name, params in self.networks.items()},
            "optimizers": {name: state.to_dict() for name, state in self.optimizers.items()},
            "metadata": self.metadata,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Checkpoint":
        if data.get("version") != CHECKPOINT_VERSION:
            raise ConfigError(f"unsupported checkpoint version {data.get('version')!r}")
        networks = {name: MlpParams.from_dict(d) for name, d in data["networks"].items()}
        optimizers = {name: AdamState.from_dict(d) for name, d in data.get("optimizers", {}).items()}
        return cls(networks, optimizers, dict(data.get("metadata", {})))


def save_checkpoint(checkpoint: Checkpoint, file_path: Path) -> Path:
    file_path.parent.mkdir(parents=True, exist_ok=True)
    file_path.write_text(json.dumps(checkpoint.to_dict()), encoding="utf-8")
    return file_path


def load_checkpoint(file_path: Path) -> Checkpoint:
    """Reads a checkpoint written by save_checkpoint.

    Raises:
        ConfigError: if the file is missing, not JSON or of another version.
    """
    if not file_path.is_file():
        raise ConfigError(f"checkpoint '{file_path}' does not exist")
    try:
        data = json.loads(file_path.read_text(encoding="utf-8"))
        return Checkpoint.from_dict(data)
    except (ValueError, KeyError, TypeError) as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(f"error parsing checkpoint {file_path}: {e}") from e
