#!/usr/bin/env python3
"""
This module defines the two probability objects of the belief MDP.

Classes:
    Belief: The service provider's posterior on the previous true location.
    ReleaseKernel: The action a(y | x_t, x_{t-1}), stored as probs[x, x_prev, y].

All arrays are indexed by cell - 1.
"""

import json
from typing import Any, Dict, List, Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import DomainError

BELIEF_TOLERANCE = 1e-10
KERNEL_FLOOR = 1e-6


class Belief:
    """Represents a probability vector over cells"""

    def __init__(self, probs: ArrayLike) -> None:
        values = np.array(probs, dtype=np.float64)
        if values.ndim != 1 or values.size == 0:
            raise DomainError(f"belief must be a nonempty vector, got shape {values.shape}")
        if not np.all(np.isfinite(values)) or np.any(values < 0.0):
            raise DomainError("belief entries must be finite and nonnegative")
        if abs(values.sum() - 1.0) > BELIEF_TOLERANCE:
            raise DomainError(f"belief sums to {values.sum():.12f}")
        values.setflags(write=False)
        self.probs: NDArray[np.float64] = values

    @classmethod
    def normalized(cls, weights: ArrayLike) -> "Belief":
        """Builds a belief from nonnegative weights with positive total"""
        values = np.asarray(weights, dtype=np.float64)
        total = values.sum()
        if not np.isfinite(total) or total <= 0.0:
            raise DomainError("belief weights must have a positive finite total")
        return cls(values / total)

    @classmethod
    def uniform(cls, cell_count: int) -> "Belief":
        return cls(np.full(cell_count, 1.0 / cell_count))

    @classmethod
    def point_mass(cls, cell: int, cell_count: int) -> "Belief":
        """Belief concentrated on a 1-based cell"""
        values = np.zeros(cell_count)
        values[cell - 1] = 1.0
        return cls(values)

    @property
    def cell_count(self) -> int:
        return int(self.probs.size)

    def to_list(self) -> List[float]:
        return [float(v) for v in self.probs]


class ReleaseKernel:
    """Represents a(y | x, x_prev) for every pair of true cells.

    Each slice probs[x, x_prev, :] is a probability vector. Unless floor is 0,
    slices are mixed with the uniform vector so that every entry is at least
    floor: a <- floor + (1 - K floor) a.
    """

    def __init__(self, probs: ArrayLike, floor: float = KERNEL_FLOOR) -> None:
        values = np.array(probs, dtype=np.float64)
        if values.ndim != 3 or len(set(values.shape)) != 1:
            raise DomainError(f"kernel must have shape (K, K, K), got {values.shape}")
        k = values.shape[0]
        if not np.all(np.isfinite(values)) or np.any(values < 0.0):
            raise DomainError("kernel entries must be finite and nonnegative")
        sums = values.sum(axis=-1, keepdims=True)
        if np.any(sums <= 0.0):
            raise DomainError("kernel slice with zero total mass")
        values = values / sums
        if floor < 0.0 or floor * k >= 1.0:
            raise DomainError(f"kernel floor {floor} invalid for {k} cells")
        if floor > 0.0:
            values = floor + (1.0 - k * floor) * values
        values.setflags(write=False)
        self.probs: NDArray[np.float64] = values
        self.floor: float = floor

    @classmethod
    def uniform(cls, cell_count: int) -> "ReleaseKernel":
        return cls(np.full((cell_count,) * 3, 1.0 / cell_count), floor=0.0)

    @classmethod
    def identity(cls, cell_count: int, floor: float = KERNEL_FLOOR) -> "ReleaseKernel":
        """Releases the current cell: a(y | x, x_prev) = 1{y = x} before flooring"""
        eye = np.eye(cell_count)
        return cls(np.broadcast_to(eye[:, None, :], (cell_count,) * 3), floor=floor)

    @classmethod
    def constant(cls, release: ArrayLike, cell_count: int, floor: float = KERNEL_FLOOR) -> "ReleaseKernel":
        """The same release distribution for every (x, x_prev)"""
        row = np.asarray(release, dtype=np.float64)
        return cls(np.broadcast_to(row, (cell_count,) * 3), floor=floor)

    @property
    def cell_count(self) -> int:
        return int(self.probs.shape[0])

    def slice(self, cell: int, previous: int) -> NDArray[np.float64]:
        """a(. | cell, previous) for 1-based cells"""
        return self.probs[cell - 1, previous - 1]


def snapshot_dict(belief: Belief, kernel: ReleaseKernel) -> Dict[str, Any]:
    """Debug snapshot {"belief": [...], "kernel": [[[...]]]}"""
    return {"belief": belief.to_list(), "kernel": kernel.probs.tolist()}


def snapshot_json(belief: Belief, kernel: ReleaseKernel) -> str:
    return json.dumps(snapshot_dict(belief, kernel))


def snapshot_from_json(text: str, floor: float = 0.0) -> Tuple[Belief, ReleaseKernel]:
    data = json.loads(text)
    return Belief(data["belief"]), ReleaseKernel(data["kernel"], floor=floor)
