#!/usr/bin/env python3
"""
This module defines the GridWorld class, which bundles the grid geometry, the
Markov model of the true trajectory and the distortion metric.

Classes:
    WorldType: The selectable transition families.
    Trajectory: A sampled true trajectory X^n.
    GridWorld: A grid-world instance.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np
from numpy.typing import NDArray

from .errors import DomainError, UsageError
from .gridspec import GridSpec
from .transitions import InitialDistribution, TransitionMatrix


class WorldType(Enum):
    Q0 = "q0"
    Q1 = "q1"
    Q2 = "q2"
    FILE = "file"


@dataclass(frozen=True)
class Trajectory:
    """Represents a true trajectory; cells are 1-based"""

    cells: Tuple[int, ...]

    def __len__(self) -> int:
        return len(self.cells)


class GridWorld:
    """Represents a location-privacy world: grid, chain and initial law"""

    def __init__(self, name: str, spec: GridSpec, transitions: TransitionMatrix,
                 initial: Optional[InitialDistribution] = None) -> None:
        if transitions.cell_count != spec.cell_count:
            raise DomainError(
                f"transition matrix has {transitions.cell_count} cells, grid has {spec.cell_count}")
        self.name: str = name
        self.spec: GridSpec = spec
        self.transitions: TransitionMatrix = transitions
        self.initial: InitialDistribution = initial or InitialDistribution.uniform(spec.cell_count)
        if self.initial.cell_count != spec.cell_count:
            raise DomainError("initial distribution size does not match the grid")
        self.distortion: NDArray[np.float64] = spec.distance_matrix()
        self.distortion.setflags(write=False)
        self._cumulative: NDArray[np.float64] = np.cumsum(self.transitions.q, axis=1)

    @property
    def cell_count(self) -> int:
        return self.spec.cell_count

    def sample_initial(self, rng: np.random.Generator) -> int:
        """Draws X_1 ~ p_{x_1}; returns a 1-based cell"""
        return int(rng.choice(self.cell_count, p=self.initial.p)) + 1

    def sample_next(self, cell: int, rng: np.random.Generator) -> int:
        """Draws X_{t+1} ~ q(. | cell)"""
        return self._draw(cell, float(rng.random()))

    def _draw(self, cell: int, u: float) -> int:
        try:
            self.spec.check_cell(cell)
        except DomainError as e:
            raise UsageError(f"cannot sample a successor: {e}") from e
        row = self._cumulative[cell - 1]
        return min(int(np.searchsorted(row, u, side="right")), self.cell_count - 1) + 1

    def sample_trajectory(self, n: int, rng: np.random.Generator) -> Trajectory:
        """Samples X^n: X_1 ~ p_{x_1}, X_{t+1} ~ q(. | X_t)"""
        if n < 1:
            raise DomainError(f"horizon must be at least 1, got {n}")
        cells = [self.sample_initial(rng)]
        uniforms = rng.random(n - 1)
        for u in uniforms:
            cells.append(self._draw(cells[-1], float(u)))
        return Trajectory(tuple(cells))
