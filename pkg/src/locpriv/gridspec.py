#!/usr/bin/env python3
"""
This module defines the GridSpec class, the geometry of the square location grid.

Cells are numbered 1..side² row-major, so with side 4 the first row is
{1, 2, 3, 4} and the last row is {13, 14, 15, 16}. Arrays indexed by cell use
position cell - 1.

Classes:
    GridSpec: Side length, cell numbering and Manhattan distortion of a grid.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np
from numpy.typing import NDArray

from .errors import DomainError


@dataclass(frozen=True)
class GridSpec:
    """Represents a side x side grid-world"""

    side: int = 4

    def __post_init__(self) -> None:
        if self.side < 1:
            raise DomainError(f"grid side must be positive, got {self.side}")

    @property
    def cell_count(self) -> int:
        return self.side * self.side

    @property
    def max_distance(self) -> int:
        """Largest achievable Manhattan distance"""
        return 2 * (self.side - 1)

    def check_cell(self, cell: int) -> None:
        """Raises DomainError unless 1 <= cell <= cell_count"""
        if not 1 <= cell <= self.cell_count:
            raise DomainError(f"cell {cell} outside 1..{self.cell_count}")

    def cell_coords(self, cell: int) -> Tuple[int, int]:
        """Returns the zero-based (row, col) of a cell"""
        self.check_cell(cell)
        return ((cell - 1) // self.side, (cell - 1) % self.side)

    def manhattan(self, a: int, b: int) -> int:
        """Manhattan distance between two cells"""
        row_a, col_a = self.cell_coords(a)
        row_b, col_b = self.cell_coords(b)
        return abs(row_a - row_b) + abs(col_a - col_b)

    def distance_matrix(self) -> NDArray[np.float64]:
        """Returns d with d[i, j] = manhattan(i + 1, j + 1)"""
        idx = np.arange(self.cell_count)
        rows, cols = idx // self.side, idx % self.side
        dist = np.abs(rows[:, None] - rows[None, :]) + np.abs(cols[:, None] - cols[None, :])
        return dist.astype(np.float64)
