#!/usr/bin/env python3
"""
Leakage-distortion frontiers built from curve rows, linear interpolation on them
and the gap between two frontiers over their common distortion range.
"""

from dataclasses import dataclass

import numpy as np
import pandas as pd
from numpy.typing import ArrayLike, NDArray

from .errors import DomainError, EmptySelectionError


@dataclass(frozen=True)
class Frontier:
    """Points sorted by increasing distortion"""

    distortion: NDArray[np.float64]
    leakage: NDArray[np.float64]

    @classmethod
    def from_points(cls, distortion: ArrayLike, leakage: ArrayLike) -> "Frontier":
        d = np.asarray(distortion, dtype=np.float64)
        leak = np.asarray(leakage, dtype=np.float64)
        if d.shape != leak.shape or d.ndim != 1 or d.size == 0:
            raise DomainError("frontier needs equally long nonempty distortion and leakage vectors")
        order = np.argsort(d, kind="stable")
        return cls(d[order], leak[order])

    def interpolate(self, distortion: ArrayLike) -> NDArray[np.float64]:
        """Leakage at the given distortions, held constant beyond the end points"""
        return np.asarray(np.interp(distortion, self.distortion, self.leakage), dtype=np.float64)


@dataclass(frozen=True)
class FrontierGap:
    low: float
    high: float
    max_gap: float
    mean_gap: float


def frontier_from_curve(curve: pd.DataFrame, method: str) -> Frontier:
    """Frontier of one method from rows with avg_distortion and avg_leakage_bits"""
    rows = curve[curve["method"] == method]
    if rows.empty:
        raise EmptySelectionError(f"no curve rows for method '{method}'")
    return Frontier.from_points(rows["avg_distortion"].to_numpy(), rows["avg_leakage_bits"].to_numpy())


def frontier_gap(first: Frontier, second: Frontier, points: int = 101) -> FrontierGap:
    """first - second on the common distortion range (positive where first leaks more)

    Raises:
        DomainError: if the two frontiers share no distortion range.
    """
    low = max(first.distortion[0], second.distortion[0])
    high = min(first.distortion[-1], second.distortion[-1])
    if low > high:
        raise DomainError(f"frontiers do not overlap: [{low}, {high}]")
    grid = np.linspace(low, high, points)
    gap = first.interpolate(grid) - second.interpolate(grid)
    return FrontierGap(float(low), float(high), float(gap.max()), float(gap.mean()))
