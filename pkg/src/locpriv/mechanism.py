#!/usr/bin/env python3

from abc import ABC, abstractmethod
from typing import Tuple

from .gridworld import GridWorld
from .kernelprovider import KernelProvider


class Mechanism(ABC):
    """abstract base class for trained or solved release mechanisms"""

    def __init__(self, world: GridWorld, lam: float) -> None:
        self.world: GridWorld = world
        self.lam: float = lam
        self._leakage: float = 0.0
        self._distortion: float = 0.0
        self._time: float = 0.0

    def get_quality(self) -> Tuple[float, float]:
        """Returns average leakage (bits/step) and average distortion as Tuple"""
        return (self._leakage, self._distortion)

    def set_quality(self, leakage: float, distortion: float) -> None:
        self._leakage = leakage
        self._distortion = distortion

    def set_time(self, duration: float) -> None:
        self._time = duration

    def get_time(self) -> float:
        return self._time

    @abstractmethod
    def provider(self) -> KernelProvider:
        """Kernel provider that replays this mechanism in an evaluation roll-out"""
