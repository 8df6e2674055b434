#!/usr/bin/env python3

import time
from abc import ABC, abstractmethod
from typing import Generic, TypeVar

from .logger import Logger
from .mechanism import Mechanism

TMechanism = TypeVar('TMechanism', bound=Mechanism)


class LPPMSolver(Generic[TMechanism], ABC):
    """Abstract base class for solvers that build a location-privacy mechanism for one world and lambda"""

    def __init__(self, name: str, logger: Logger) -> None:
        self.logger: Logger = logger
        self.name: str = name

    @abstractmethod
    def solve(self) -> TMechanism:
        """Builds the mechanism"""

    def _finish(self, mechanism: TMechanism, start_time: float) -> TMechanism:
        """Stamps the wall time since start_time on the mechanism"""
        mechanism.set_time(time.time() - start_time)
        self.logger.info(self.name, f"finished in {mechanism.get_time():.1f}s")
        return mechanism
