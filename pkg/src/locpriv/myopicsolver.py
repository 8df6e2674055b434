#!/usr/bin/env python3
"""
This module defines the MyopicSolver class, the comparison mechanism: at every
step it minimises the conditional leakage given only the previous release,
then propagates the joint law one step forward.

Classes:
    MyopicSolver: Solves the myopic mechanism for one Lagrange multiplier.
    MyopicCurveRow: One point of a myopic trade-off sweep.
"""

import math
import time
from dataclasses import dataclass
from typing import Iterable, List, Optional

from .blahutarimoto import BA_MAX_ITER, BA_TOLERANCE, MyopicState, ba_solve_step, propagate
from .errors import DomainError
from .gridworld import GridWorld
from .logger import Logger
from .lppmsolver import LPPMSolver
from .myopicmechanism import MyopicMechanism

DEFAULT_BA_SWEEP = (0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 20.0)


def lambda_ba_from_bits(lam: float) -> float:
    """Blahut-Arimoto tilt (nats) matching a leakage-in-bits Lagrange multiplier"""
    return lam * math.log(2.0)


@dataclass(frozen=True)
class MyopicCurveRow:
    lambda_ba: float
    avg_distortion: float
    avg_leakage_bits: float
    converged: bool


class MyopicSolver(LPPMSolver[MyopicMechanism]):

    def __init__(self, name: str, logger: Logger, world: GridWorld, horizon: int, lam: float = 0.0,
                 lambda_ba: Optional[float] = None, tol: float = BA_TOLERANCE,
                 max_iter: int = BA_MAX_ITER) -> None:
        """
        lam is the leakage-in-bits multiplier shared with the A2C mechanism; an
        explicit lambda_ba overrides the converted value.
        """
        super().__init__(name, logger)
        if horizon < 1:
            raise DomainError(f"horizon must be >= 1, got {horizon}")
        self.world: GridWorld = world
        self.horizon: int = horizon
        self.lam: float = lam
        self.lambda_ba: float = lambda_ba if lambda_ba is not None else lambda_ba_from_bits(lam)
        self.tol: float = tol
        self.max_iter: int = max_iter

    def solve(self) -> MyopicMechanism:
        mechanism = MyopicMechanism(self.world, self.lam, self.lambda_ba)
        state = MyopicState.initial(self.world.initial)
        self.logger.info(self.name, f"myopic sweep point lambda_ba={self.lambda_ba:.6g}, n={self.horizon}")
        start_time = time.time()
        for t in range(1, self.horizon + 1):
            result = ba_solve_step(state, self.lambda_ba, self.world.spec, self.tol, self.max_iter)
            if not result.converged:
                self.logger.warning(f"step {t}: Blahut-Arimoto stopped after {result.iterations} iterations")
            mechanism.add_step(result.kernel, result.leakage_bits, result.distortion, result.converged)
            if t < self.horizon:
                state = propagate(state, result.kernel, self.world.transitions)
        leakage, distortion = mechanism.get_quality()
        self.logger.info(self.name, f"avg leakage={leakage:.4f} bits, avg distortion={distortion:.4f}")
        return self._finish(mechanism, start_time)


def run_myopic(world: GridWorld, lambda_ba_values: Iterable[float], horizon: int, logger: Logger,
               tol: float = BA_TOLERANCE, max_iter: int = BA_MAX_ITER) -> List[MyopicCurveRow]:
    """Traces the myopic trade-off curve over a sweep of Blahut-Arimoto tilts"""
    rows: List[MyopicCurveRow] = []
    for lambda_ba in lambda_ba_values:
        solver = MyopicSolver("Myopic", logger, world, horizon, lambda_ba=lambda_ba, tol=tol, max_iter=max_iter)
        mechanism = solver.solve()
        leakage, distortion = mechanism.get_quality()
        rows.append(MyopicCurveRow(lambda_ba, distortion, leakage, mechanism.all_converged))
    return rows
