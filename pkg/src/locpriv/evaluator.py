#!/usr/bin/env python3
"""
Roll-out evaluation of a release policy against the full-history Bayesian
adversary. Each roll-out averages the expected per-step leakage and distortion
along its belief path; roll-out r draws from its own stream (seed, *keys, r).
"""

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
from numpy.typing import NDArray

from .environment import ArtificialEnvironment
from .errors import DomainError
from .gridworld import GridWorld
from .kernelprovider import KernelProvider
from .seeding import make_rng


@dataclass(frozen=True)
class EvaluationResult:
    avg_leakage_bits: float
    avg_distortion: float
    stderr_leakage: float
    stderr_distortion: float
    rollout_leakage: NDArray[np.float64]
    rollout_distortion: NDArray[np.float64]


def _stderr(values: NDArray[np.float64]) -> float:
    if values.size < 2:
        return 0.0
    return float(np.std(values, ddof=1) / np.sqrt(values.size))


def run_rollout(provider: KernelProvider, world: GridWorld, horizon: int, lam: float, dbar: float,
                rng: np.random.Generator) -> Tuple[float, float]:
    """Time-averaged expected leakage (bits) and distortion of one roll-out"""
    env = ArtificialEnvironment(world, lam, dbar)
    belief = env.reset(rng)
    leakage = 0.0
    distortion = 0.0
    for t in range(horizon):
        kernel = provider.kernel(belief, t, env.last_release, rng)
        outcome = env.step(kernel, rng)
        leakage += outcome.cost.leakage
        distortion += outcome.cost.distortion
        belief = outcome.belief_after
    return leakage / horizon, distortion / horizon


def evaluate_policy(provider: KernelProvider, world: GridWorld, horizon: int, rollouts: int,
                    lam: float, dbar: float, seed: int, keys: Sequence[int] = ()) -> EvaluationResult:
    """Averages R independent roll-outs of length n without learning"""
    if horizon < 1 or rollouts < 1:
        raise DomainError(f"horizon and rollouts must be >= 1, got {horizon}, {rollouts}")
    leakage = np.empty(rollouts)
    distortion = np.empty(rollouts)
    for r in range(rollouts):
        rng = make_rng(seed, *keys, r)
        leakage[r], distortion[r] = run_rollout(provider, world, horizon, lam, dbar, rng)
    return EvaluationResult(avg_leakage_bits=float(leakage.mean()), avg_distortion=float(distortion.mean()),
                            stderr_leakage=_stderr(leakage), stderr_distortion=_stderr(distortion),
                            rollout_leakage=leakage, rollout_distortion=distortion)
