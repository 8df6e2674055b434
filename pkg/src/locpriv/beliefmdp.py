#!/usr/bin/env python3
"""
This module implements the belief MDP: Bayesian belief update, expected per-step
leakage and distortion, the Lagrangian step cost and one environment transition.

With belief b over x_{t-1}, kernel a and transition matrix q, every quantity is a
sum over the joint weights

    w[x, x', y] = b(x') q(x | x') a(y | x, x').

Leakage is reported in bits.

Classes:
    StepCostBreakdown: Leakage, distortion and Lagrangian cost of one step.
    EnvStep: Outcome of env_step.
"""

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .errors import DomainError, ZeroProbabilityObservationError
from .gridspec import GridSpec
from .releasekernel import Belief, ReleaseKernel
from .transitions import TransitionMatrix

# belief-update denominators below this are treated as zero-probability observations
OBSERVATION_EPSILON = 1e-300


@dataclass(frozen=True)
class StepCostBreakdown:
    """C = L + lam (D - dbar)"""

    leakage: float
    distortion: float
    cost: float
    lam: float
    dbar: float


@dataclass(frozen=True)
class EnvStep:
    """Result of one environment transition; cells are 1-based"""

    released: int
    belief_after: Belief
    cost: StepCostBreakdown
    next_cell: int


def _check_sizes(belief: Belief, kernel: ReleaseKernel, q: TransitionMatrix) -> None:
    if not belief.cell_count == kernel.cell_count == q.cell_count:
        raise DomainError(
            f"size mismatch: belief {belief.cell_count}, kernel {kernel.cell_count}, chain {q.cell_count}")


def joint_weights(belief: Belief, kernel: ReleaseKernel, q: TransitionMatrix) -> NDArray[np.float64]:
    """w[x, x', y] = b(x') q(x | x') a(y | x, x')"""
    _check_sizes(belief, kernel, q)
    predictive = q.q.T * belief.probs[None, :]
    return np.asarray(predictive[:, :, None] * kernel.probs, dtype=np.float64)


def belief_update(belief: Belief, kernel: ReleaseKernel, q: TransitionMatrix, released: int) -> Belief:
    """Posterior on the current cell after observing the released cell (1-based)"""
    if not 1 <= released <= kernel.cell_count:
        raise DomainError(f"released cell {released} outside 1..{kernel.cell_count}")
    w = joint_weights(belief, kernel, q)[:, :, released - 1]
    numerator = w.sum(axis=1)
    denominator = numerator.sum()
    if denominator < OBSERVATION_EPSILON:
        raise ZeroProbabilityObservationError(f"observation {released} has probability {denominator:.3e}")
    return Belief(numerator / denominator)


def observation_distribution(belief: Belief, kernel: ReleaseKernel, q: TransitionMatrix) -> NDArray[np.float64]:
    """P(Y_t = y | belief) for every y"""
    return np.asarray(joint_weights(belief, kernel, q).sum(axis=(0, 1)), dtype=np.float64)


def expected_leakage(belief: Belief, kernel: ReleaseKernel, q: TransitionMatrix) -> float:
    """I(X_t, X_{t-1}; Y_t | belief) in bits"""
    w = joint_weights(belief, kernel, q)
    marginal = w.sum(axis=(0, 1))
    mask = w > 0.0
    ratio = kernel.probs / np.where(marginal > 0.0, marginal, 1.0)[None, None, :]
    leakage = float(np.sum(w[mask] * np.log2(ratio[mask])))
    return max(leakage, 0.0)


def expected_distortion(belief: Belief, kernel: ReleaseKernel, q: TransitionMatrix, spec: GridSpec) -> float:
    """E[d(X_t, Y_t) | belief] in grid-distance units"""
    w = joint_weights(belief, kernel, q)
    dist = spec.distance_matrix()
    return float(np.einsum("xpy,xy->", w, dist))


def step_cost(belief: Belief, kernel: ReleaseKernel, q: TransitionMatrix, spec: GridSpec,
              lam: float, dbar: float) -> StepCostBreakdown:
    """Lagrangian step cost L + lam (D - dbar)"""
    if lam < 0.0 or dbar < 0.0:
        raise DomainError(f"lambda and dbar must be nonnegative, got {lam}, {dbar}")
    leakage = expected_leakage(belief, kernel, q)
    distortion = expected_distortion(belief, kernel, q, spec)
    return StepCostBreakdown(leakage=leakage, distortion=distortion,
                             cost=leakage + lam * (distortion - dbar), lam=lam, dbar=dbar)


def env_step(previous: int, current: int, belief: Belief, kernel: ReleaseKernel,
             belief_transitions: TransitionMatrix, chain: TransitionMatrix, spec: GridSpec,
             lam: float, dbar: float, rng: np.random.Generator) -> EnvStep:
    """Performs one action of the artificial environment.

    The release is drawn from a(. | current, previous), the belief is updated and the
    cost evaluated with belief_transitions, and the next true cell is drawn from
    chain. Both matrices are the true chain except at the first step, where the
    belief machinery uses the identity (x_prev := x_1).
    """
    spec.check_cell(previous)
    spec.check_cell(current)
    release_probs = kernel.slice(current, previous)
    released = int(rng.choice(kernel.cell_count, p=release_probs)) + 1
    belief_after = belief_update(belief, kernel, belief_transitions, released)
    cost = step_cost(belief, kernel, belief_transitions, spec, lam, dbar)
    next_cell = int(rng.choice(chain.cell_count, p=chain.next_distribution(current))) + 1
    return EnvStep(released=released, belief_after=belief_after, cost=cost, next_cell=next_cell)
