#!/usr/bin/env python3
"""
This module implements the building blocks of one advantage actor-critic step.

The critic maps a belief (K inputs) to a scalar value. The actor maps
[belief | onehot(x) | onehot(x_prev)] (3K inputs) to K Dirichlet
pre-activations; evaluating it on all K^2 pairs in one batch yields the full
release kernel.

Classes:
    KernelSample: A kernel built by the actor plus what actor_step needs.
    TdRecord: TD target and error of one transition.
    ExperienceTuple: (belief, kernel, release, next belief, cost) of one step.
    AdvantageScale: Running TD-error statistics that standardise the actor advantage.
"""

import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence, Tuple

import numpy as np
from numpy.typing import NDArray

from .adam import AdamState, adam_update
from .beliefmdp import StepCostBreakdown
from .dirichlet import (clamp_to_simplex, concentration_slope, concentrations, dirichlet_log_density_rows,
                        dirichlet_sample_batch)
from .errors import DomainError, NumericError, ShapeError
from .mlp import HIDDEN_WIDTHS, MlpCache, MlpParams, mlp_backward, mlp_forward
from .releasekernel import KERNEL_FLOOR, Belief, ReleaseKernel

SAMPLE_MODE = "sample"
MEAN_MODE = "mean"

# rows of the sampled kernel that enter the actor loss
KERNEL_SCORE = "kernel"
PAIR_SCORE = "pair"

ADVANTAGE_DECAY = 0.99
ADVANTAGE_EPS = 1e-12


@dataclass(frozen=True)
class KernelSample:
    """Kernel of one step; arrays are indexed [x - 1, x_prev - 1, :]"""

    kernel: ReleaseKernel
    preactivations: NDArray[np.float64]
    concentrations: NDArray[np.float64]
    vectors: NDArray[np.float64]
    cache: MlpCache

    def pair_row(self, current: int, previous: int) -> int:
        """Row of the actor batch that belongs to (current, previous)"""
        return (current - 1) * self.kernel.cell_count + (previous - 1)


@dataclass(frozen=True)
class TdRecord:
    delta: float
    target: float
    value_before: float
    value_after: float


@dataclass(frozen=True)
class ExperienceTuple:
    belief_before: Belief
    kernel: ReleaseKernel
    released: int
    belief_after: Belief
    cost: StepCostBreakdown


def init_critic(cell_count: int, rng: np.random.Generator,
                hidden: Sequence[int] = HIDDEN_WIDTHS) -> MlpParams:
    return MlpParams.initialize((cell_count, *hidden, 1), rng)


def init_actor(cell_count: int, rng: np.random.Generator,
               hidden: Sequence[int] = HIDDEN_WIDTHS) -> MlpParams:
    return MlpParams.initialize((3 * cell_count, *hidden, cell_count), rng)


def actor_inputs(belief: Belief) -> NDArray[np.float64]:
    """(K^2, 3K) batch [belief | onehot(x) | onehot(x_prev)], row (x - 1) K + (x_prev - 1)"""
    k = belief.cell_count
    eye = np.eye(k)
    current = np.repeat(eye, k, axis=0)
    previous = np.tile(eye, (k, 1))
    beliefs = np.broadcast_to(belief.probs, (k * k, k))
    return np.concatenate([beliefs, current, previous], axis=1)


def build_release_kernel(actor: MlpParams, belief: Belief, rng: np.random.Generator,
                         floor: float = KERNEL_FLOOR, mode: str = SAMPLE_MODE) -> KernelSample:
    """Evaluates the actor on every (x, x_prev) pair and builds the release kernel.

    In sample mode one Dirichlet vector is drawn independently per pair; in mean
    mode the Dirichlet means are used and rng is not touched.

    Raises:
        ShapeError: if the actor is not sized for 3K inputs and K outputs.
        NumericError: if the actor output is not finite.
    """
    k = belief.cell_count
    sizes = actor.layer_sizes
    if sizes[0] != 3 * k or sizes[-1] != k:
        raise ShapeError(f"actor layers {sizes} do not fit {k} cells")
    z, cache = mlp_forward(actor, actor_inputs(belief))
    if not np.all(np.isfinite(z)):
        raise NumericError(f"actor produced non-finite output for belief {belief.to_list()}")
    xi = concentrations(z)
    if mode == SAMPLE_MODE:
        vectors = clamp_to_simplex(dirichlet_sample_batch(xi, rng))
    elif mode == MEAN_MODE:
        vectors = xi / xi.sum(axis=1, keepdims=True)
    else:
        raise DomainError(f"unknown kernel mode '{mode}'")
    kernel = ReleaseKernel(vectors.reshape(k, k, k), floor=floor)
    return KernelSample(kernel, z, xi.reshape(k, k, k), vectors.reshape(k, k, k), cache)


def critic_value(critic: MlpParams, belief: Belief) -> float:
    value, _ = mlp_forward(critic, belief.probs)
    return float(value[0])


def td_error(cost: float, value_before: float, value_after: float, gamma: float) -> TdRecord:
    """delta = cost + gamma V(b') - V(b)"""
    target = cost + gamma * value_after
    return TdRecord(delta=target - value_before, target=target,
                    value_before=value_before, value_after=value_after)


def critic_gradient(critic: MlpParams, td: TdRecord, belief: Belief) -> MlpParams:
    """Gradient of (target - V(b))^2 with the target held constant: -2 delta dV"""
    _, cache = mlp_forward(critic, belief.probs)
    return mlp_backward(critic, cache, np.array([-2.0 * td.delta]))


def critic_step(critic: MlpParams, state: AdamState, td: TdRecord,
                belief: Belief) -> Tuple[MlpParams, AdamState]:
    if td.delta == 0.0:
        return critic, state
    return adam_update(critic, critic_gradient(critic, td, belief), state)


def _scored_rows(sample: KernelSample, pair: Optional[Tuple[int, int]]) -> NDArray[np.int64]:
    k = sample.kernel.cell_count
    if pair is None:
        return np.arange(k * k)
    return np.array([sample.pair_row(*pair)])


def actor_loss(sample: KernelSample, advantage: float, pair: Optional[Tuple[int, int]] = None) -> float:
    """advantage * ln Dir(a | xi) of the sampled kernel, or of one (x, x_prev) slice if pair is given"""
    k = sample.kernel.cell_count
    rows = _scored_rows(sample, pair)
    logp, _ = dirichlet_log_density_rows(sample.vectors.reshape(k * k, k)[rows],
                                         sample.concentrations.reshape(k * k, k)[rows])
    return advantage * float(logp.sum())


def actor_gradient(actor: MlpParams, sample: KernelSample, advantage: float,
                   pair: Optional[Tuple[int, int]] = None) -> MlpParams:
    """Gradient of actor_loss through the concentrations into the actor weights"""
    k = sample.kernel.cell_count
    rows = _scored_rows(sample, pair)
    _, grad_xi = dirichlet_log_density_rows(sample.vectors.reshape(k * k, k)[rows],
                                            sample.concentrations.reshape(k * k, k)[rows])
    output_gradient = np.zeros_like(sample.preactivations)
    output_gradient[rows] = advantage * grad_xi * concentration_slope(sample.preactivations[rows])
    return mlp_backward(actor, sample.cache, output_gradient)


def actor_step(actor: MlpParams, state: AdamState, advantage: float, sample: KernelSample,
               pair: Optional[Tuple[int, int]] = None) -> Tuple[MlpParams, AdamState]:
    """One Adam step on advantage * ln Dir(a | xi); a positive advantage lowers the density of a"""
    if advantage == 0.0:
        return actor, state
    return adam_update(actor, actor_gradient(actor, sample, advantage, pair), state)


@dataclass(frozen=True)
class AdvantageScale:
    """Exponential running mean and variance of TD errors, bias-corrected as in Adam"""

    decay: float = ADVANTAGE_DECAY
    mean: float = 0.0
    second: float = 0.0
    count: int = 0

    def observe(self, delta: float) -> "AdvantageScale":
        d = self.decay
        return replace(self, mean=d * self.mean + (1.0 - d) * delta,
                       second=d * self.second + (1.0 - d) * delta * delta, count=self.count + 1)

    def normalize(self, delta: float) -> float:
        """(delta - mean) / std; 0 while the spread is still degenerate"""
        if self.count == 0:
            return delta
        correction = 1.0 - self.decay ** self.count
        mean = self.mean / correction
        std = math.sqrt(max(self.second / correction - mean * mean, 0.0))
        if std < ADVANTAGE_EPS:
            return 0.0
        return (delta - mean) / std
