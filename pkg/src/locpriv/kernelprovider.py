#!/usr/bin/env python3
"""
Kernel providers decide the release kernel of every evaluation step.

Classes:
    KernelProvider: Abstract provider.
    ActorKernelProvider: Kernels from a trained actor (sampled or Dirichlet mean).
    FixedKernelProvider: The same kernel at every step (actor bypassed).
    MyopicKernelProvider: Per-step myopic kernels selected by the last release.
"""

from abc import ABC, abstractmethod
from typing import Optional, Sequence

import numpy as np

from .actorcritic import MEAN_MODE, SAMPLE_MODE, build_release_kernel
from .blahutarimoto import MyopicKernel
from .errors import DomainError
from .mlp import MlpParams
from .releasekernel import KERNEL_FLOOR, Belief, ReleaseKernel


class KernelProvider(ABC):
    """abstract base class for release-kernel sources"""

    @abstractmethod
    def kernel(self, belief: Belief, step: int, last_release: Optional[int],
               rng: np.random.Generator) -> ReleaseKernel:
        """Kernel of 0-based step `step`; last_release is None at the first step"""


class ActorKernelProvider(KernelProvider):

    def __init__(self, actor: MlpParams, floor: float = KERNEL_FLOOR, mode: str = MEAN_MODE) -> None:
        if mode not in (MEAN_MODE, SAMPLE_MODE):
            raise DomainError(f"unknown evaluation mode '{mode}'")
        self.actor: MlpParams = actor
        self.floor: float = floor
        self.mode: str = mode

    def kernel(self, belief: Belief, step: int, last_release: Optional[int],
               rng: np.random.Generator) -> ReleaseKernel:
        return build_release_kernel(self.actor, belief, rng, self.floor, self.mode).kernel


class FixedKernelProvider(KernelProvider):

    def __init__(self, fixed: ReleaseKernel) -> None:
        self.fixed: ReleaseKernel = fixed

    def kernel(self, belief: Belief, step: int, last_release: Optional[int],
               rng: np.random.Generator) -> ReleaseKernel:
        return self.fixed


class MyopicKernelProvider(KernelProvider):
    """Step t uses kernels[t] conditioned on the release of step t - 1"""

    def __init__(self, kernels: Sequence[MyopicKernel]) -> None:
        self.kernels: Sequence[MyopicKernel] = kernels

    def kernel(self, belief: Belief, step: int, last_release: Optional[int],
               rng: np.random.Generator) -> ReleaseKernel:
        if not 0 <= step < len(self.kernels):
            raise DomainError(f"no myopic kernel for step {step}; horizon is {len(self.kernels)}")
        condition = 0 if last_release is None else last_release - 1
        return self.kernels[step].release_kernel(condition)
