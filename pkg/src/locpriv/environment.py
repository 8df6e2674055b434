#!/usr/bin/env python3
"""
This module defines the ArtificialEnvironment class: the environment the release
policy interacts with. It keeps the hidden true locations, samples releases,
computes the next belief and reveals the step cost.

Classes:
    ArtificialEnvironment: Stateful wrapper around beliefmdp.env_step.
"""

from typing import Optional

import numpy as np

from .beliefmdp import EnvStep, env_step
from .errors import UsageError
from .gridworld import GridWorld
from .releasekernel import Belief, ReleaseKernel
from .transitions import TransitionMatrix


class ArtificialEnvironment:
    """Environment of one episode over a grid-world"""

    def __init__(self, world: GridWorld, lam: float, dbar: float) -> None:
        self.world: GridWorld = world
        self.lam: float = lam
        self.dbar: float = dbar
        self._identity: TransitionMatrix = TransitionMatrix.identity(world.cell_count)
        self.previous: int = 0
        self.current: int = 0
        self.belief: Optional[Belief] = None
        self.step_index: int = 0
        self.last_release: Optional[int] = None

    def reset(self, rng: np.random.Generator) -> Belief:
        """Draws X_1 and returns the initial belief beta_0 = p_{x_1}"""
        self.current = self.world.sample_initial(rng)
        self.previous = self.current
        self.belief = Belief(self.world.initial.p)
        self.step_index = 0
        self.last_release = None
        return self.belief

    @property
    def is_first_step(self) -> bool:
        return self.step_index == 0

    def step(self, kernel: ReleaseKernel, rng: np.random.Generator) -> EnvStep:
        """Applies the kernel to the hidden state and advances one step"""
        if self.belief is None:
            raise UsageError("environment must be reset before stepping")
        transitions = self._identity if self.is_first_step else self.world.transitions
        outcome = env_step(self.previous, self.current, self.belief, kernel, transitions,
                           self.world.transitions, self.world.spec, self.lam, self.dbar, rng)
        self.previous, self.current = self.current, outcome.next_cell
        self.belief = outcome.belief_after
        self.last_release = outcome.released
        self.step_index += 1
        return outcome
