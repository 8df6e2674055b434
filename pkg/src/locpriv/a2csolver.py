#!/usr/bin/env python3
"""
This module defines the A2CSolver class, which trains the release policy with
synchronous advantage actor-critic on the belief MDP.

Every step of an episode builds the full kernel from the actor, lets the
artificial environment release a cell and reveal the cost, forms the TD error
with the critic and updates the critic and then the actor. The TD target is
held constant in both updates.

Classes:
    A2CSolver: Trains an A2CMechanism.
"""

import time
from pathlib import Path
from typing import Callable, List, Optional, Sequence

import numpy as np
import pandas as pd

from .a2cmechanism import CURVE_COLUMNS, A2CMechanism
from .a2cparameters import TrainConfig
from .actorcritic import (PAIR_SCORE, SAMPLE_MODE, AdvantageScale, ExperienceTuple, TdRecord, actor_step,
                          build_release_kernel, critic_step, critic_value, init_actor, init_critic, td_error)
from .adam import AdamState
from .environment import ArtificialEnvironment
from .errors import NumericError
from .gridworld import GridWorld
from .logger import Logger
from .lppmsolver import LPPMSolver
from .seeding import make_rng

StepCallback = Callable[[ExperienceTuple, TdRecord], None]


class A2CSolver(LPPMSolver[A2CMechanism]):

    def __init__(self, name: str, logger: Logger, world: GridWorld, config: TrainConfig,
                 keys: Sequence[int] = (), on_step: Optional[StepCallback] = None,
                 checkpoint_dir: Optional[Path] = None) -> None:
        super().__init__(name, logger)
        self.world: GridWorld = world
        self.config: TrainConfig = config
        self.keys: Sequence[int] = keys
        self.on_step: Optional[StepCallback] = on_step
        self.checkpoint_dir: Optional[Path] = checkpoint_dir

    def solve(self) -> A2CMechanism:
        """Runs N episodes of n steps and returns the trained mechanism"""
        cfg = self.config
        k = self.world.cell_count
        rng = make_rng(cfg.seed, *self.keys)
        actor = init_actor(k, rng, cfg.hidden)
        critic = init_critic(k, rng, cfg.hidden)
        actor_state = AdamState.create(actor, cfg.actor_lr, cfg.beta1, cfg.beta2, cfg.adam_eps)
        critic_state = AdamState.create(critic, cfg.critic_lr, cfg.beta1, cfg.beta2, cfg.adam_eps)
        rows: List[List[float]] = []
        scale = AdvantageScale(cfg.advantage_decay)

        self.logger.info(self.name, f"training on '{self.world.name}' with lambda={cfg.lam}, "
                                    f"N={cfg.episodes}, n={cfg.horizon}, seed={cfg.seed}")
        self.logger.increase_indent()
        start_time = time.time()
        episode = 0
        try:
            for episode in range(1, cfg.episodes + 1):
                env = ArtificialEnvironment(self.world, cfg.lam, cfg.dbar)
                belief = env.reset(rng)
                totals = np.zeros(3)
                for _ in range(cfg.horizon):
                    sample = build_release_kernel(actor, belief, rng, cfg.kernel_floor, SAMPLE_MODE)
                    current, previous = env.current, env.previous
                    outcome = env.step(sample.kernel, rng)
                    td = td_error(outcome.cost.cost, critic_value(critic, belief),
                                  critic_value(critic, outcome.belief_after), cfg.gamma)
                    if not np.isfinite(td.delta):
                        raise NumericError(f"non-finite TD error at episode {episode}: {td}")
                    if self.on_step is not None:
                        self.on_step(ExperienceTuple(belief, sample.kernel, outcome.released,
                                                     outcome.belief_after, outcome.cost), td)
                    critic, critic_state = critic_step(critic, critic_state, td, belief)
                    if cfg.normalize_advantage:
                        scale = scale.observe(td.delta)
                        advantage = scale.normalize(td.delta)
                    else:
                        advantage = td.delta
                    pair = (current, previous) if cfg.actor_score == PAIR_SCORE else None
                    actor, actor_state = actor_step(actor, actor_state, advantage, sample, pair)
                    totals += (outcome.cost.leakage, outcome.cost.distortion, outcome.cost.cost)
                    belief = outcome.belief_after
                rows.append([episode, *(totals / cfg.horizon)])
                if episode % cfg.log_every == 0 or episode == cfg.episodes:
                    recent = np.mean(np.array(rows[-cfg.smoothing_window:])[:, 1:], axis=0)
                    self.logger.info(self.name, f"episode {episode}: leakage={recent[0]:.4f} bits, "
                                                f"distortion={recent[1]:.4f}, cost={recent[2]:.4f}")
        except NumericError as e:
            self.logger.error(f"training aborted at episode {episode}: {e}")
            aborted = A2CMechanism(self.world, cfg, actor, critic, actor_state, critic_state,
                                   pd.DataFrame(rows, columns=CURVE_COLUMNS))
            if self.checkpoint_dir is not None:
                path = aborted.save(self.checkpoint_dir, stem=f"a2c-aborted-seed{cfg.seed}")
                self.logger.error(f"diagnostic checkpoint written to {path}")
            raise
        finally:
            self.logger.decrease_indent()

        curves = pd.DataFrame(rows, columns=CURVE_COLUMNS).astype({"episode": int})
        mechanism = A2CMechanism(self.world, cfg, actor, critic, actor_state, critic_state, curves)
        return self._finish(mechanism, start_time)
