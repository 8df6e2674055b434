#!/usr/bin/env python3
"""
Unit-tests for myopicsolver.py and myopicmechanism.py.
"""
import math

import numpy as np
import pytest

from locpriv.errors import DomainError
from locpriv.evaluator import evaluate_policy
from locpriv.exactoracle import ExplicitPolicy, PolicyForm, filter_leakage_total
from locpriv.gridworld import GridWorld
from locpriv.logger import Logger
from locpriv.myopicmechanism import MyopicMechanism
from locpriv.myopicsolver import DEFAULT_BA_SWEEP, MyopicSolver, lambda_ba_from_bits, run_myopic
from locpriv.worldloader import WorldLoader


def test_lambda_conversion() -> None:
    """A multiplier per bit is ln 2 times smaller per nat"""
    assert lambda_ba_from_bits(2.0) == pytest.approx(2.0 * math.log(2.0))


def test_zero_multiplier_releases_the_marginal(logger: Logger, uniform_world: GridWorld) -> None:
    """lambda = 0: no leakage and the distortion of an independent uniform release"""
    mechanism = MyopicSolver("Myopic", logger, uniform_world, horizon=5, lam=0.0).solve()
    leakage, distortion = mechanism.get_quality()
    assert mechanism.horizon == 5
    assert mechanism.all_converged
    assert leakage < 1e-9
    assert distortion == pytest.approx(2.5, abs=1e-9)
    assert mechanism.get_time() >= 0.0
    assert any("Myopic - finished in" in line for line in logger.logs)


def test_explicit_tilt_overrides_the_multiplier(logger: Logger, small_world: GridWorld) -> None:
    """lambda_ba wins over the converted lam"""
    solver = MyopicSolver("Myopic", logger, small_world, horizon=2, lam=1.0, lambda_ba=3.0)
    assert solver.lambda_ba == 3.0
    converted = MyopicSolver("Myopic", logger, small_world, horizon=2, lam=1.0)
    assert converted.lambda_ba == pytest.approx(math.log(2.0))
    with pytest.raises(DomainError):
        MyopicSolver("Myopic", logger, small_world, horizon=0)


def test_sweep_traces_a_monotone_curve(logger: Logger) -> None:
    """Larger tilts trade leakage for distortion along the sweep"""
    world = WorldLoader(side=4).get_world("q1")
    rows = run_myopic(world, DEFAULT_BA_SWEEP, horizon=5, logger=logger)
    assert [r.lambda_ba for r in rows] == list(DEFAULT_BA_SWEEP)
    assert rows[0].avg_leakage_bits < 1e-9
    assert rows[-1].avg_leakage_bits > rows[0].avg_leakage_bits
    for low, high in zip(rows, rows[1:]):
        assert high.avg_distortion <= low.avg_distortion + 1e-6


def test_single_step_sweep_is_a_rate_distortion_curve(logger: Logger) -> None:
    """With one step both coordinates are monotone in the tilt"""
    world = WorldLoader(side=4).get_world("q1")
    rows = run_myopic(world, DEFAULT_BA_SWEEP, horizon=1, logger=logger)
    for low, high in zip(rows, rows[1:]):
        assert high.avg_distortion <= low.avg_distortion + 1e-9
        assert high.avg_leakage_bits >= low.avg_leakage_bits - 1e-9


def test_replaying_the_mechanism(logger: Logger, uniform_world: GridWorld) -> None:
    """The zero-multiplier mechanism also leaks nothing against the full-history observer"""
    mechanism = MyopicSolver("Myopic", logger, uniform_world, horizon=6, lam=0.0).solve()
    result = evaluate_policy(mechanism.provider(), uniform_world, 6, 3, 0.0, 0.0, seed=0)
    assert result.avg_leakage_bits == pytest.approx(0.0, abs=1e-9)
    assert result.avg_distortion == pytest.approx(2.5, abs=1e-9)


@pytest.mark.slow
def test_full_horizon_run_on_the_path_chain(logger: Logger) -> None:
    """A long run on the path-following chain stays between the trivial mechanisms"""
    world = WorldLoader(side=4).get_world("q2")
    mechanism = MyopicSolver("Myopic", logger, world, horizon=300, lam=2.0).solve()
    leakage, distortion = mechanism.get_quality()
    assert mechanism.horizon == 300
    assert 0.0 < leakage < 4.0
    assert 0.0 < distortion < 2.5


def _as_simplified_policy(mechanism: MyopicMechanism) -> ExplicitPolicy:
    k = mechanism.world.cell_count
    tables = []
    for t, kernel in enumerate(mechanism.kernels, start=1):
        by_state = kernel.reduced.transpose(1, 0, 2)  # [x, y_prev, y]
        if t == 1:
            table = np.broadcast_to(by_state[:, 0, None, :], (k, k, k))
        else:
            table = np.broadcast_to(by_state.reshape((k, 1) + (1,) * (t - 2) + (k, k)), (k,) * (t + 2))
        tables.append(table / table.sum(axis=-1, keepdims=True))
    return ExplicitPolicy(PolicyForm.SIMPLIFIED, tables, k)


@pytest.mark.parametrize("lam", [0.5, 2.0, 8.0])
def test_history_observer_learns_at_most_the_planned_leakage(logger: Logger, small_world: GridWorld,
                                                             lam: float) -> None:
    """Conditioning on the whole release history cannot raise what the myopic plan accounts for"""
    mechanism = MyopicSolver("Myopic", logger, small_world, horizon=3, lam=lam).solve()
    planned = sum(mechanism.step_leakage)
    exact = filter_leakage_total(_as_simplified_policy(mechanism), small_world.transitions, small_world.initial)
    assert exact >= -1e-12
    assert exact <= planned + 1e-9
