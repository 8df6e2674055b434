#!/usr/bin/env python3
"""
Unit-tests for evaluator.py and kernelprovider.py.
"""
import numpy as np
import pytest

from locpriv.actorcritic import init_actor
from locpriv.blahutarimoto import MyopicKernel
from locpriv.errors import DomainError
from locpriv.evaluator import evaluate_policy, run_rollout
from locpriv.gridworld import GridWorld
from locpriv.kernelprovider import ActorKernelProvider, FixedKernelProvider, MyopicKernelProvider
from locpriv.releasekernel import Belief, ReleaseKernel
from locpriv.seeding import make_rng
from locpriv.transitions import entropy_bits
from locpriv.worldloader import WorldLoader


def test_uniform_release_is_exact(uniform_world: GridWorld) -> None:
    """The uniform kernel on the uniform chain: 0 bits and distortion 2.5 in every roll-out"""
    result = evaluate_policy(FixedKernelProvider(ReleaseKernel.uniform(16)), uniform_world,
                             horizon=10, rollouts=5, lam=1.0, dbar=0.0, seed=0)
    assert result.avg_leakage_bits == pytest.approx(0.0, abs=1e-12)
    assert result.avg_distortion == pytest.approx(2.5, abs=1e-9)
    assert result.stderr_distortion == pytest.approx(0.0, abs=1e-12)
    assert result.rollout_leakage.shape == (5,)


def test_location_only_kernel_is_deterministic(uniform_world: GridWorld) -> None:
    """A kernel that ignores x_prev has the same leakage and distortion at every step"""
    k = 16
    rows = make_rng(1).dirichlet(np.ones(k), size=k)
    kernel = ReleaseKernel(np.broadcast_to(rows[:, None, :], (k, k, k)), floor=0.0)
    joint = rows / k
    release = joint.sum(axis=0)
    expected_leakage = float(np.sum(joint * np.log2(rows / release[None, :])))
    expected_distortion = float(np.sum(joint * uniform_world.distortion))
    result = evaluate_policy(FixedKernelProvider(kernel), uniform_world, 8, 4, 0.0, 0.0, seed=2)
    assert np.allclose(result.rollout_leakage, expected_leakage, atol=1e-10)
    assert np.allclose(result.rollout_distortion, expected_distortion, atol=1e-10)


def test_truthful_release_leaks_the_chain_entropy() -> None:
    """Releasing the true cell costs H(p_1) first and then H(q(. | x_{t-1})) per step"""
    world = WorldLoader(side=2).get_world("q1")
    horizon, rollouts = 10, 400
    provider = FixedKernelProvider(ReleaseKernel.identity(4, floor=0.0))
    result = evaluate_policy(provider, world, horizon, rollouts, 0.0, 0.0, seed=3)
    row_entropy = entropy_bits(world.transitions.q)
    law = world.initial.p.copy()
    expected = float(entropy_bits(law))
    for _ in range(2, horizon + 1):
        expected += float(np.dot(law, row_entropy))
        law = law @ world.transitions.q
    expected /= horizon
    assert result.avg_distortion == pytest.approx(0.0, abs=1e-12)
    assert abs(result.avg_leakage_bits - expected) <= 4.0 * result.stderr_leakage + 1e-9


def test_single_rollout_matches_run_rollout(small_world: GridWorld) -> None:
    """R = 1 reports the time average of roll-out 0"""
    provider = FixedKernelProvider(ReleaseKernel(make_rng(0).dirichlet(np.ones(4), size=(4, 4))))
    result = evaluate_policy(provider, small_world, 6, 1, 1.0, 0.0, seed=5, keys=(9,))
    leakage, distortion = run_rollout(provider, small_world, 6, 1.0, 0.0, make_rng(5, 9, 0))
    assert result.avg_leakage_bits == leakage
    assert result.avg_distortion == distortion
    assert result.stderr_leakage == 0.0


def test_evaluation_is_reproducible(small_world: GridWorld) -> None:
    """Equal seeds and keys give equal results for a sampling actor"""
    provider = ActorKernelProvider(init_actor(4, make_rng(0), hidden=(8, 8)), mode="sample")
    first = evaluate_policy(provider, small_world, 5, 3, 1.0, 0.0, seed=1, keys=(2,))
    second = evaluate_policy(provider, small_world, 5, 3, 1.0, 0.0, seed=1, keys=(2,))
    assert np.array_equal(first.rollout_leakage, second.rollout_leakage)


def test_invalid_evaluation_arguments(small_world: GridWorld) -> None:
    """Horizon and roll-out count must be positive; modes must be known"""
    provider = FixedKernelProvider(ReleaseKernel.uniform(4))
    with pytest.raises(DomainError):
        evaluate_policy(provider, small_world, 0, 1, 0.0, 0.0, seed=0)
    with pytest.raises(DomainError):
        ActorKernelProvider(init_actor(4, make_rng(0), hidden=(8, 8)), mode="median")


def test_myopic_provider_selects_by_last_release() -> None:
    """Step t uses kernel t conditioned on the release of step t - 1"""
    k = 4
    reduced = make_rng(0).dirichlet(np.ones(k), size=(k, k))
    provider = MyopicKernelProvider([MyopicKernel(reduced), MyopicKernel.uniform(k)])
    rng = make_rng(1)
    belief = Belief.uniform(k)
    first = provider.kernel(belief, 0, None, rng)
    assert np.allclose(first.slice(2, 3), reduced[0, 1])
    conditioned = MyopicKernelProvider([MyopicKernel(reduced)] * 2).kernel(belief, 1, 3, rng)
    assert np.allclose(conditioned.slice(4, 1), reduced[2, 3])
    assert np.allclose(provider.kernel(belief, 1, 2, rng).probs, 1.0 / k)
    with pytest.raises(DomainError):
        provider.kernel(belief, 2, 1, rng)
