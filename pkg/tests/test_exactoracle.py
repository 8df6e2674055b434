#!/usr/bin/env python3
"""
Unit-tests for exactoracle.py.
"""
import numpy as np
import pytest

from locpriv.errors import DomainError, SizeGuardError, ZeroProbabilityObservationError
from locpriv.exactoracle import (ExplicitPolicy, PolicyForm, chain_rule_leakage, conditional_mutual_information,
                                 decomposed_leakage, enumerate_joint, filter_beliefs, filter_leakage_total,
                                 marginal_law, mutual_information_full, posterior, random_history_policy,
                                 random_simplified_policy, simplify_policy)
from locpriv.seeding import make_rng
from locpriv.transitions import InitialDistribution, TransitionMatrix, entropy_bits


def _truthful_history_policy(k: int, n: int) -> ExplicitPolicy:
    """q_t(y_t | x^t, y^{t-1}) = 1{y_t = x_t}"""
    tables = []
    for t in range(1, n + 1):
        eye = np.eye(k).reshape((1,) * (t - 1) + (k,) + (1,) * (t - 1) + (k,))
        tables.append(np.broadcast_to(eye, (k,) * (2 * t)))
    return ExplicitPolicy(PolicyForm.HISTORY, tables, k)


def _blind_simplified_policy(k: int, n: int, release: np.ndarray) -> ExplicitPolicy:
    """The same release distribution whatever happened"""
    return ExplicitPolicy(PolicyForm.SIMPLIFIED, [np.broadcast_to(release, (k,) * (t + 2)) for t in range(1, n + 1)], k)


def _random_chain(k: int, seed: int) -> tuple:
    rng = make_rng(seed)
    return (TransitionMatrix(rng.dirichlet(np.ones(k), size=k)), InitialDistribution(rng.dirichlet(np.ones(k))),
            rng)


def test_single_step_joint() -> None:
    """n = 1: P(x_1, y_1) = p_1(x_1) q_1(y_1 | x_1, x_1)"""
    q, p1, rng = _random_chain(3, 0)
    policy = random_simplified_policy(3, 1, rng)
    joint = enumerate_joint(policy, q, p1)
    diagonal = policy.tables[0][np.arange(3), np.arange(3)]
    assert np.allclose(joint.table, p1.p[:, None] * diagonal, atol=1e-15)


def test_deterministic_chain_gives_a_single_atom() -> None:
    """A cyclic chain from a fixed start released truthfully has one outcome"""
    q = TransitionMatrix([[0.0, 1.0], [1.0, 0.0]])
    p1 = InitialDistribution([1.0, 0.0])
    joint = enumerate_joint(_truthful_history_policy(2, 3), q, p1)
    assert joint.table[0, 1, 0, 0, 1, 0] == 1.0
    assert joint.table.sum() == 1.0
    assert np.count_nonzero(joint.table) == 1


def test_trajectory_marginal_is_the_chain() -> None:
    """Summing out the releases leaves p_1(x_1) q(x_2 | x_1)"""
    q, p1, rng = _random_chain(2, 1)
    joint = enumerate_joint(random_history_policy(2, 2, rng), q, p1)
    trajectory = joint.table.sum(axis=joint.y_axes(2))
    assert np.max(np.abs(trajectory - p1.p[:, None] * q.q)) < 1e-14


def test_independent_release_leaks_nothing() -> None:
    """A release independent of the trajectory has zero information in every form"""
    q, p1, _ = _random_chain(3, 2)
    joint = enumerate_joint(_blind_simplified_policy(3, 3, np.array([0.2, 0.3, 0.5])), q, p1)
    assert mutual_information_full(joint) < 1e-12
    assert abs(decomposed_leakage(joint)) < 1e-12
    assert abs(chain_rule_leakage(joint)) < 1e-12


def test_truthful_release_leaks_the_trajectory_entropy() -> None:
    """Y = X gives I(X^n; Y^n) = H(X^n) = H(p_1) + sum_t E H(q(. | X_{t-1}))"""
    q, p1, _ = _random_chain(3, 3)
    joint = enumerate_joint(_truthful_history_policy(3, 3), q, p1)
    row_entropy = entropy_bits(q.q)
    law = p1.p
    expected = float(entropy_bits(p1.p))
    for _ in range(2):
        expected += float(np.dot(law, row_entropy))
        law = law @ q.q
    assert mutual_information_full(joint) == pytest.approx(expected, abs=1e-10)
    assert decomposed_leakage(joint) == pytest.approx(expected, abs=1e-10)


def test_conditional_mutual_information_of_a_copy() -> None:
    """I(A; B | C) for B = A and A independent of C equals H(A)"""
    table = np.zeros((2, 2, 2))
    for a in range(2):
        for c in range(2):
            table[a, a, c] = 0.25
    assert conditional_mutual_information(table, (0,), (1,), (2,)) == pytest.approx(1.0, abs=1e-15)
    assert conditional_mutual_information(table, (0,), (2,)) == pytest.approx(0.0, abs=1e-15)


def test_simplified_policy_equivalence_on_samples() -> None:
    """Full information equals the per-step decomposition for simplified policies"""
    for seed in range(20):
        q, p1, rng = _random_chain(2 + seed % 2, seed)
        joint = enumerate_joint(random_simplified_policy(q.cell_count, 3, rng), q, p1)
        assert mutual_information_full(joint) == pytest.approx(decomposed_leakage(joint), abs=1e-10)
        assert mutual_information_full(joint) == pytest.approx(chain_rule_leakage(joint), abs=1e-12)


def test_history_policies_leak_at_least_the_decomposition() -> None:
    """Full information bounds the decomposition from above for history policies"""
    for seed in range(20):
        q, p1, rng = _random_chain(2, 100 + seed)
        joint = enumerate_joint(random_history_policy(2, 3, rng), q, p1)
        assert mutual_information_full(joint) >= decomposed_leakage(joint) - 1e-12


def test_simplification_keeps_the_step_marginals() -> None:
    """The simplified policy has the same P(X_t, X_{t-1}, Y^t) for every t"""
    q, p1, rng = _random_chain(2, 4)
    history = random_history_policy(2, 3, rng)
    simplified = simplify_policy(history, q, p1)
    assert simplified.form == PolicyForm.SIMPLIFIED
    original = enumerate_joint(history, q, p1)
    rebuilt = enumerate_joint(simplified, q, p1)
    for t in range(1, 4):
        assert np.max(np.abs(marginal_law(original, t) - marginal_law(rebuilt, t))) < 1e-12
    assert decomposed_leakage(original) == pytest.approx(decomposed_leakage(rebuilt), abs=1e-10)


def test_posteriors() -> None:
    """Truthful releases pin the location; blind releases leave the prior dynamics"""
    q = TransitionMatrix(np.full((2, 2), 0.5))
    p1 = InitialDistribution([0.3, 0.7])
    truthful = enumerate_joint(_truthful_history_policy(2, 2), q, p1)
    assert np.array_equal(posterior(truthful, (1, 2)), [0.0, 1.0])
    blind = enumerate_joint(_blind_simplified_policy(2, 2, np.array([0.5, 0.5])), q, p1)
    assert np.allclose(posterior(blind, (2,)), [0.3, 0.7])
    assert np.allclose(posterior(blind, (1, 1)), [0.5, 0.5])


def test_impossible_prefix() -> None:
    """Conditioning on a release sequence of probability 0 raises"""
    q = TransitionMatrix([[0.0, 1.0], [1.0, 0.0]])
    joint = enumerate_joint(_truthful_history_policy(2, 2), q, InitialDistribution([1.0, 0.0]))
    with pytest.raises(ZeroProbabilityObservationError):
        posterior(joint, (1, 1))
    with pytest.raises(DomainError):
        posterior(joint, (1, 2, 1))


def test_filter_matches_posteriors() -> None:
    """The recursive filter reproduces the enumerated posterior on every prefix"""
    q, p1, rng = _random_chain(3, 5)
    policy = random_simplified_policy(3, 3, rng)
    joint = enumerate_joint(policy, q, p1)
    prefixes = 0
    for prefix, belief, probability in filter_beliefs(policy, q, p1):
        assert np.allclose(belief.probs, posterior(joint, prefix), atol=1e-12)
        assert probability > 0.0
        prefixes += 1
    assert prefixes == 3 + 9 + 27
    assert filter_leakage_total(policy, q, p1) == pytest.approx(decomposed_leakage(joint), abs=1e-10)


def test_size_guard() -> None:
    """Joints above the enumeration limit are refused"""
    rng = make_rng(6)
    policy = random_simplified_policy(4, 6, rng)
    with pytest.raises(SizeGuardError):
        enumerate_joint(policy, TransitionMatrix(np.full((4, 4), 0.25)), InitialDistribution.uniform(4))


def test_policy_validation() -> None:
    """Tables must have the step's shape and sum to one; history policies have no kernel"""
    with pytest.raises(DomainError):
        ExplicitPolicy(PolicyForm.SIMPLIFIED, [np.full((2, 2), 0.5)], 2)
    with pytest.raises(DomainError):
        ExplicitPolicy(PolicyForm.HISTORY, [np.full((2, 2), 0.4)], 2)
    with pytest.raises(DomainError):
        _truthful_history_policy(2, 2).kernel(1, ())
