#!/usr/bin/env python3
"""
This module defines the OracleSuite class, which checks the leakage identities
and the belief filter against exact enumeration on random small instances.

Properties:
    simplified-policy equivalence: full MI equals the per-step decomposition for simplified policies.
    history-policy inequality: full MI bounds the decomposition from above, strictly at least once.
    conditional-law construction: simplifying a history policy keeps the step marginals.
    chain rule: full MI equals sum_t I(X^t; Y_t | Y^{t-1}).
    filter consistency: the recursive belief equals the enumerated posterior on every prefix.
    leakage telescoping: expected leakage summed along the filter equals the decomposition.

Classes:
    PropertyReport: Outcome of one property.
    SuiteReport: Outcome of the whole suite.
    OracleSuite: Runs the properties.
"""

from dataclasses import dataclass, field
from typing import Callable, List, Tuple

import numpy as np

from .beliefmdp import belief_update
from .exactoracle import (FilterFn, JointLaw, chain_rule_leakage, decomposed_leakage, enumerate_joint,
                          filter_beliefs, filter_leakage_total, marginal_law, mutual_information_full,
                          posterior, random_history_policy, random_simplified_policy, simplify_policy)
from .logger import Logger
from .seeding import make_rng
from .transitions import InitialDistribution, TransitionMatrix


@dataclass
class PropertyReport:
    name: str
    instances: int
    max_error: float
    passed: bool
    detail: str = ""


@dataclass
class SuiteReport:
    reports: List[PropertyReport] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)

    def failing(self) -> List[str]:
        return [r.name for r in self.reports if not r.passed]

    def to_text(self) -> str:
        lines = []
        for r in self.reports:
            status = "PASS" if r.passed else "FAIL"
            line = f"{status} {r.name}: {r.instances} instances, max error {r.max_error:.3e}"
            lines.append(line + (f" ({r.detail})" if r.detail else ""))
        return "\n".join(lines)


def random_instance(cell_count: int, rng: np.random.Generator) -> Tuple[TransitionMatrix, InitialDistribution]:
    """A random chain with full support and a random initial law"""
    alpha = np.ones(cell_count)
    return (TransitionMatrix(rng.dirichlet(alpha, size=cell_count)),
            InitialDistribution(rng.dirichlet(alpha)))


class OracleSuite:
    """Exact-enumeration property checks on small alphabets"""

    def __init__(self, logger: Logger, seed: int = 0, filter_fn: FilterFn = belief_update,
                 equivalence_instances: int = 1000, inequality_instances: int = 500,
                 construction_instances: int = 100, chain_rule_instances: int = 200,
                 filter_instances: int = 50, telescoping_instances: int = 100) -> None:
        self.name: str = "OracleSuite"
        self.logger: Logger = logger
        self.seed: int = seed
        self.filter_fn: FilterFn = filter_fn
        self.equivalence_instances: int = equivalence_instances
        self.inequality_instances: int = inequality_instances
        self.construction_instances: int = construction_instances
        self.chain_rule_instances: int = chain_rule_instances
        self.filter_instances: int = filter_instances
        self.telescoping_instances: int = telescoping_instances

    @staticmethod
    def _size(i: int, max_horizon: int, min_horizon: int = 1) -> Tuple[int, int]:
        """Cycles through 2-3 cells and the allowed horizons"""
        horizons = max_horizon - min_horizon + 1
        return 2 + i % 2, min_horizon + (i // 2) % horizons

    def check_equivalence(self) -> PropertyReport:
        rng = make_rng(self.seed, 1)
        worst = 0.0
        for i in range(self.equivalence_instances):
            k, n = self._size(i, 3)
            q, p1 = random_instance(k, rng)
            joint = enumerate_joint(random_simplified_policy(k, n, rng), q, p1)
            worst = max(worst, abs(mutual_information_full(joint) - decomposed_leakage(joint)))
        return PropertyReport("simplified-policy equivalence", self.equivalence_instances, worst, worst < 1e-10)

    def check_inequality(self) -> PropertyReport:
        rng = make_rng(self.seed, 2)
        worst = 0.0
        strict = 0
        for i in range(self.inequality_instances):
            k, n = self._size(i, 3, min_horizon=2)
            q, p1 = random_instance(k, rng)
            joint = enumerate_joint(random_history_policy(k, n, rng), q, p1)
            gap = mutual_information_full(joint) - decomposed_leakage(joint)
            worst = max(worst, -gap)
            strict += gap > 1e-9
        passed = worst <= 1e-12 and strict >= 1
        return PropertyReport("history-policy inequality", self.inequality_instances, max(worst, 0.0), passed,
                              f"strict in {strict} instances")

    def check_construction(self) -> PropertyReport:
        rng = make_rng(self.seed, 3)
        worst = 0.0
        worst_leakage = 0.0
        for i in range(self.construction_instances):
            k, n = self._size(i, 3, min_horizon=2)
            q, p1 = random_instance(k, rng)
            history = random_history_policy(k, n, rng)
            original = enumerate_joint(history, q, p1)
            rebuilt = enumerate_joint(simplify_policy(history, q, p1), q, p1)
            for t in range(1, n + 1):
                worst = max(worst, float(np.max(np.abs(marginal_law(original, t) - marginal_law(rebuilt, t)))))
            worst_leakage = max(worst_leakage, abs(decomposed_leakage(original) - decomposed_leakage(rebuilt)))
        passed = worst < 1e-12 and worst_leakage < 1e-10
        return PropertyReport("conditional-law construction", self.construction_instances, worst, passed,
                              f"leakage error {worst_leakage:.3e}")

    def check_chain_rule(self) -> PropertyReport:
        rng = make_rng(self.seed, 4)
        worst = 0.0
        for i in range(self.chain_rule_instances):
            k, n = self._size(i, 3)
            q, p1 = random_instance(k, rng)
            policy = random_history_policy(k, n, rng) if i % 4 < 2 else random_simplified_policy(k, n, rng)
            joint = enumerate_joint(policy, q, p1)
            worst = max(worst, abs(mutual_information_full(joint) - chain_rule_leakage(joint)))
        return PropertyReport("chain rule", self.chain_rule_instances, worst, worst < 1e-12)

    def check_filter(self, cell_count: int = 3, horizon: int = 4) -> PropertyReport:
        rng = make_rng(self.seed, 5)
        worst = 0.0
        prefixes = 0
        for _ in range(self.filter_instances):
            q, p1 = random_instance(cell_count, rng)
            policy = random_simplified_policy(cell_count, horizon, rng)
            joint = enumerate_joint(policy, q, p1)
            for prefix, belief, _ in filter_beliefs(policy, q, p1, self.filter_fn):
                worst = max(worst, float(np.max(np.abs(belief.probs - posterior(joint, prefix)))))
                prefixes += 1
        return PropertyReport("filter consistency", self.filter_instances, worst, worst < 1e-10,
                              f"{prefixes} prefixes")

    def check_telescoping(self) -> PropertyReport:
        rng = make_rng(self.seed, 6)
        worst = 0.0
        for i in range(self.telescoping_instances):
            k, n = self._size(i, 3)
            q, p1 = random_instance(k, rng)
            policy = random_simplified_policy(k, n, rng)
            joint: JointLaw = enumerate_joint(policy, q, p1)
            worst = max(worst, abs(filter_leakage_total(policy, q, p1) - decomposed_leakage(joint)))
        return PropertyReport("leakage telescoping", self.telescoping_instances, worst, worst < 1e-10)

    def run_all(self) -> SuiteReport:
        checks: List[Callable[[], PropertyReport]] = [
            self.check_equivalence, self.check_inequality, self.check_construction,
            self.check_chain_rule, self.check_filter, self.check_telescoping]
        report = SuiteReport()
        self.logger.info(self.name, f"running {len(checks)} properties with seed {self.seed}")
        with self.logger.section():
            for check in checks:
                result = check()
                report.reports.append(result)
                if result.passed:
                    self.logger.info(self.name, f"{result.name}: ok ({result.instances} instances, "
                                                f"max error {result.max_error:.3e})")
                else:
                    self.logger.error(f"{result.name} failed: max error {result.max_error:.3e} {result.detail}")
        return report
