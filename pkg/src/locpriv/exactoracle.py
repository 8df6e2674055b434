#!/usr/bin/env python3
"""
This module enumerates the joint law of a true trajectory X^n and a release
sequence Y^n for small alphabets and horizons, and computes exact information
quantities on it. It is the reference the belief filter, the leakage
decomposition and both mechanisms are checked against.

Tables are numpy arrays with one axis per variable: the joint has axes
(x_1, ..., x_n, y_1, ..., y_n).

Policy tables for step t (1-based):
    history form:    q_t[x_1, ..., x_t, y_1, ..., y_{t-1}, y_t]
    simplified form: q_t[x_t, x_{t-1}, y_1, ..., y_{t-1}, y_t]
At t = 1 the simplified table has axes (x_1, x_0, y_1) and only its diagonal
x_0 = x_1 is used.

Classes:
    PolicyForm: History or simplified.
    ExplicitPolicy: A policy given by one table per step.
    JointLaw: The enumerated joint of (X^n, Y^n).
"""

import json
import string
from enum import Enum
from typing import Callable, Iterator, List, Sequence, Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .beliefmdp import belief_update, expected_leakage, observation_distribution
from .errors import DomainError, SizeGuardError, ZeroProbabilityObservationError
from .releasekernel import Belief, ReleaseKernel
from .transitions import InitialDistribution, TransitionMatrix

SIZE_GUARD = 10_000_000
TABLE_TOLERANCE = 1e-12

FilterFn = Callable[[Belief, ReleaseKernel, TransitionMatrix, int], Belief]
Prefix = Tuple[int, ...]


class PolicyForm(Enum):
    HISTORY = "history"
    SIMPLIFIED = "simplified"


class ExplicitPolicy:
    """A release policy over a horizon, one conditional table per step"""

    def __init__(self, form: PolicyForm, tables: Sequence[ArrayLike], cell_count: int) -> None:
        if not tables:
            raise DomainError("policy needs at least one step")
        checked: List[NDArray[np.float64]] = []
        for t, table in enumerate(tables, start=1):
            values = np.array(table, dtype=np.float64)
            ndim = 2 * t if form == PolicyForm.HISTORY else t + 2
            if values.shape != (cell_count,) * ndim:
                raise DomainError(f"step {t} table has shape {values.shape}, expected {(cell_count,) * ndim}")
            if np.any(values < 0.0) or np.max(np.abs(values.sum(axis=-1) - 1.0)) > TABLE_TOLERANCE:
                raise DomainError(f"step {t} table slices are not probability vectors")
            values.setflags(write=False)
            checked.append(values)
        self.form: PolicyForm = form
        self.tables: List[NDArray[np.float64]] = checked
        self.cell_count: int = cell_count

    @property
    def horizon(self) -> int:
        return len(self.tables)

    def kernel(self, t: int, y_prefix: Sequence[int]) -> ReleaseKernel:
        """The [x_t, x_{t-1}, y_t] kernel of a simplified policy after the 1-based prefix y^{t-1}"""
        if self.form != PolicyForm.SIMPLIFIED:
            raise DomainError("only simplified policies act as belief-MDP kernels")
        if len(y_prefix) != t - 1:
            raise DomainError(f"step {t} needs a prefix of length {t - 1}")
        index = tuple(y - 1 for y in y_prefix)
        return ReleaseKernel(self.tables[t - 1][(slice(None), slice(None)) + index], floor=0.0)


class JointLaw:
    """P(X^n = x^n, Y^n = y^n) as a table with axes (x_1..x_n, y_1..y_n)"""

    def __init__(self, table: ArrayLike, cell_count: int, horizon: int) -> None:
        values = np.array(table, dtype=np.float64)
        if values.shape != (cell_count,) * (2 * horizon):
            raise DomainError(f"joint table has shape {values.shape}")
        if np.any(values < 0.0) or abs(values.sum() - 1.0) > TABLE_TOLERANCE:
            raise DomainError(f"joint table must be nonnegative with mass 1, got {values.sum():.15f}")
        values.setflags(write=False)
        self.table: NDArray[np.float64] = values
        self.cell_count: int = cell_count
        self.horizon: int = horizon

    def x_axis(self, t: int) -> int:
        return t - 1

    def y_axis(self, t: int) -> int:
        return self.horizon + t - 1

    def x_axes(self, upto: int) -> Tuple[int, ...]:
        return tuple(range(upto))

    def y_axes(self, upto: int) -> Tuple[int, ...]:
        return tuple(self.horizon + i for i in range(upto))

    def to_json(self) -> str:
        return json.dumps({"cell_count": self.cell_count, "horizon": self.horizon,
                           "table": self.table.tolist()})


def enumerate_joint(policy: ExplicitPolicy, q: TransitionMatrix, p1: InitialDistribution) -> JointLaw:
    """Product-form joint p(x_1) q_1(y_1|.) prod_t q(x_t|x_{t-1}) q_t(y_t|.)

    Raises:
        SizeGuardError: if the joint would have more than SIZE_GUARD entries.
    """
    k, n = policy.cell_count, policy.horizon
    if q.cell_count != k or p1.cell_count != k:
        raise DomainError("policy, chain and initial law differ in size")
    if k ** (2 * n) > SIZE_GUARD:
        raise SizeGuardError(f"joint of {k} cells over {n} steps has {k ** (2 * n)} entries")
    letters = string.ascii_letters
    xs, ys = letters[:n], letters[n:2 * n]
    joint = np.asarray(p1.p, dtype=np.float64)
    subs = xs[0]
    for t in range(1, n + 1):
        if t > 1:
            joint = np.einsum(f"{subs},{xs[t - 2]}{xs[t - 1]}->{subs}{xs[t - 1]}", joint, q.q)
            subs += xs[t - 1]
        if policy.form == PolicyForm.HISTORY:
            factor = xs[:t] + ys[:t]
        else:
            factor = xs[t - 1] + (xs[t - 2] if t > 1 else xs[0]) + ys[:t]
        joint = np.einsum(f"{subs},{factor}->{subs}{ys[t - 1]}", joint, policy.tables[t - 1])
        subs += ys[t - 1]
    return JointLaw(np.einsum(f"{subs}->{xs}{ys}", joint), k, n)


def conditional_mutual_information(table: NDArray[np.float64], a: Sequence[int], b: Sequence[int],
                                   c: Sequence[int] = ()) -> float:
    """I(A; B | C) in bits for disjoint axis groups of a probability table"""
    keep = set(a) | set(b) | set(c)
    rest = tuple(i for i in range(table.ndim) if i not in keep)
    p_abc = table.sum(axis=rest, keepdims=True)
    p_ac = p_abc.sum(axis=tuple(b), keepdims=True)
    p_bc = p_abc.sum(axis=tuple(a), keepdims=True)
    p_c = p_abc.sum(axis=tuple(a) + tuple(b), keepdims=True)
    mask = p_abc > 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = (p_abc * p_c) / (p_ac * p_bc)
        terms = np.where(mask, p_abc * np.log2(np.where(mask, ratio, 1.0)), 0.0)
    return float(terms.sum())


def mutual_information_full(joint: JointLaw) -> float:
    """I(X^n; Y^n) in bits"""
    n = joint.horizon
    return max(conditional_mutual_information(joint.table, joint.x_axes(n), joint.y_axes(n)), 0.0)


def decomposed_leakage(joint: JointLaw) -> float:
    """sum_t I(X_t, X_{t-1}; Y_t | Y^{t-1}) in bits, with X_0 := X_1"""
    total = 0.0
    for t in range(1, joint.horizon + 1):
        current = (joint.x_axis(t),) if t == 1 else (joint.x_axis(t), joint.x_axis(t - 1))
        total += conditional_mutual_information(joint.table, current, (joint.y_axis(t),), joint.y_axes(t - 1))
    return total


def chain_rule_leakage(joint: JointLaw) -> float:
    """sum_t I(X^t; Y_t | Y^{t-1}) in bits"""
    return sum(conditional_mutual_information(joint.table, joint.x_axes(t), (joint.y_axis(t),),
                                              joint.y_axes(t - 1))
               for t in range(1, joint.horizon + 1))


def posterior(joint: JointLaw, y_prefix: Sequence[int]) -> NDArray[np.float64]:
    """P(X_t | Y^t = y_prefix) for a 1-based prefix of length t

    Raises:
        ZeroProbabilityObservationError: if the prefix has probability 0.
    """
    t = len(y_prefix)
    if not 1 <= t <= joint.horizon:
        raise DomainError(f"prefix length {t} outside 1..{joint.horizon}")
    keep = (joint.x_axis(t),) + joint.y_axes(t)
    rest = tuple(i for i in range(joint.table.ndim) if i not in keep)
    marginal = joint.table.sum(axis=rest)
    weights = marginal[(slice(None),) + tuple(y - 1 for y in y_prefix)]
    mass = weights.sum()
    if mass <= 0.0:
        raise ZeroProbabilityObservationError(f"release prefix {list(y_prefix)} has probability 0")
    return np.asarray(weights / mass, dtype=np.float64)


def marginal_law(joint: JointLaw, t: int) -> NDArray[np.float64]:
    """P(X_t, X_{t-1}, Y^t) with axes (x_t, x_{t-1}, y_1..y_t); (x_1, y_1) at t = 1"""
    if not 1 <= t <= joint.horizon:
        raise DomainError(f"step {t} outside 1..{joint.horizon}")
    keep = ((joint.x_axis(t - 1),) if t > 1 else ()) + (joint.x_axis(t),) + joint.y_axes(t)
    rest = tuple(i for i in range(joint.table.ndim) if i not in keep)
    marginal = joint.table.sum(axis=rest)
    return np.asarray(np.swapaxes(marginal, 0, 1) if t > 1 else marginal, dtype=np.float64)


def simplify_policy(policy: ExplicitPolicy, q: TransitionMatrix, p1: InitialDistribution) -> ExplicitPolicy:
    """Simplified policy q_t(y_t | x_t, x_{t-1}, y^{t-1}) = P(Y_t | X_t, X_{t-1}, Y^{t-1}) under `policy`.

    Conditions of probability 0 get the uniform release.
    """
    joint = enumerate_joint(policy, q, p1)
    k = policy.cell_count
    tables: List[NDArray[np.float64]] = []
    for t in range(1, policy.horizon + 1):
        marginal = marginal_law(joint, t)
        mass = marginal.sum(axis=-1, keepdims=True)
        conditional = np.where(mass > 0.0, marginal / np.where(mass > 0.0, mass, 1.0), 1.0 / k)
        if t == 1:
            conditional = np.broadcast_to(conditional[:, None, :], (k, k, k))
        tables.append(conditional)
    return ExplicitPolicy(PolicyForm.SIMPLIFIED, tables, k)


def random_simplified_policy(cell_count: int, horizon: int, rng: np.random.Generator) -> ExplicitPolicy:
    """Every conditional slice drawn uniformly from the simplex"""
    alpha = np.ones(cell_count)
    tables = [rng.dirichlet(alpha, size=(cell_count,) * (t + 1)) for t in range(1, horizon + 1)]
    return ExplicitPolicy(PolicyForm.SIMPLIFIED, tables, cell_count)


def random_history_policy(cell_count: int, horizon: int, rng: np.random.Generator) -> ExplicitPolicy:
    alpha = np.ones(cell_count)
    tables = [rng.dirichlet(alpha, size=(cell_count,) * (2 * t - 1)) for t in range(1, horizon + 1)]
    return ExplicitPolicy(PolicyForm.HISTORY, tables, cell_count)


def filter_beliefs(policy: ExplicitPolicy, q: TransitionMatrix, p1: InitialDistribution,
                   filter_fn: FilterFn = belief_update) -> Iterator[Tuple[Tuple[int, ...], Belief, float]]:
    """Runs the recursive belief filter along every release prefix of positive probability.

    Yields (prefix, belief on X_t after the prefix, prefix probability).
    """
    identity = TransitionMatrix.identity(policy.cell_count)

    def descend(prefix: Prefix, belief: Belief, probability: float) -> Iterator[Tuple[Prefix, Belief, float]]:
        t = len(prefix) + 1
        if t > policy.horizon:
            return
        kernel = policy.kernel(t, prefix)
        chain = identity if t == 1 else q
        releases = observation_distribution(belief, kernel, chain)
        for y in range(1, policy.cell_count + 1):
            if releases[y - 1] <= 0.0:
                continue
            following = filter_fn(belief, kernel, chain, y)
            extended = prefix + (y,)
            yield extended, following, probability * float(releases[y - 1])
            yield from descend(extended, following, probability * float(releases[y - 1]))

    yield from descend((), Belief(p1.p), 1.0)


def filter_leakage_total(policy: ExplicitPolicy, q: TransitionMatrix, p1: InitialDistribution) -> float:
    """Expected per-step leakage summed over the horizon along the belief filter (bits)"""
    identity = TransitionMatrix.identity(policy.cell_count)
    total = expected_leakage(Belief(p1.p), policy.kernel(1, ()), identity)
    for prefix, belief, probability in filter_beliefs(policy, q, p1):
        t = len(prefix) + 1
        if t <= policy.horizon:
            total += probability * expected_leakage(belief, policy.kernel(t, prefix), q)
    return total
