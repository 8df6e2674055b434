#!/usr/bin/env python3
"""
This module defines the Markov model of the true trajectory.

Classes:
    TransitionMatrix: Row-stochastic matrix q with q[x, x'] = q_x(x' | x).
    InitialDistribution: Law p_{x_1} of the first location.

Functions:
    build_q0, build_q1, build_q2: The three transition families of the grid experiments.
    default_r: The distance weights r_0 = 1, r_i = (max_distance + 1) - i.
"""

import json
from typing import Any, Dict, Sequence, Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import ConstructionError, DomainError
from .gridspec import GridSpec

STOCHASTIC_TOLERANCE = 1e-12
# tolerance accepted when reading hand-written matrices; rows are renormalized afterwards
IMPORT_TOLERANCE = 1e-9


def _as_probabilities(values: ArrayLike, tolerance: float, what: str) -> NDArray[np.float64]:
    """Validates a probability array along its last axis and renormalizes it"""
    probs = np.array(values, dtype=np.float64)
    if not np.all(np.isfinite(probs)):
        raise DomainError(f"{what} contains non-finite entries")
    if np.any(probs < 0.0):
        raise DomainError(f"{what} contains negative entries")
    sums = probs.sum(axis=-1, keepdims=True)
    if np.any(np.abs(sums - 1.0) > tolerance):
        raise DomainError(f"{what} does not sum to 1 (max deviation {np.max(np.abs(sums - 1.0)):.3e})")
    probs = probs / sums
    probs.setflags(write=False)
    return probs


def entropy_bits(probs: NDArray[np.float64]) -> NDArray[np.float64]:
    """Shannon entropy along the last axis, in bits (0 log 0 = 0)"""
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(probs > 0.0, -probs * np.log2(probs), 0.0)
    return np.asarray(terms.sum(axis=-1), dtype=np.float64)


class TransitionMatrix:
    """Represents the time-homogeneous transition law of the true trajectory"""

    def __init__(self, q: ArrayLike, tolerance: float = STOCHASTIC_TOLERANCE) -> None:
        probs = np.asarray(q, dtype=np.float64)
        if probs.ndim != 2 or probs.shape[0] != probs.shape[1]:
            raise DomainError(f"transition matrix must be square, got shape {probs.shape}")
        self.q: NDArray[np.float64] = _as_probabilities(probs, tolerance, "transition matrix")

    @classmethod
    def from_weights(cls, weights: NDArray[np.float64]) -> "TransitionMatrix":
        """Row-normalizes nonnegative weights"""
        if np.any(weights < 0.0):
            raise ConstructionError("transition weights must be nonnegative")
        sums = weights.sum(axis=1, keepdims=True)
        empty = np.flatnonzero(sums[:, 0] <= 0.0)
        if empty.size:
            raise ConstructionError(f"rows {[int(i) + 1 for i in empty]} have zero total weight")
        return cls(weights / sums)

    @classmethod
    def identity(cls, cell_count: int) -> "TransitionMatrix":
        return cls(np.eye(cell_count))

    @property
    def cell_count(self) -> int:
        return int(self.q.shape[0])

    def next_distribution(self, cell: int) -> NDArray[np.float64]:
        """Returns q(. | cell) for a 1-based cell"""
        if not 1 <= cell <= self.cell_count:
            raise DomainError(f"cell {cell} outside 1..{self.cell_count}")
        return self.q[cell - 1]

    def stationary(self) -> NDArray[np.float64]:
        """Stationary distribution pi with pi q = pi (least-squares solution)"""
        k = self.cell_count
        system = np.vstack([self.q.T - np.eye(k), np.ones((1, k))])
        rhs = np.zeros(k + 1)
        rhs[-1] = 1.0
        pi, *_ = np.linalg.lstsq(system, rhs, rcond=None)
        pi = np.clip(pi, 0.0, None)
        return np.asarray(pi / pi.sum(), dtype=np.float64)

    def conditional_entropy(self, prior: NDArray[np.float64]) -> float:
        """H(X_{t+1} | X_t) in bits when X_t ~ prior"""
        return float(np.dot(prior, entropy_bits(self.q)))

    def entropy_rate(self) -> float:
        """Entropy rate of the stationary chain in bits per step"""
        return self.conditional_entropy(self.stationary())

    def to_dict(self, side: int) -> Dict[str, Any]:
        return {"side": side, "rows": self.q.tolist()}

    def to_json(self, side: int) -> str:
        return json.dumps(self.to_dict(side))

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> Tuple[GridSpec, "TransitionMatrix"]:
        """Reads {"side": s, "rows": [[...]]}; returns the grid and the matrix"""
        try:
            spec = GridSpec(int(data["side"]))
            rows = np.array(data["rows"], dtype=np.float64)
        except (KeyError, TypeError, ValueError) as e:
            raise DomainError(f"malformed transition matrix document: {e}") from e
        if rows.shape != (spec.cell_count, spec.cell_count):
            raise DomainError(
                f"expected {spec.cell_count}x{spec.cell_count} rows for side {spec.side}, got {rows.shape}")
        return spec, cls(rows, tolerance=IMPORT_TOLERANCE)

    @classmethod
    def from_json(cls, text: str) -> Tuple[GridSpec, "TransitionMatrix"]:
        return cls.from_dict(json.loads(text))


class InitialDistribution:
    """Represents the law of the first true location"""

    def __init__(self, p: ArrayLike, tolerance: float = STOCHASTIC_TOLERANCE) -> None:
        probs = np.asarray(p, dtype=np.float64)
        if probs.ndim != 1:
            raise DomainError(f"initial distribution must be a vector, got shape {probs.shape}")
        self.p: NDArray[np.float64] = _as_probabilities(probs, tolerance, "initial distribution")

    @classmethod
    def uniform(cls, cell_count: int) -> "InitialDistribution":
        return cls(np.full(cell_count, 1.0 / cell_count))

    @property
    def cell_count(self) -> int:
        return int(self.p.shape[0])


def default_r(spec: GridSpec) -> Tuple[float, ...]:
    """r_0 = 1 and r_i = (max_distance + 1) - i; (1, 6, 5, 4, 3, 2, 1) on the 4x4 grid"""
    top = spec.max_distance + 1
    return (1.0,) + tuple(float(top - i) for i in range(1, spec.max_distance + 1))


def build_q0(spec: GridSpec) -> TransitionMatrix:
    """Every transition has probability 1 / cell_count"""
    k = spec.cell_count
    return TransitionMatrix(np.full((k, k), 1.0 / k))


def build_q1(spec: GridSpec, r: Sequence[float]) -> TransitionMatrix:
    """Weights r_d / d by distance d, r_0 for staying; rows normalized"""
    r_arr = np.asarray(r, dtype=np.float64)
    if r_arr.ndim != 1 or r_arr.size < spec.max_distance + 1:
        raise DomainError(f"r needs an entry for every distance 0..{spec.max_distance}, got {r_arr.size}")
    if np.any(r_arr < 0.0):
        raise DomainError("r entries must be nonnegative")
    dist = spec.distance_matrix().astype(np.int64)
    weights = r_arr[dist] / np.maximum(dist, 1)
    return TransitionMatrix.from_weights(weights)


def build_q2(spec: GridSpec, r0: float, r1: float) -> TransitionMatrix:
    """Path-following chain: one preferred successor per cell with weight r1, others r0.

    The preferred successor of x is x + 1 inside a row and x + side at the end of a
    row; the last cell prefers itself. Weights are divided by max(d, 1).
    """
    if r0 < 0.0 or r1 < 0.0:
        raise DomainError("r0 and r1 must be nonnegative")
    k = spec.cell_count
    u = np.full((k, k), float(r0))
    for x in range(1, k):
        successor = x + 1 if x % spec.side != 0 else x + spec.side
        u[x - 1, successor - 1] = r1
    u[k - 1, k - 1] = r1
    dist = spec.distance_matrix()
    return TransitionMatrix.from_weights(u / np.maximum(dist, 1.0))
