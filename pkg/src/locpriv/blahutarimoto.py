#!/usr/bin/env python3
"""
This module implements the per-step problem of the myopic mechanism: for every
value c of the previous release, minimise

    I(X_t, X_{t-1}; Y_t | Y_{t-1} = c) + lambda_ba E[d(X_t, Y_t) | Y_{t-1} = c]

(nats) by Blahut-Arimoto alternating minimisation, and the forward propagation
of the joint law of (X_t, X_{t-1}, Y_{t-1}) between steps.

Distortion only depends on x_t, so the minimiser ignores x_{t-1}: kernels are
stored reduced as [c, x, y] and exposed broadcast as [c, x, x_prev, y].

Classes:
    MyopicState: Joint law of (x_t, x_{t-1}, y_{t-1}) at step t.
    MyopicKernel: Release kernel conditioned on the previous release.
    BAResult: Kernel, leakage, distortion and convergence of one step.
"""

from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.special import logsumexp

from .errors import DomainError, NumericError
from .gridspec import GridSpec
from .releasekernel import ReleaseKernel
from .transitions import InitialDistribution, TransitionMatrix

MASS_TOLERANCE = 1e-10
DRIFT_TOLERANCE = 1e-8
BA_TOLERANCE = 1e-9
BA_MAX_ITER = 500
# relative slack allowed when asserting that the objective does not increase
MONOTONE_SLACK = 1e-12


class MyopicState:
    """joint[x_t, x_{t-1}, y_{t-1}]; at t = 1 all mass sits on condition slot 0"""

    def __init__(self, joint: ArrayLike, step: int) -> None:
        values = np.array(joint, dtype=np.float64)
        if values.ndim != 3 or len(set(values.shape)) != 1:
            raise DomainError(f"myopic joint must have shape (K, K, K), got {values.shape}")
        if np.any(values < 0.0) or abs(values.sum() - 1.0) > MASS_TOLERANCE:
            raise DomainError(f"myopic joint must be nonnegative with mass 1, got {values.sum():.12f}")
        if step < 1:
            raise DomainError(f"step must be >= 1, got {step}")
        values.setflags(write=False)
        self.joint: NDArray[np.float64] = values
        self.step: int = step

    @classmethod
    def initial(cls, p1: InitialDistribution) -> "MyopicState":
        """joint[x, x, 0] = p1(x), the x_prev := x_1 convention"""
        k = p1.cell_count
        joint = np.zeros((k, k, k))
        joint[np.arange(k), np.arange(k), 0] = p1.p
        return cls(joint, 1)

    @property
    def cell_count(self) -> int:
        return int(self.joint.shape[0])

    def condition_mass(self) -> NDArray[np.float64]:
        return np.asarray(self.joint.sum(axis=(0, 1)), dtype=np.float64)


class MyopicKernel:
    """q(y | x, x_prev, y_prev) with reduced storage [y_prev, x, y]"""

    def __init__(self, reduced: ArrayLike) -> None:
        values = np.array(reduced, dtype=np.float64)
        if values.ndim != 3 or len(set(values.shape)) != 1:
            raise DomainError(f"myopic kernel must have shape (K, K, K), got {values.shape}")
        if np.any(values < 0.0) or np.max(np.abs(values.sum(axis=-1) - 1.0)) > MASS_TOLERANCE:
            raise DomainError("myopic kernel slices must be probability vectors")
        values.setflags(write=False)
        self.reduced: NDArray[np.float64] = values

    @classmethod
    def uniform(cls, cell_count: int) -> "MyopicKernel":
        return cls(np.full((cell_count,) * 3, 1.0 / cell_count))

    @property
    def cell_count(self) -> int:
        return int(self.reduced.shape[0])

    @property
    def full(self) -> NDArray[np.float64]:
        """Read-only view indexed [y_prev, x, x_prev, y]"""
        k = self.cell_count
        return np.broadcast_to(self.reduced[:, :, None, :], (k, k, k, k))

    def release_kernel(self, condition: int) -> ReleaseKernel:
        """The [x, x_prev, y] kernel used after releasing `condition` (0-based slot)"""
        return ReleaseKernel(self.full[condition], floor=0.0)


@dataclass(frozen=True)
class BAResult:
    kernel: MyopicKernel
    leakage_bits: float
    distortion: float
    converged: bool
    iterations: int
    objective_trace: List[float] = field(default_factory=list)


def _kernel_terms(p_cond: NDArray[np.float64], log_q: NDArray[np.float64], log_m: NDArray[np.float64],
                  dist: NDArray[np.float64]) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Per-condition mutual information (nats) and expected distortion"""
    q = np.exp(log_q)
    with np.errstate(invalid="ignore"):
        log_ratio = np.where(q > 0.0, log_q - log_m[:, None, :], 0.0)
    info = np.einsum("cx,cxy,cxy->c", p_cond, q, log_ratio)
    distortion = np.einsum("cx,cxy,xy->c", p_cond, q, dist)
    return info, distortion


def ba_solve_step(state: MyopicState, lambda_ba: float, spec: GridSpec,
                  tol: float = BA_TOLERANCE, max_iter: int = BA_MAX_ITER) -> BAResult:
    """Blahut-Arimoto for every previous-release condition at once.

    Raises:
        DomainError: for a negative lambda_ba or mismatched sizes.
        NumericError: if the Lagrangian objective increases between iterations.
    """
    if lambda_ba < 0.0:
        raise DomainError(f"lambda_ba must be nonnegative, got {lambda_ba}")
    k = state.cell_count
    if spec.cell_count != k:
        raise DomainError(f"grid has {spec.cell_count} cells, state has {k}")
    dist = spec.distance_matrix()
    p_xc = state.joint.sum(axis=1)
    mass = p_xc.sum(axis=0)
    active = mass > 0.0
    p_cond = np.where(active[None, :], p_xc / np.where(active, mass, 1.0)[None, :], 1.0 / k).T
    with np.errstate(divide="ignore"):
        log_p = np.log(p_cond)

    log_tilt = -lambda_ba * dist
    log_m = np.full((k, k), -np.log(k))
    trace: List[float] = []
    converged = False
    iterations = 0
    log_q = np.empty((k, k, k))
    for iterations in range(1, max_iter + 1):
        log_q = log_m[:, None, :] + log_tilt[None, :, :]
        log_q = log_q - logsumexp(log_q, axis=2, keepdims=True)
        log_m = logsumexp(log_p[:, :, None] + log_q, axis=1)
        info, distortion = _kernel_terms(p_cond, log_q, log_m, dist)
        objective = float(np.dot(mass, info + lambda_ba * distortion))
        if trace:
            previous = trace[-1]
            if objective > previous + MONOTONE_SLACK * max(1.0, abs(previous)):
                raise NumericError(
                    f"Blahut-Arimoto objective increased from {previous:.15g} to {objective:.15g}")
            trace.append(objective)
            if previous - objective < tol:
                converged = True
                break
        else:
            trace.append(objective)

    kernel = np.exp(log_q)
    kernel[~active] = 1.0 / k
    kernel = kernel / kernel.sum(axis=-1, keepdims=True)
    info, distortion = _kernel_terms(p_cond, log_q, log_m, dist)
    return BAResult(kernel=MyopicKernel(kernel),
                    leakage_bits=max(float(np.dot(mass, info)) / np.log(2.0), 0.0),
                    distortion=float(np.dot(mass, distortion)),
                    converged=converged, iterations=iterations, objective_trace=trace)


def propagate(state: MyopicState, kernel: MyopicKernel, q: TransitionMatrix) -> MyopicState:
    """next[x_{t+1}, x_t, y_t] = sum q(x_{t+1}|x_t) kernel[y_{t-1}, x_t, x_{t-1}, y_t] state[x_t, x_{t-1}, y_{t-1}]

    Raises:
        NumericError: if the propagated mass drifts from 1 by more than DRIFT_TOLERANCE.
    """
    if not state.cell_count == kernel.cell_count == q.cell_count:
        raise DomainError("state, kernel and chain differ in size")
    following = np.einsum("abc,cabd,ae->ead", state.joint, kernel.full, q.q)
    total = following.sum()
    if abs(total - 1.0) > DRIFT_TOLERANCE:
        raise NumericError(f"myopic joint mass drifted to {total:.12f}")
    return MyopicState(following / total, state.step + 1)
