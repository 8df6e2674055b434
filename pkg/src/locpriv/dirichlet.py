#!/usr/bin/env python3
"""
Dirichlet distribution helpers used by the actor.

The actor produces unconstrained pre-activations z; the concentrations are
xi = softplus(z) + XI_OFFSET, so dxi/dz = expit(z).

Classes:
    DirichletParams: A validated concentration vector.
"""

from typing import Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import special

from .errors import DomainError

XI_OFFSET = 1e-3
# simplex points are clamped to [SIMPLEX_CLAMP, 1] before taking logs
SIMPLEX_CLAMP = 1e-12


class DirichletParams:
    """Strictly positive finite concentrations"""

    def __init__(self, xi: ArrayLike) -> None:
        values = np.array(xi, dtype=np.float64)
        if values.ndim != 1 or values.size < 2:
            raise DomainError(f"concentrations must be a vector of length >= 2, got shape {values.shape}")
        if not np.all(np.isfinite(values)) or np.any(values <= 0.0):
            raise DomainError("concentrations must be finite and strictly positive")
        values.setflags(write=False)
        self.xi: NDArray[np.float64] = values

    @property
    def size(self) -> int:
        return int(self.xi.size)


def log_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0"""
    if not x > 0.0:
        raise DomainError(f"log_gamma needs x > 0, got {x}")
    return float(special.gammaln(x))


def digamma(x: float) -> float:
    if not x > 0.0:
        raise DomainError(f"digamma needs x > 0, got {x}")
    return float(special.digamma(x))


def softplus(z: ArrayLike) -> NDArray[np.float64]:
    return np.asarray(np.logaddexp(0.0, np.asarray(z, dtype=np.float64)), dtype=np.float64)


def concentrations(z: ArrayLike) -> NDArray[np.float64]:
    """Maps actor pre-activations to concentrations (works row-wise on batches)"""
    return softplus(z) + XI_OFFSET


def concentration_slope(z: ArrayLike) -> NDArray[np.float64]:
    """dxi/dz of concentrations()"""
    return np.asarray(special.expit(np.asarray(z, dtype=np.float64)), dtype=np.float64)


def log_gamma_variates(shape: NDArray[np.float64], rng: np.random.Generator) -> NDArray[np.float64]:
    """ln G with G ~ Gamma(shape, 1), elementwise.

    Shapes below 1 are boosted: G(a) = G(a + 1) U^(1/a), evaluated in log space so
    that tiny shapes do not underflow. One uniform is drawn per entry regardless of
    the shape, which keeps the number of draws independent of the values.
    """
    boosted = shape < 1.0
    gamma = rng.standard_gamma(np.where(boosted, shape + 1.0, shape))
    uniform = 1.0 - rng.random(shape.shape)
    with np.errstate(divide="ignore"):
        log_g = np.log(gamma)
    return np.where(boosted, log_g + np.log(uniform) / shape, log_g)


def dirichlet_sample(params: DirichletParams, rng: np.random.Generator) -> NDArray[np.float64]:
    """One point on the simplex drawn from Dirichlet(xi)"""
    return dirichlet_sample_batch(params.xi[None, :], rng)[0]


def dirichlet_sample_batch(xi: NDArray[np.float64], rng: np.random.Generator) -> NDArray[np.float64]:
    """Independent draws for every row of a (B, K) concentration matrix"""
    log_g = log_gamma_variates(np.asarray(xi, dtype=np.float64), rng)
    return np.asarray(special.softmax(log_g, axis=-1), dtype=np.float64)


def clamp_to_simplex(points: ArrayLike) -> NDArray[np.float64]:
    """Raises entries to at least SIMPLEX_CLAMP and renormalises along the last axis"""
    values = np.maximum(np.asarray(points, dtype=np.float64), SIMPLEX_CLAMP)
    return np.asarray(values / values.sum(axis=-1, keepdims=True), dtype=np.float64)


def dirichlet_mean(params: DirichletParams) -> NDArray[np.float64]:
    return np.asarray(params.xi / params.xi.sum(), dtype=np.float64)


def dirichlet_log_density(x: ArrayLike, params: DirichletParams) -> Tuple[float, NDArray[np.float64]]:
    """Log-density of x under Dirichlet(xi) and its gradient with respect to xi.

    Raises:
        DomainError: if x is not a point of the simplex of matching size, or has a
            zero entry. Positive entries below SIMPLEX_CLAMP are clamped.
    """
    point = np.asarray(x, dtype=np.float64)
    if point.shape != params.xi.shape:
        raise DomainError(f"point shape {point.shape} != concentration shape {params.xi.shape}")
    logp, grad = dirichlet_log_density_rows(point[None, :], params.xi[None, :])
    return float(logp[0]), grad[0]


def dirichlet_log_density_rows(points: ArrayLike, xi: ArrayLike) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Row-wise dirichlet_log_density for (B, K) points and concentrations.

    Returns the B log-densities and the (B, K) gradients with respect to xi.
    """
    x = np.asarray(points, dtype=np.float64)
    alpha = np.asarray(xi, dtype=np.float64)
    if x.ndim != 2 or x.shape != alpha.shape:
        raise DomainError(f"points {x.shape} and concentrations {alpha.shape} must be equal (B, K) arrays")
    if not np.all(np.isfinite(alpha)) or np.any(alpha <= 0.0):
        raise DomainError("concentrations must be finite and strictly positive")
    if np.any(x <= 0.0) or np.max(np.abs(x.sum(axis=1) - 1.0)) > 1e-9:
        raise DomainError("points must lie in the interior of the probability simplex")
    log_x = np.log(np.maximum(x, SIMPLEX_CLAMP))
    total = alpha.sum(axis=1)
    logp = special.gammaln(total) - special.gammaln(alpha).sum(axis=1) + ((alpha - 1.0) * log_x).sum(axis=1)
    grad = special.digamma(total)[:, None] - special.digamma(alpha) + log_x
    return np.asarray(logp, dtype=np.float64), np.asarray(grad, dtype=np.float64)
