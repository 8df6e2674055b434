#!/usr/bin/env python3
"""
Unit-tests for dirichlet.py.
"""
import math

import numpy as np
import pytest
from scipy import special

from locpriv.dirichlet import (XI_OFFSET, DirichletParams, clamp_to_simplex, concentration_slope,
                               concentrations, digamma, dirichlet_log_density, dirichlet_log_density_rows,
                               dirichlet_mean, dirichlet_sample, dirichlet_sample_batch, log_gamma, softplus)
from locpriv.errors import DomainError
from locpriv.seeding import make_rng


def test_log_gamma_values() -> None:
    """ln Gamma at 1, 5 and 1/2"""
    assert log_gamma(1.0) == pytest.approx(0.0, abs=1e-10)
    assert log_gamma(5.0) == pytest.approx(math.log(24.0), abs=1e-10)
    assert log_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), abs=1e-10)
    assert digamma(1.0) == pytest.approx(-0.5772156649015329, abs=1e-10)
    with pytest.raises(DomainError):
        log_gamma(0.0)
    with pytest.raises(DomainError):
        digamma(-1.0)


def test_concentrations_are_positive() -> None:
    """xi = softplus(z) + offset stays positive for very negative z"""
    z = np.array([-800.0, 0.0, 800.0])
    xi = concentrations(z)
    assert xi[0] == pytest.approx(XI_OFFSET)
    assert xi[1] == pytest.approx(math.log(2.0) + XI_OFFSET)
    assert xi[2] == pytest.approx(800.0 + XI_OFFSET)
    assert np.allclose(softplus(np.array([0.0])), math.log(2.0))


def test_concentration_slope_matches_finite_differences() -> None:
    """dxi/dz is the logistic function"""
    z = np.linspace(-5.0, 5.0, 11)
    h = 1e-6
    numeric = (concentrations(z + h) - concentrations(z - h)) / (2.0 * h)
    assert np.allclose(concentration_slope(z), numeric, rtol=1e-6)


def test_samples_lie_on_the_simplex() -> None:
    """Samples are nonnegative and sum to one, also for tiny concentrations"""
    rng = make_rng(0)
    for xi in ([1.0, 1.0, 1.0], [0.01, 0.01, 0.02, 0.01], [1e-3] * 16, [50.0, 2.0]):
        x = dirichlet_sample(DirichletParams(xi), rng)
        assert np.all(np.isfinite(x))
        assert np.all(x >= 0.0)
        assert x.sum() == pytest.approx(1.0, abs=1e-12)


def test_flat_dirichlet_mean() -> None:
    """The mean of Dirichlet(1, 1, 1, 1) draws is 1/4 within 4 sigma"""
    draws = 100_000
    samples = dirichlet_sample_batch(np.ones((draws, 4)), make_rng(1))
    sigma = math.sqrt(1.0 * 3.0 / (16.0 * 5.0) / draws)
    assert np.all(np.abs(samples.mean(axis=0) - 0.25) <= 4.0 * sigma)


def test_peaked_dirichlet_mean() -> None:
    """Dirichlet(100, 1, ..., 1) on 16 cells puts 100/115 on the first cell"""
    draws = 100_000
    xi = np.ones(16)
    xi[0] = 100.0
    samples = dirichlet_sample_batch(np.tile(xi, (draws, 1)), make_rng(2))
    total = xi.sum()
    sigma = math.sqrt(100.0 * (total - 100.0) / (total ** 2 * (total + 1.0)) / draws)
    assert abs(samples[:, 0].mean() - 100.0 / total) <= 4.0 * sigma
    assert np.allclose(dirichlet_mean(DirichletParams(xi)), xi / total)


def test_sampling_is_reproducible() -> None:
    """Equal streams give equal draws"""
    xi = np.array([[0.5, 2.0, 3.0], [0.1, 0.2, 0.3]])
    assert np.array_equal(dirichlet_sample_batch(xi, make_rng(3)), dirichlet_sample_batch(xi, make_rng(3)))


def test_log_density_values() -> None:
    """Density of (1/2, 1/2) is 1 under Dir(1, 1) and Dir(2, 1)"""
    point = np.array([0.5, 0.5])
    assert dirichlet_log_density(point, DirichletParams([1.0, 1.0]))[0] == pytest.approx(0.0, abs=1e-12)
    assert dirichlet_log_density(point, DirichletParams([2.0, 1.0]))[0] == pytest.approx(0.0, abs=1e-12)


def test_log_density_gradient_matches_finite_differences() -> None:
    """d ln Dir(x | xi) / d xi agrees with central differences"""
    rng = make_rng(4)
    h = 1e-6
    for _ in range(100):
        k = int(rng.integers(2, 6))
        xi = rng.uniform(0.5, 5.0, size=k)
        point = rng.dirichlet(np.ones(k) * 2.0)
        _, grad = dirichlet_log_density(point, DirichletParams(xi))
        for i in range(k):
            up, down = xi.copy(), xi.copy()
            up[i] += h
            down[i] -= h
            numeric = (dirichlet_log_density(point, DirichletParams(up))[0]
                       - dirichlet_log_density(point, DirichletParams(down))[0]) / (2.0 * h)
            assert abs(grad[i] - numeric) <= 1e-4 * max(abs(grad[i]), abs(numeric)) + 1e-7


def test_log_density_integrates_against_uniform_draws() -> None:
    """Importance weights exp(ln Dir(x | xi)) against flat draws recover the mean"""
    xi = DirichletParams([2.0, 3.0, 4.0])
    points = clamp_to_simplex(dirichlet_sample_batch(np.ones((20_000, 3)), make_rng(5)))
    log_w = np.array([dirichlet_log_density(p, xi)[0] for p in points])
    weights = special.softmax(log_w)
    estimate = float(np.dot(weights, points[:, 0]))
    assert estimate == pytest.approx(2.0 / 9.0, abs=0.01)


def test_log_density_rejects_boundary_points() -> None:
    """Points with zero entries or off the simplex are domain errors"""
    params = DirichletParams([1.0, 1.0, 1.0])
    with pytest.raises(DomainError):
        dirichlet_log_density([1.0, 0.0, 0.0], params)
    with pytest.raises(DomainError):
        dirichlet_log_density([0.5, 0.6, 0.1], params)
    with pytest.raises(DomainError):
        dirichlet_log_density([0.5, 0.5], params)


def test_clamp_to_simplex() -> None:
    """Zero entries are lifted and the vector renormalized"""
    clamped = clamp_to_simplex([1.0, 0.0])
    assert clamped[1] > 0.0
    assert clamped.sum() == pytest.approx(1.0, abs=1e-15)


def test_invalid_concentrations() -> None:
    """Concentrations must be a positive finite vector of length >= 2"""
    for xi in ([1.0], [1.0, 0.0], [1.0, np.inf], [[1.0, 1.0]]):
        with pytest.raises(DomainError):
            DirichletParams(xi)


def test_row_densities_match_single_densities() -> None:
    """Each row of the batched density and gradient equals the single-vector result"""
    rng = make_rng(6)
    xi = rng.uniform(0.2, 4.0, size=(5, 4))
    points = clamp_to_simplex(dirichlet_sample_batch(xi, rng))
    logp, grad = dirichlet_log_density_rows(points, xi)
    for row in range(5):
        single, single_grad = dirichlet_log_density(points[row], DirichletParams(xi[row]))
        assert logp[row] == pytest.approx(single, rel=1e-12)
        assert np.allclose(grad[row], single_grad, rtol=1e-12)
    with pytest.raises(DomainError):
        dirichlet_log_density_rows(points[:, :3], xi)
