#!/usr/bin/env python3
"""
Unit-tests for releasekernel.py.
"""
import numpy as np
import pytest

from locpriv.errors import DomainError
from locpriv.releasekernel import Belief, ReleaseKernel, snapshot_from_json, snapshot_json


def test_floor_mixes_with_uniform() -> None:
    """The floored identity keeps unit slices with every entry >= floor"""
    kernel = ReleaseKernel.identity(4, floor=1e-6)
    assert np.allclose(kernel.probs.sum(axis=-1), 1.0, atol=1e-15)
    assert kernel.probs.min() == pytest.approx(1e-6, rel=1e-9)
    assert kernel.slice(2, 3)[1] == pytest.approx(1.0 - 3e-6, rel=1e-12)


def test_unfloored_kernels() -> None:
    """Uniform and floor-0 kernels are stored as given"""
    assert np.all(ReleaseKernel.uniform(3).probs == 1.0 / 3.0)
    kernel = ReleaseKernel.constant([0.0, 1.0, 0.0], 3, floor=0.0)
    assert np.array_equal(kernel.slice(1, 1), [0.0, 1.0, 0.0])


def test_invalid_kernels() -> None:
    """Wrong shapes, negative entries and oversized floors are rejected"""
    with pytest.raises(DomainError):
        ReleaseKernel(np.ones((2, 2)))
    with pytest.raises(DomainError):
        ReleaseKernel(-np.ones((2, 2, 2)))
    with pytest.raises(DomainError):
        ReleaseKernel(np.ones((2, 2, 2)), floor=0.5)


def test_beliefs() -> None:
    """Beliefs are probability vectors"""
    assert Belief.point_mass(2, 3).to_list() == [0.0, 1.0, 0.0]
    assert Belief.normalized([1.0, 3.0]).to_list() == [0.25, 0.75]
    with pytest.raises(DomainError):
        Belief([0.5, 0.6])
    with pytest.raises(DomainError):
        Belief.normalized([0.0, 0.0])


def test_snapshot() -> None:
    """A debug snapshot restores belief and kernel"""
    belief, kernel = Belief.uniform(2), ReleaseKernel.identity(2, floor=0.0)
    restored_belief, restored_kernel = snapshot_from_json(snapshot_json(belief, kernel))
    assert restored_belief.to_list() == belief.to_list()
    assert np.array_equal(restored_kernel.probs, kernel.probs)
