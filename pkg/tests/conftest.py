#!/usr/bin/env python3
"""
Shared fixtures for the locpriv unit-tests.
"""
import pytest

from locpriv.gridworld import GridWorld
from locpriv.logger import Logger
from locpriv.worldloader import WorldLoader


@pytest.fixture
def logger() -> Logger:
    """A quiet logger"""
    return Logger("test")


@pytest.fixture
def small_world() -> GridWorld:
    """2x2 grid with the distance-weighted chain"""
    return WorldLoader(side=2).get_world("q1")


@pytest.fixture
def uniform_world() -> GridWorld:
    """4x4 grid with the uniform chain"""
    return WorldLoader(side=4).get_world("q0")
