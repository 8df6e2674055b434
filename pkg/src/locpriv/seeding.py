#!/usr/bin/env python3
"""
Deterministic random-number streams.

A run owns one integer seed. Independent streams (one per trajectory,
roll-out or experiment cell) are derived from it with spawn keys, so a stream
only depends on (seed, keys) and never on how many other streams were used.
"""

from typing import Tuple

import numpy as np

METHOD_CODES = {"a2c": 1, "myopic": 2, "myopic-history": 3}


def make_rng(seed: int, *keys: int) -> np.random.Generator:
    """Returns the generator of the stream identified by (seed, keys)"""
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=tuple(keys))
    return np.random.default_rng(sequence)


def lambda_key(lam: float) -> int:
    """Encodes a Lagrange multiplier as an integer spawn key (micro-units)"""
    return int(round(lam * 1_000_000))


def cell_keys(method: str, lam: float) -> Tuple[int, int]:
    """Spawn keys of one experiment cell"""
    return (METHOD_CODES[method], lambda_key(lam))
