#!/usr/bin/env python3
"""
This module implements the fully connected networks used by the actor and the
critic: in -> h1 -> h2 -> out with leaky-ReLU hidden activations and a linear
output layer, together with exact reverse-mode gradients.

Weights are stored as (fan_in, fan_out) matrices so that a batch of inputs of
shape (B, fan_in) is propagated as x @ W + b.

Classes:
    MlpParams: Weights and biases of a network (also used for gradients and Adam moments).
    MlpCache: Activations of a forward pass, needed by mlp_backward.
"""

from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Sequence, Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import ShapeError, UsageError

LEAKY_SLOPE = 0.01
HIDDEN_WIDTHS = (128, 128)


@dataclass
class MlpParams:
    """Represents per-layer weights and biases"""

    weights: List[NDArray[np.float64]]
    biases: List[NDArray[np.float64]]

    def __post_init__(self) -> None:
        if len(self.weights) != len(self.biases) or not self.weights:
            raise ShapeError("weights and biases must be nonempty lists of equal length")
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.ndim != 2 or b.shape != (w.shape[1],):
                raise ShapeError(f"layer {i}: weight {w.shape} and bias {b.shape} do not match")
            if i and self.weights[i - 1].shape[1] != w.shape[0]:
                raise ShapeError(f"layer {i} input {w.shape[0]} != previous output {self.weights[i - 1].shape[1]}")

    @classmethod
    def initialize(cls, layer_sizes: Sequence[int], rng: np.random.Generator,
                   slope: float = LEAKY_SLOPE) -> "MlpParams":
        """He-style uniform fan-in initialization for leaky-ReLU; zero biases"""
        weights: List[NDArray[np.float64]] = []
        biases: List[NDArray[np.float64]] = []
        for fan_in, fan_out in zip(layer_sizes[:-1], layer_sizes[1:]):
            limit = np.sqrt(6.0 / ((1.0 + slope ** 2) * fan_in))
            weights.append(rng.uniform(-limit, limit, size=(fan_in, fan_out)))
            biases.append(np.zeros(fan_out))
        return cls(weights, biases)

    @classmethod
    def zeros(cls, layer_sizes: Sequence[int]) -> "MlpParams":
        return cls([np.zeros((a, b)) for a, b in zip(layer_sizes[:-1], layer_sizes[1:])],
                   [np.zeros(b) for b in layer_sizes[1:]])

    @property
    def layer_sizes(self) -> Tuple[int, ...]:
        return (self.weights[0].shape[0],) + tuple(w.shape[1] for w in self.weights)

    def arrays(self) -> List[NDArray[np.float64]]:
        """Weights and biases interleaved layer by layer"""
        out: List[NDArray[np.float64]] = []
        for w, b in zip(self.weights, self.biases):
            out.extend((w, b))
        return out

    def map(self, fn: Callable[..., NDArray[np.float64]], *others: "MlpParams") -> "MlpParams":
        """Applies fn entrywise-by-array to this and other equally shaped params"""
        weights = [fn(w, *(o.weights[i] for o in others)) for i, w in enumerate(self.weights)]
        biases = [fn(b, *(o.biases[i] for o in others)) for i, b in enumerate(self.biases)]
        return MlpParams(weights, biases)

    def copy(self) -> "MlpParams":
        return self.map(np.copy)

    def is_finite(self) -> bool:
        return all(bool(np.all(np.isfinite(a))) for a in self.arrays())

    def same_shape(self, other: "MlpParams") -> bool:
        return [a.shape for a in self.arrays()] == [a.shape for a in other.arrays()]

    def to_dict(self) -> Dict[str, Any]:
        return {"layers": [{"in": int(w.shape[0]), "out": int(w.shape[1]),
                            "weights": w.tolist(), "bias": b.tolist()}
                           for w, b in zip(self.weights, self.biases)]}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "MlpParams":
        weights: List[NDArray[np.float64]] = []
        biases: List[NDArray[np.float64]] = []
        for layer in data["layers"]:
            w = np.array(layer["weights"], dtype=np.float64).reshape(layer["in"], layer["out"])
            weights.append(w)
            biases.append(np.array(layer["bias"], dtype=np.float64))
        return cls(weights, biases)


@dataclass
class MlpCache:
    """Inputs of every layer and hidden pre-activations of one forward pass"""

    params: MlpParams
    inputs: List[NDArray[np.float64]]
    preactivations: List[NDArray[np.float64]]
    squeeze: bool


def leaky_relu(z: NDArray[np.float64], slope: float = LEAKY_SLOPE) -> NDArray[np.float64]:
    return np.where(z > 0.0, z, slope * z)


def mlp_forward(params: MlpParams, x: ArrayLike,
                slope: float = LEAKY_SLOPE) -> Tuple[NDArray[np.float64], MlpCache]:
    """Forward pass for one input vector or a batch of row vectors"""
    a = np.asarray(x, dtype=np.float64)
    squeeze = a.ndim == 1
    if squeeze:
        a = a[None, :]
    if a.ndim != 2 or a.shape[1] != params.weights[0].shape[0]:
        raise ShapeError(f"input shape {np.shape(x)} does not match input layer {params.weights[0].shape[0]}")
    inputs: List[NDArray[np.float64]] = []
    preactivations: List[NDArray[np.float64]] = []
    last = len(params.weights) - 1
    for i, (w, b) in enumerate(zip(params.weights, params.biases)):
        inputs.append(a)
        z = a @ w + b
        if i == last:
            a = z
        else:
            preactivations.append(z)
            a = leaky_relu(z, slope)
    cache = MlpCache(params, inputs, preactivations, squeeze)
    return (a[0] if squeeze else a), cache


def mlp_backward(params: MlpParams, cache: MlpCache, output_gradient: ArrayLike,
                 slope: float = LEAKY_SLOPE) -> MlpParams:
    """Gradients of a scalar loss given dloss/doutput, shaped like params"""
    if cache.params is not params:
        raise UsageError("forward cache belongs to different parameters")
    g = np.asarray(output_gradient, dtype=np.float64)
    if cache.squeeze:
        g = g[None, :]
    expected = (cache.inputs[0].shape[0], params.weights[-1].shape[1])
    if g.shape != expected:
        raise ShapeError(f"output gradient shape {g.shape} != {expected}")
    weight_grads: List[NDArray[np.float64]] = [np.empty(0)] * len(params.weights)
    bias_grads: List[NDArray[np.float64]] = [np.empty(0)] * len(params.weights)
    for i in range(len(params.weights) - 1, -1, -1):
        weight_grads[i] = cache.inputs[i].T @ g
        bias_grads[i] = g.sum(axis=0)
        if i:
            g = g @ params.weights[i].T
            g = g * np.where(cache.preactivations[i - 1] > 0.0, 1.0, slope)
    return MlpParams(weight_grads, bias_grads)
