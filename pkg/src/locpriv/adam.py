#!/usr/bin/env python3

from dataclasses import dataclass, replace
from typing import Any, Dict, Tuple

import numpy as np

from .errors import NumericError, ShapeError
from .mlp import MlpParams


@dataclass(frozen=True)
class AdamState:
    """Bias-corrected Adam moments for one network"""

    first_moment: MlpParams
    second_moment: MlpParams
    step: int = 0
    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    @classmethod
    def create(cls, params: MlpParams, lr: float, beta1: float = 0.9, beta2: float = 0.999,
               eps: float = 1e-8) -> "AdamState":
        zeros = MlpParams.zeros(params.layer_sizes)
        return cls(zeros, zeros.copy(), 0, lr, beta1, beta2, eps)

    def to_dict(self) -> Dict[str, Any]:
        return {"step": self.step, "lr": self.lr, "beta1": self.beta1, "beta2": self.beta2,
                "eps": self.eps, "m": self.first_moment.to_dict(), "v": self.second_moment.to_dict()}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "AdamState":
        return cls(MlpParams.from_dict(data["m"]), MlpParams.from_dict(data["v"]), int(data["step"]),
                   float(data["lr"]), float(data["beta1"]), float(data["beta2"]), float(data["eps"]))


def adam_update(params: MlpParams, grads: MlpParams, state: AdamState) -> Tuple[MlpParams, AdamState]:
    """One Adam step. Inputs are not modified; new params and state are returned.

    Raises:
        ShapeError: if params, grads and moments do not share a shape.
        NumericError: if a gradient entry is not finite.
    """
    if not (params.same_shape(grads) and params.same_shape(state.first_moment)):
        raise ShapeError("parameters, gradients and Adam moments differ in shape")
    if not grads.is_finite():
        raise NumericError("non-finite gradient rejected by Adam")
    b1, b2 = state.beta1, state.beta2
    step = state.step + 1
    m = state.first_moment.map(lambda m_, g: b1 * m_ + (1.0 - b1) * g, grads)
    v = state.second_moment.map(lambda v_, g: b2 * v_ + (1.0 - b2) * np.square(g), grads)
    m_corr = 1.0 - b1 ** step
    v_corr = 1.0 - b2 ** step
    updated = params.map(
        lambda p, m_, v_: p - state.lr * (m_ / m_corr) / (np.sqrt(v_ / v_corr) + state.eps), m, v)
    return updated, replace(state, first_moment=m, second_moment=v, step=step)
