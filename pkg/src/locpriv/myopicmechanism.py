#!/usr/bin/env python3

from typing import List

from .blahutarimoto import MyopicKernel
from .gridworld import GridWorld
from .kernelprovider import MyopicKernelProvider
from .mechanism import Mechanism


class MyopicMechanism(Mechanism):
    """Per-step myopic kernels with the per-step conditional leakage they achieve"""

    def __init__(self, world: GridWorld, lam: float, lambda_ba: float) -> None:
        super().__init__(world, lam)
        self.lambda_ba: float = lambda_ba
        self.kernels: List[MyopicKernel] = []
        self.step_leakage: List[float] = []
        self.step_distortion: List[float] = []
        self.converged: List[bool] = []

    def add_step(self, kernel: MyopicKernel, leakage_bits: float, distortion: float, converged: bool) -> None:
        self.kernels.append(kernel)
        self.step_leakage.append(leakage_bits)
        self.step_distortion.append(distortion)
        self.converged.append(converged)
        horizon = len(self.kernels)
        self.set_quality(sum(self.step_leakage) / horizon, sum(self.step_distortion) / horizon)

    @property
    def horizon(self) -> int:
        return len(self.kernels)

    @property
    def all_converged(self) -> bool:
        return all(self.converged)

    def provider(self) -> MyopicKernelProvider:
        return MyopicKernelProvider(self.kernels)
