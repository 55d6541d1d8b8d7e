#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Shared simulation types
Maturity grid and balance residuals used by both integrators
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ..core.errors import ConfigurationError
from ..core.params import ContinuousModelParams


@dataclass(frozen=True)
class Grid:
    """Uniform grid x_j = origin + j*dx, j = 0..I, on the maturity interval"""

    I: int
    origin: float
    end: float
    centers: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.I < 1:
            raise ConfigurationError(f"grid needs at least one interior cell, got I={self.I}")
        if not self.end > self.origin:
            raise ConfigurationError("grid end must exceed its origin")
        centers = self.origin + self.dx * np.arange(self.I + 1)
        centers[-1] = self.end
        centers.setflags(write=False)
        object.__setattr__(self, 'centers', centers)

    @classmethod
    def for_params(cls, params: ContinuousModelParams, I: int) -> 'Grid':
        return cls(I, params.x_origin, params.x_star)

    @property
    def dx(self) -> float:
        return (self.end - self.origin) / self.I

    @property
    def length(self) -> float:
        return self.end - self.origin

    @property
    def midpoints(self) -> np.ndarray:
        return 0.5 * (self.centers[:-1] + self.centers[1:])


@dataclass(frozen=True)
class BalanceResidual:
    """Signed cell-number balance defect and the magnitude of the terms it cancels"""

    value: float
    scale: float

    @property
    def relative(self) -> float:
        if self.scale == 0:
            return 0.0 if self.value == 0 else math.inf
        return abs(self.value) / self.scale

    def within(self, rtol: float = 1e-12) -> bool:
        return self.relative <= rtol
