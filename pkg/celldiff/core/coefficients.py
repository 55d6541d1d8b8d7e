#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Model coefficients
Piecewise-linear coefficient tables, the cytokine signal and the stem-cell
feedback laws alpha(v)
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import ConfigurationError, DomainError

logger = logging.getLogger(__name__)

ArrayLike = Union[float, Sequence[float], np.ndarray]


def _check_counts(v: ArrayLike, name: str = 'v') -> np.ndarray:
    arr = np.asarray(v, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < 0):
        raise DomainError(f"{name} must be a nonnegative cell count, got {v!r}")
    return arr


def _scalar_or_array(arr: np.ndarray, original: ArrayLike):
    return float(arr) if np.ndim(original) == 0 else arr


@dataclass(frozen=True)
class CoefficientTable:
    """Coefficient tabulated on maturity nodes, linear between nodes"""

    nodes: Tuple[float, ...]
    values: Tuple[float, ...]

    def __post_init__(self):
        nodes = tuple(float(x) for x in self.nodes)
        values = tuple(float(y) for y in self.values)
        if len(nodes) < 2:
            raise ConfigurationError("a coefficient table needs at least two nodes")
        if len(nodes) != len(values):
            raise ConfigurationError(
                f"table has {len(nodes)} nodes but {len(values)} values")
        if not all(b > a for a, b in zip(nodes, nodes[1:])):
            raise ConfigurationError("table nodes must be strictly increasing")
        if not all(np.isfinite(values)):
            raise ConfigurationError("table values must be finite")
        object.__setattr__(self, 'nodes', nodes)
        object.__setattr__(self, 'values', values)
        object.__setattr__(self, '_xp', np.array(nodes))
        object.__setattr__(self, '_fp', np.array(values))

    @property
    def domain(self) -> Tuple[float, float]:
        return self.nodes[0], self.nodes[-1]

    @property
    def minimum(self) -> float:
        return min(self.values)

    @property
    def maximum(self) -> float:
        return max(self.values)

    def __call__(self, x: ArrayLike):
        arr = np.asarray(x, dtype=float)
        lo, hi = self.domain
        if np.any(np.isnan(arr)) or np.any(arr < lo) or np.any(arr > hi):
            raise DomainError(f"x={x!r} outside table range [{lo}, {hi}]")
        # np.interp returns fp[j] exactly when x == xp[j]
        return _scalar_or_array(np.interp(arr, self._xp, self._fp), x)

    def is_constant(self) -> bool:
        return all(v == self.values[0] for v in self.values)

    @classmethod
    def constant(cls, value: float, lo: float, hi: float) -> 'CoefficientTable':
        return cls((lo, hi), (value, value))

    @classmethod
    def step(cls, lo: float, hi: float, base: float, jump: float, onset: float,
             ramp: Optional[float] = None) -> 'CoefficientTable':
        """base + jump * 1{x >= onset}, with a short linear ramp ending at onset"""
        if not lo < onset <= hi:
            raise ConfigurationError(f"step onset {onset} must lie in ({lo}, {hi}]")
        ramp = ramp if ramp is not None else 1e-9 * (hi - lo)
        nodes = [lo, onset - ramp, onset]
        values = [base, base, base + jump]
        if onset < hi:
            nodes.append(hi)
            values.append(base + jump)
        return cls(tuple(nodes), tuple(values))

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'CoefficientTable':
        try:
            return cls(tuple(data['nodes']), tuple(data['values']))
        except KeyError as e:
            raise ConfigurationError(f"coefficient table missing field {e}") from e

    def to_dict(self) -> Dict[str, Any]:
        return {'nodes': list(self.nodes), 'values': list(self.values)}


def table_eval(table: CoefficientTable, x: ArrayLike):
    """Evaluate a coefficient table; no extrapolation outside its nodes"""
    return table(x)


def signal(v: ArrayLike, k: float):
    """Cytokine signal intensity s(v) = 1/(1+kv)"""
    if not k > 0:
        raise DomainError(f"feedback constant k must be positive, got {k!r}")
    arr = _check_counts(v)
    return _scalar_or_array(1.0 / (1.0 + k * arr), v)


class FeedbackLaw(ABC):
    """Net stem-cell growth rate alpha(v), decreasing with alpha(inf) < 0"""

    @abstractmethod
    def alpha(self, v: ArrayLike):
        ...

    @abstractmethod
    def alpha_prime(self, v: float) -> float:
        ...

    @property
    def alpha_zero(self) -> float:
        return float(self.alpha(0.0))

    @property
    @abstractmethod
    def alpha_infinity(self) -> float:
        ...

    @property
    def bracket_start(self) -> float:
        return 1.0

    def closed_form_root(self) -> Optional[float]:
        return None

    def differentiation_rate(self, v: float) -> float:
        """Per-capita stem-cell differentiation flux, 2(1 - a_w s) p_w"""
        raise ConfigurationError(
            f"{type(self).__name__} does not define a differentiation rate; "
            "the general boundary needs p_w")

    def to_dict(self) -> Dict[str, Any]:
        raise ConfigurationError(f"{type(self).__name__} cannot be serialized")


@dataclass(frozen=True)
class TrueDataFeedback(FeedbackLaw):
    """alpha(v) = (2 a_w / (1 + k v) - 1) p_w"""

    a_w: float
    p_w: float
    k: float

    def __post_init__(self):
        if not 0 < self.a_w <= 1:
            raise ConfigurationError(f"a_w must lie in (0, 1], got {self.a_w}")
        if not self.p_w > 0:
            raise ConfigurationError(f"p_w must be positive, got {self.p_w}")
        if not self.k > 0:
            raise ConfigurationError(f"k must be positive, got {self.k}")

    def alpha(self, v: ArrayLike):
        s = np.asarray(signal(v, self.k))
        return _scalar_or_array((2.0 * self.a_w * s - 1.0) * self.p_w, v)

    def alpha_prime(self, v: float) -> float:
        _check_counts(v)
        return -2.0 * self.a_w * self.p_w * self.k / (1.0 + self.k * v) ** 2

    @property
    def alpha_infinity(self) -> float:
        return -self.p_w

    @property
    def bracket_start(self) -> float:
        return 1.0 / self.k

    def closed_form_root(self) -> Optional[float]:
        if self.a_w <= 0.5:
            return None
        return (2.0 * self.a_w - 1.0) / self.k

    def differentiation_rate(self, v: float) -> float:
        return 2.0 * (1.0 - self.a_w * signal(v, self.k)) * self.p_w

    def to_dict(self) -> Dict[str, Any]:
        return {'variant': 'true_data', 'a_w': self.a_w, 'p_w': self.p_w, 'k': self.k}


@dataclass(frozen=True)
class GenericAlphaFeedback(FeedbackLaw):
    """User-supplied alpha(v), certified decreasing by sampling"""

    func: Callable[[np.ndarray], np.ndarray]
    v_max: float
    p_w: Optional[float] = None
    samples: int = 10_000
    v_min: float = 0.0
    _alpha_inf: float = field(default=float('nan'), init=False, repr=False)

    def __post_init__(self):
        if not self.v_max > self.v_min >= 0:
            raise ConfigurationError("GenericAlpha needs 0 <= v_min < v_max")
        lower = max(self.v_min, self.v_max * 1e-12)
        grid = np.unique(np.concatenate((
            [self.v_min], np.geomspace(lower, self.v_max, self.samples - 1))))
        values = np.asarray(self.func(grid), dtype=float)
        if values.shape != grid.shape or not np.all(np.isfinite(values)):
            raise ConfigurationError("alpha must return finite values for every sample")
        if not np.all(np.diff(values) < 0):
            raise ConfigurationError("alpha is not strictly decreasing on its sampled range")
        if not values[-1] < 0:
            raise ConfigurationError(
                f"alpha at the largest sample v={self.v_max:g} is {values[-1]:g}, must be < 0")
        object.__setattr__(self, '_alpha_inf', float(values[-1]))
        logger.debug(f"GenericAlpha certified on {grid.size} samples up to v={self.v_max:g}")

    @classmethod
    def from_table(cls, table: CoefficientTable, p_w: Optional[float] = None,
                   samples: int = 10_000) -> 'GenericAlphaFeedback':
        lo, hi = table.domain
        if lo < 0:
            raise ConfigurationError("alpha table nodes must be nonnegative cell counts")
        return cls(func=table, v_max=hi, p_w=p_w, samples=samples, v_min=lo)

    def alpha(self, v: ArrayLike):
        arr = _check_counts(v)
        return _scalar_or_array(np.asarray(self.func(arr), dtype=float), v)

    def alpha_prime(self, v: float) -> float:
        _check_counts(v)
        h = 1e-6 * (1.0 + abs(v))
        if v - h < self.v_min:
            return float((self.alpha(v + h) - self.alpha(v)) / h)
        if isinstance(self.func, CoefficientTable) and v + h > self.v_max:
            return float((self.alpha(v) - self.alpha(v - h)) / h)
        return float((self.alpha(v + h) - self.alpha(v - h)) / (2.0 * h))

    @property
    def alpha_infinity(self) -> float:
        return self._alpha_inf

    @property
    def bracket_start(self) -> float:
        return max(self.v_min, min(1.0, self.v_max))

    def differentiation_rate(self, v: float) -> float:
        if self.p_w is None:
            return super().differentiation_rate(v)
        return self.p_w - float(self.alpha(v))

    def to_dict(self) -> Dict[str, Any]:
        if isinstance(self.func, CoefficientTable):
            return {'variant': 'generic_table', 'table': self.func.to_dict(), 'p_w': self.p_w}
        return super().to_dict()


def alpha(v: ArrayLike, law: FeedbackLaw):
    """Net stem-cell growth rate alpha(v) in day^-1"""
    _check_counts(v)
    return law.alpha(v)


def feedback_from_dict(data: Dict[str, Any]) -> FeedbackLaw:
    variant = data.get('variant', 'true_data')
    if variant == 'true_data':
        return TrueDataFeedback(float(data['a_w']), float(data['p_w']), float(data['k']))
    if variant == 'generic_table':
        return GenericAlphaFeedback.from_table(
            CoefficientTable.from_dict(data['table']), p_w=data.get('p_w'))
    raise ConfigurationError(f"unknown feedback variant '{variant}'")
