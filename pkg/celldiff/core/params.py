#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Model parameter sets
Continuous (transport) and discrete (compartment) parameterizations, the
maturation rate g(x, v) and the mapping from compartments to a maturity axis
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional, Tuple

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from .coefficients import (
    ArrayLike, CoefficientTable, FeedbackLaw, GenericAlphaFeedback, TrueDataFeedback,
    _check_counts, _scalar_or_array, feedback_from_dict, signal,
)
from .errors import ConfigurationError, DomainError

logger = logging.getLogger(__name__)

# Samples used when certifying g- and g+ on [x_origin, x_star] x [0, V_max]
BOUND_X_SAMPLES = 201
BOUND_V_SAMPLES = 64


class GMode(str, Enum):
    FROM_TRUE_DATA = 'from_true_data'
    CUSTOM_TABULATED = 'custom_tabulated'


class BoundaryMode(str, Enum):
    SIMPLIFIED = 'simplified'
    GENERAL = 'general'


@dataclass(frozen=True)
class TabulatedMaturation:
    """Maturation rate given on an (x, v) grid, bilinear in between"""

    x_nodes: Tuple[float, ...]
    v_nodes: Tuple[float, ...]
    values: Tuple[Tuple[float, ...], ...]
    v_step: Optional[float] = None

    def __post_init__(self):
        x = np.asarray(self.x_nodes, dtype=float)
        v = np.asarray(self.v_nodes, dtype=float)
        table = np.asarray(self.values, dtype=float)
        if x.size < 2 or v.size < 2:
            raise ConfigurationError("tabulated g needs at least two x and two v nodes")
        if np.any(np.diff(x) <= 0) or np.any(np.diff(v) <= 0):
            raise ConfigurationError("tabulated g nodes must be strictly increasing")
        if v[0] < 0:
            raise ConfigurationError("tabulated g v-nodes must be nonnegative")
        if table.shape != (x.size, v.size):
            raise ConfigurationError(
                f"tabulated g values have shape {table.shape}, expected {(x.size, v.size)}")
        if not np.all(np.isfinite(table)):
            raise ConfigurationError("tabulated g values must be finite")
        object.__setattr__(self, 'x_nodes', tuple(x.tolist()))
        object.__setattr__(self, 'v_nodes', tuple(v.tolist()))
        object.__setattr__(self, 'values', tuple(tuple(row) for row in table.tolist()))
        object.__setattr__(self, '_interp', RegularGridInterpolator(
            (x, v), table, method='linear', bounds_error=True))

    @classmethod
    def constant(cls, value: float, x_lo: float, x_hi: float, v_hi: float) -> 'TabulatedMaturation':
        return cls((x_lo, x_hi), (0.0, v_hi), ((value, value), (value, value)))

    @property
    def v_range(self) -> Tuple[float, float]:
        return self.v_nodes[0], self.v_nodes[-1]

    def __call__(self, x: ArrayLike, v: ArrayLike) -> np.ndarray:
        xs, vs = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(v, dtype=float))
        lo, hi = self.v_range
        if np.any(vs < lo) or np.any(vs > hi):
            raise DomainError(f"v={v!r} outside tabulated g range [{lo:g}, {hi:g}]")
        points = np.stack((xs.ravel(), vs.ravel()), axis=-1)
        try:
            out = self._interp(points)
        except ValueError as e:
            raise DomainError(f"(x, v) outside tabulated g grid: {e}") from e
        return out.reshape(xs.shape)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'x_nodes': list(self.x_nodes),
            'v_nodes': list(self.v_nodes),
            'values': [list(row) for row in self.values],
            'v_step': self.v_step,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'TabulatedMaturation':
        try:
            return cls(tuple(data['x_nodes']), tuple(data['v_nodes']),
                       tuple(tuple(r) for r in data['values']), data.get('v_step'))
        except KeyError as e:
            raise ConfigurationError(f"tabulated g missing field {e}") from e


@dataclass(frozen=True)
class ContinuousModelParams:
    """
    Parameters of the transport model on the maturity interval [x_origin, x_star]

    g_minus and g_plus are certified on construction over
    [x_origin, x_star] x [0, v_max].
    """

    x_star: float
    k: float
    mu: float
    a: CoefficientTable
    p: CoefficientTable
    g_mode: GMode = GMode.FROM_TRUE_DATA
    boundary_mode: BoundaryMode = BoundaryMode.SIMPLIFIED
    epsilon: float = 1.0
    x_origin: float = 0.0
    custom_g: Optional[TabulatedMaturation] = None
    feedback: Optional[FeedbackLaw] = None
    v_max: Optional[float] = None
    g_minus: float = field(default=float('nan'), init=False)
    g_plus: float = field(default=float('nan'), init=False)

    def __post_init__(self):
        object.__setattr__(self, 'g_mode', GMode(self.g_mode))
        object.__setattr__(self, 'boundary_mode', BoundaryMode(self.boundary_mode))
        if not self.x_star > self.x_origin:
            raise ConfigurationError(f"x_star={self.x_star} must exceed x_origin={self.x_origin}")
        if not self.k > 0:
            raise ConfigurationError(f"k must be positive, got {self.k}")
        if not self.mu > 0:
            raise ConfigurationError(f"mu must be positive, got {self.mu}")
        if not 0 < self.epsilon <= 1:
            raise ConfigurationError(f"epsilon must lie in (0, 1], got {self.epsilon}")
        for name, table in (('a', self.a), ('p', self.p)):
            lo, hi = table.domain
            if lo > self.x_origin or hi < self.x_star:
                raise ConfigurationError(
                    f"table {name} covers [{lo}, {hi}] but the model needs "
                    f"[{self.x_origin}, {self.x_star}]")
        if not all(0 <= v <= 1 for v in self.a.values):
            raise ConfigurationError("self-renewal fractions a(x) must lie in [0, 1]")
        if self.g_mode is GMode.CUSTOM_TABULATED and self.custom_g is None:
            raise ConfigurationError("custom_tabulated g mode needs a custom_g grid")

        if self.feedback is None:
            object.__setattr__(self, 'feedback', TrueDataFeedback(self.a_w, self.p_w, self.k))
        if self.v_max is None:
            object.__setattr__(self, 'v_max', self._default_v_max())
        elif not self.v_max > 0:
            raise ConfigurationError(f"v_max must be positive, got {self.v_max}")

        g_lo, g_hi = self._sample_g_bounds()
        if not g_lo > 0:
            raise ConfigurationError(
                f"maturation rate g reaches {g_lo:g} <= 0 on the certification window")
        object.__setattr__(self, 'g_minus', g_lo)
        object.__setattr__(self, 'g_plus', g_hi)
        logger.debug(f"g certified in [{g_lo:g}, {g_hi:g}] up to v_max={self.v_max:g}")

    def _default_v_max(self) -> float:
        root = self.feedback.closed_form_root()
        if root is not None:
            return 10.0 * root
        if isinstance(self.feedback, GenericAlphaFeedback):
            return self.feedback.v_max
        return 10.0 / self.k

    def _sample_g_bounds(self) -> Tuple[float, float]:
        xs = np.union1d(np.linspace(self.x_origin, self.x_star, BOUND_X_SAMPLES),
                        [n for n in self.a.nodes + self.p.nodes
                         if self.x_origin <= n <= self.x_star])
        vs = np.concatenate(([0.0], np.geomspace(self.v_max * 1e-9, self.v_max, BOUND_V_SAMPLES - 1)))
        X, V = np.meshgrid(xs, vs, indexing='ij')
        values = self.g(X, V)
        return float(values.min()), float(values.max())

    @property
    def length(self) -> float:
        return self.x_star - self.x_origin

    @property
    def a_w(self) -> float:
        return float(self.a(self.x_origin))

    @property
    def p_w(self) -> float:
        return float(self.p(self.x_origin))

    def check_x(self, x: ArrayLike) -> np.ndarray:
        arr = np.asarray(x, dtype=float)
        if np.any(np.isnan(arr)) or np.any(arr < self.x_origin) or np.any(arr > self.x_star):
            raise DomainError(f"x={x!r} outside maturity interval [{self.x_origin}, {self.x_star}]")
        return arr

    def g(self, x: ArrayLike, v: ArrayLike) -> np.ndarray:
        """Vectorized g(x, v) with broadcasting between x and v"""
        xs = self.check_x(x)
        vs = _check_counts(v)
        if self.g_mode is GMode.CUSTOM_TABULATED:
            return self.custom_g(xs, vs)
        return 2.0 * (1.0 - self.a(xs) * signal(vs, self.k)) * self.p(xs)

    def dg_dv(self, x: ArrayLike, v: ArrayLike) -> np.ndarray:
        xs = self.check_x(x)
        vs = _check_counts(v)
        if self.g_mode is GMode.FROM_TRUE_DATA:
            return 2.0 * self.a(xs) * self.p(xs) * self.k / (1.0 + self.k * vs) ** 2
        h = self.custom_g.v_step or 1e-4 / self.k
        lo, hi = self.custom_g.v_range
        # one-sided stencils where the centered one leaves the v grid
        up = np.minimum(vs + h, hi)
        down = np.maximum(vs - h, lo)
        return (self.custom_g(xs, up) - self.custom_g(xs, down)) / (up - down)

    def with_changes(self, **changes) -> 'ContinuousModelParams':
        data = {
            'x_star': self.x_star, 'k': self.k, 'mu': self.mu, 'a': self.a, 'p': self.p,
            'g_mode': self.g_mode, 'boundary_mode': self.boundary_mode,
            'epsilon': self.epsilon, 'x_origin': self.x_origin, 'custom_g': self.custom_g,
            'feedback': self.feedback, 'v_max': self.v_max,
        }
        data.update(changes)
        return ContinuousModelParams(**data)

    def to_dict(self) -> Dict[str, Any]:
        data = {
            'x_origin': self.x_origin,
            'x_star': self.x_star,
            'k': self.k,
            'mu': self.mu,
            'a': self.a.to_dict(),
            'p': self.p.to_dict(),
            'g_mode': self.g_mode.value,
            'boundary_mode': self.boundary_mode.value,
            'epsilon': self.epsilon,
            'v_max': self.v_max,
        }
        if self.custom_g is not None:
            data['custom_g'] = self.custom_g.to_dict()
        try:
            data['feedback'] = self.feedback.to_dict()
        except ConfigurationError:
            logger.debug("feedback law is not serializable, omitted from parameter dump")
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ContinuousModelParams':
        try:
            return cls(
                x_star=float(data['x_star']),
                k=float(data['k']),
                mu=float(data['mu']),
                a=CoefficientTable.from_dict(data['a']),
                p=CoefficientTable.from_dict(data['p']),
                g_mode=data.get('g_mode', GMode.FROM_TRUE_DATA),
                boundary_mode=data.get('boundary_mode', BoundaryMode.SIMPLIFIED),
                epsilon=float(data.get('epsilon', 1.0)),
                x_origin=float(data.get('x_origin', 0.0)),
                custom_g=(TabulatedMaturation.from_dict(data['custom_g'])
                          if data.get('custom_g') else None),
                feedback=feedback_from_dict(data['feedback']) if data.get('feedback') else None,
                v_max=float(data['v_max']) if data.get('v_max') is not None else None,
            )
        except KeyError as e:
            raise ConfigurationError(f"model parameters missing field {e}") from e
        except ValueError as e:
            raise ConfigurationError(f"invalid model parameters: {e}") from e


@dataclass(frozen=True)
class DiscreteModelParams:
    """n-compartment parameters: a, p for compartments 1..n-1, d for 1..n"""

    n: int
    a: Tuple[float, ...]
    p: Tuple[float, ...]
    d: Tuple[float, ...]
    k: float

    def __post_init__(self):
        a = tuple(float(x) for x in self.a)
        p = tuple(float(x) for x in self.p)
        d = tuple(float(x) for x in self.d)
        if self.n < 3:
            raise ConfigurationError(f"compartment count must be at least 3, got {self.n}")
        if len(a) != self.n - 1 or len(p) != self.n - 1 or len(d) != self.n:
            raise ConfigurationError(
                f"need {self.n - 1} values of a and p and {self.n} death rates, "
                f"got {len(a)}, {len(p)} and {len(d)}")
        if not all(0 < x <= 1 for x in a):
            raise ConfigurationError("self-renewal fractions a_i must lie in (0, 1]")
        if not all(x > 0 for x in p):
            raise ConfigurationError("proliferation rates p_i must be positive")
        if not all(x >= 0 for x in d) or not d[-1] > 0:
            raise ConfigurationError("death rates must be nonnegative with d_n > 0")
        if not self.k > 0:
            raise ConfigurationError(f"k must be positive, got {self.k}")
        object.__setattr__(self, 'a', a)
        object.__setattr__(self, 'p', p)
        object.__setattr__(self, 'd', d)
        if self.has_interior_death:
            logger.warning(f"nonzero interior death rates {d[:-1]} in a {self.n}-compartment model")

    @property
    def has_interior_death(self) -> bool:
        return any(x != 0 for x in self.d[:-1])

    def to_dict(self) -> Dict[str, Any]:
        return {'n': self.n, 'a': list(self.a), 'p': list(self.p), 'd': list(self.d), 'k': self.k}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'DiscreteModelParams':
        try:
            return cls(int(data['n']), tuple(data['a']), tuple(data['p']),
                       tuple(data['d']), float(data['k']))
        except KeyError as e:
            raise ConfigurationError(f"discrete parameters missing field {e}") from e


def g_eval(x: ArrayLike, v: ArrayLike, params: ContinuousModelParams):
    """Maturation rate g(x, v) in maturity units per day"""
    return _scalar_or_array(params.g(x, v), x if np.ndim(x) else v)


def dg_dv(x: ArrayLike, v: ArrayLike, params: ContinuousModelParams):
    """Sensitivity of the maturation rate to the mature-cell count"""
    return _scalar_or_array(params.dg_dv(x, v), x if np.ndim(x) else v)


def discrete_to_continuous(d: DiscreteModelParams, I: int,
                           epsilon: float = 1.0) -> ContinuousModelParams:
    """Place compartment i at maturity x = i and interpolate a, p linearly"""
    if I < d.n - 2:
        raise ConfigurationError(f"grid resolution I={I} is below n-2={d.n - 2}")
    length = d.n - 2
    if I % length:
        logger.warning(f"I={I} is not a multiple of {length}; compartment nodes fall between cells")
    nodes = tuple(float(i) for i in range(1, d.n))
    return ContinuousModelParams(
        x_star=float(d.n - 1),
        x_origin=1.0,
        k=d.k,
        mu=d.d[-1],
        a=CoefficientTable(nodes, d.a),
        p=CoefficientTable(nodes, d.p),
        g_mode=GMode.FROM_TRUE_DATA,
        boundary_mode=BoundaryMode.SIMPLIFIED,
        epsilon=epsilon,
    )


