#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Characteristic equations of the linearization about the positive steady state

Every variant is written as F(lam) = R(lam) + P(lam)/lam, where R and P are
entire, so G(lam) = lam*R(lam) + P(lam) is entire as well. Exponentials are
combined before evaluation so that integrals only carry the factors
exp(-lam*(T* - T(s))) with T* - T(s) >= 0.
"""

import cmath
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, ClassVar, Dict, Optional, Tuple, Union

import numpy as np
from scipy.integrate import cumulative_simpson, simpson

from ..core.errors import ConfigurationError, DomainError
from ..core.params import BoundaryMode, ContinuousModelParams, GMode
from ..core.coefficients import TrueDataFeedback
from ..models.common import Grid
from ..models.steady_state import SteadyState

logger = logging.getLogger(__name__)

Complex = Union[complex, np.ndarray]


def _as_lambda(lam: Complex) -> np.ndarray:
    return np.asarray(lam, dtype=complex)


def _restore(values: np.ndarray, lam: Complex) -> Complex:
    return complex(values) if np.ndim(lam) == 0 else values


def _complex_simpson(values: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Simpson rule along the last axis, real and imaginary parts separately"""
    return simpson(values.real, x=x, axis=-1) + 1j * simpson(values.imag, x=x, axis=-1)


class CharProblem(ABC):
    """Characteristic equation F(lam) = R(lam) + P(lam)/lam"""

    variant: ClassVar[str] = ''

    @abstractmethod
    def parts(self, lam: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        ...

    @property
    @abstractmethod
    def delay(self) -> float:
        """Largest time lag appearing in the exponentials"""

    @property
    @abstractmethod
    def scale(self) -> float:
        """Rate scale S used for default search boxes"""

    def G(self, lam: Complex) -> Complex:
        z = _as_lambda(lam)
        R, P = self.parts(z)
        return _restore(z * R + P, lam)

    def F(self, lam: Complex) -> Complex:
        z = _as_lambda(lam)
        if np.any(z == 0):
            raise DomainError(f"{self.variant}: lambda = 0 is a pole of the P(lambda)/lambda term")
        R, P = self.parts(z)
        return _restore(R + P / z, lam)

    def to_dict(self) -> Dict[str, Any]:
        return {'variant': self.variant}


def char_eval(problem: CharProblem, lam: Complex) -> Complex:
    """Residual F(lam) of the characteristic equation"""
    return problem.F(lam)


@dataclass(frozen=True)
class DelayProblem(CharProblem):
    """lam + mu - A exp(-tau lam)/lam"""

    mu: float
    tau: float
    A: float
    variant: ClassVar[str] = 'delay'

    def __post_init__(self):
        if not self.tau > 0:
            raise ConfigurationError(f"delay tau must be positive, got {self.tau}")

    def parts(self, lam):
        return lam + self.mu, -self.A * np.exp(-self.tau * lam)

    @property
    def delay(self) -> float:
        return self.tau

    @property
    def scale(self) -> float:
        return max(abs(self.mu), 1.0)

    def to_dict(self):
        return {'variant': self.variant, 'mu': self.mu, 'tau': self.tau, 'A': self.A}


@dataclass(frozen=True, eq=False)
class _ProfileProblem(CharProblem):
    """Shared quadrature set-up for variants sampled on a maturity grid"""

    x: np.ndarray
    g_bar: np.ndarray
    p: np.ndarray
    _T: np.ndarray = field(init=False, repr=False)
    _P: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        for name in ('g_bar', 'p'):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape != x.shape:
                raise ConfigurationError(f"{name} has shape {arr.shape}, grid has {x.shape}")
            object.__setattr__(self, name, arr)
        if x.size < 3 or np.any(np.diff(x) <= 0):
            raise ConfigurationError("analysis grid needs at least three increasing points")
        if np.any(self.g_bar <= 0):
            raise ConfigurationError("steady maturation rate must be positive")
        object.__setattr__(self, 'x', x)
        object.__setattr__(self, '_T', cumulative_simpson(1.0 / self.g_bar, x=x, initial=0.0))
        object.__setattr__(self, '_P', cumulative_simpson(self.p / self.g_bar, x=x, initial=0.0))

    @property
    def delay(self) -> float:
        return float(self._T[-1])

    @property
    def T_star(self) -> float:
        return float(self._T[-1])

    @property
    def P_star(self) -> float:
        """Integral of p/g_bar over the whole interval"""
        return float(self._P[-1])

    def _lag_kernel(self, lam: np.ndarray) -> np.ndarray:
        """exp(-lam (T* - T(s))) for every lam (leading axes) and s (last axis)"""
        return np.exp(-lam[..., None] * (self._T[-1] - self._T))


@dataclass(frozen=True, eq=False)
class GeneralProblem(_ProfileProblem):
    """Full linearization with a v-dependent maturation rate"""

    h: np.ndarray = None
    w_bar: float = 0.0
    v_bar: float = 0.0
    alpha_prime: float = 0.0
    mu: float = 0.0
    _h_prime: np.ndarray = field(init=False, repr=False)
    variant: ClassVar[str] = 'general'

    def __post_init__(self):
        super().__post_init__()
        h = np.asarray(self.h, dtype=float)
        if h.shape != self.x.shape:
            raise ConfigurationError("h = dg/dv * u_bar must be sampled on the analysis grid")
        object.__setattr__(self, 'h', h)
        object.__setattr__(self, '_h_prime', np.gradient(h, self.x, edge_order=2))

    def parts(self, lam):
        growth = np.exp(self._P[-1] - self._P)
        integral = _complex_simpson(self._h_prime * growth * self._lag_kernel(lam), self.x)
        R = lam + self.mu - self.h[-1] + integral
        P = -np.exp(-lam * self._T[-1] + self._P[-1]) * self.g_bar[0] * self.alpha_prime * self.w_bar
        return R, P

    @property
    def scale(self) -> float:
        return max(self.mu, float(self.p[0]), 1.0)

    def to_dict(self):
        return {'variant': self.variant, 'mu': self.mu, 'v_bar': self.v_bar, 'w_bar': self.w_bar,
                'alpha_prime': self.alpha_prime, 'tau': self.delay}


@dataclass(frozen=True, eq=False)
class TrueDataGeneralProblem(_ProfileProblem):
    """Linearization with the true-data maturation rate, profile integrated out"""

    dgdv: np.ndarray = None
    mu: float = 0.0
    k: float = 0.0
    a_w: float = 0.0
    p_w: float = 0.0
    variant: ClassVar[str] = 'true_data'

    def __post_init__(self):
        super().__post_init__()
        dgdv = np.asarray(self.dgdv, dtype=float)
        if dgdv.shape != self.x.shape:
            raise ConfigurationError("dg/dv must be sampled on the analysis grid")
        object.__setattr__(self, 'dgdv', dgdv)

    def parts(self, lam):
        coeff = (self.mu / self.k) * (2 * self.a_w - 1)
        weight = self.dgdv / self.g_bar ** 2
        integrand = weight * (lam[..., None] - self.p) * self._lag_kernel(lam)
        lag = np.exp(-lam * self._T[-1])
        R = lam + self.mu - coeff * (self.k / (2 * self.a_w) * lag + _complex_simpson(integrand, self.x))
        P = self.mu * (2 * self.a_w - 1) * self.p_w / (2 * self.a_w) * lag
        return R, P

    @property
    def scale(self) -> float:
        return max(self.mu, self.p_w, 1.0)

    def to_dict(self):
        return {'variant': self.variant, 'mu': self.mu, 'k': self.k, 'a_w': self.a_w,
                'p_w': self.p_w, 'tau': self.delay}


@dataclass(frozen=True, eq=False)
class GConstProblem(CharProblem):
    """Steady maturation rate constant in x and equal to p_w"""

    x: np.ndarray
    p: np.ndarray
    mu: float
    a_w: float
    p_w: float
    variant: ClassVar[str] = 'gconst'

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        p = np.asarray(self.p, dtype=float)
        if x.size < 3 or p.shape != x.shape:
            raise ConfigurationError("gconst problem needs p sampled on at least three points")
        object.__setattr__(self, 'x', x)
        object.__setattr__(self, 'p', p)

    @property
    def length(self) -> float:
        return float(self.x[-1] - self.x[0])

    @property
    def C(self) -> float:
        return self.mu / (2 * self.a_w)

    @property
    def D(self) -> float:
        return self.p_w * self.mu * (2 * self.a_w - 1) / (2 * self.a_w)

    def parts(self, lam):
        s = self.x - self.x[0]
        kernel = np.exp(-lam[..., None] * (self.length - s) / self.p_w)
        integral = _complex_simpson(self.p / self.p_w * kernel, self.x)
        R = lam + self.C + self.C * (2 * self.a_w - 1) * integral
        P = self.D * np.exp(-lam * self.length / self.p_w)
        return R, P

    @property
    def delay(self) -> float:
        return self.length / self.p_w

    @property
    def scale(self) -> float:
        return max(self.mu, self.p_w, 1.0)

    def to_dict(self):
        return {'variant': self.variant, 'mu': self.mu, 'a_w': self.a_w, 'p_w': self.p_w,
                'length': self.length}


@dataclass(frozen=True)
class HeavisideExcess:
    """b(x) = B on the last `delta` units of maturity, 0 before"""

    B: float
    delta: float

    def weighted_integral(self, kappa: np.ndarray) -> np.ndarray:
        """Integral of b(x) exp(kappa (x - x*)) over the interval"""
        small = np.abs(kappa * self.delta) < 1e-12
        safe = np.where(small, 1.0, kappa)
        exact = self.B * (-np.expm1(-safe * self.delta)) / safe
        return np.where(small, self.B * self.delta, exact)


@dataclass(frozen=True, eq=False)
class SampledExcess:
    """b(x) sampled on offsets s = x - x_origin in [0, L]"""

    s: np.ndarray
    b: np.ndarray

    def weighted_integral(self, kappa: np.ndarray) -> np.ndarray:
        s = np.asarray(self.s, dtype=float)
        kernel = np.exp(kappa[..., None] * (s - s[-1]))
        return _complex_simpson(np.asarray(self.b, dtype=float) * kernel, s)


Excess = Union[HeavisideExcess, SampledExcess]


@dataclass(frozen=True, eq=False)
class ReducedQuadraticProblem(CharProblem):
    """lam + C + D/lam + (D/p_w) * integral of b(x) exp(lam (x - x*)/p_w)"""

    C: float
    D: float
    p_w: float
    length: float
    excess: Optional[Excess] = None
    variant: ClassVar[str] = 'reduced'

    @classmethod
    def from_model(cls, mu: float, a_w: float, p_w: float, length: float,
                   excess: Optional[Excess] = None) -> 'ReducedQuadraticProblem':
        if not a_w > 0.5:
            raise ConfigurationError("reduced quadratic form needs a_w > 1/2")
        C = mu / (2 * a_w)
        D = p_w * mu * (2 * a_w - 1) / (2 * a_w)
        return cls(C, D, p_w, length, excess)

    def parts(self, lam):
        R = lam + self.C
        if self.excess is not None:
            R = R + (self.D / self.p_w) * self.excess.weighted_integral(lam / self.p_w)
        return R, np.full_like(lam, self.D)

    @property
    def delay(self) -> float:
        return self.length / self.p_w

    @property
    def scale(self) -> float:
        return max(self.C, self.p_w, 1.0)

    def to_dict(self):
        data = {'variant': self.variant, 'C': self.C, 'D': self.D, 'p_w': self.p_w,
                'length': self.length}
        if isinstance(self.excess, HeavisideExcess):
            data['heaviside'] = {'B': self.excess.B, 'delta': self.excess.delta}
        return data


def quadratic_roots(C: float, D: float) -> Tuple[complex, complex]:
    """Roots (-C +/- sqrt(C^2 - 4D))/2 of lam^2 + C lam + D"""
    if not (C > 0 and D > 0):
        raise DomainError(f"quadratic roots need C > 0 and D > 0, got C={C}, D={D}")
    root = cmath.sqrt(C * C - 4 * D)
    return (-C + root) / 2, (-C - root) / 2


def _steady_inputs(params: ContinuousModelParams, ss: SteadyState, grid: Grid):
    if not ss.exists_positive:
        raise DomainError("characteristic equations need a positive steady state")
    if params.boundary_mode is not BoundaryMode.SIMPLIFIED:
        raise ConfigurationError("characteristic equations are derived for the simplified boundary")
    x = grid.centers
    g_bar = params.epsilon * params.g(x, ss.v_bar)
    return x, g_bar, params.p(x)


def delay_problem(params: ContinuousModelParams, ss: SteadyState, grid: Grid) -> DelayProblem:
    """Delay form for a maturation rate that does not depend on v"""
    x, g_bar, _ = _steady_inputs(params, ss, grid)
    tau = float(simpson(1.0 / g_bar, x=x))
    A = params.mu * ss.v_bar * params.feedback.alpha_prime(ss.v_bar)
    if np.any(params.dg_dv(x, ss.v_bar) != 0):
        logger.warning("g depends on v; the delay form drops the dg/dv terms")
    return DelayProblem(params.mu, tau, A)


def general_problem(params: ContinuousModelParams, ss: SteadyState, grid: Grid) -> GeneralProblem:
    x, g_bar, p = _steady_inputs(params, ss, grid)
    h = params.epsilon * params.dg_dv(x, ss.v_bar) * ss.u_bar
    return GeneralProblem(x=x, g_bar=g_bar, p=p, h=h, w_bar=ss.w_bar, v_bar=ss.v_bar,
                          alpha_prime=params.feedback.alpha_prime(ss.v_bar), mu=params.mu)


def true_data_problem(params: ContinuousModelParams, ss: SteadyState,
                      grid: Grid) -> TrueDataGeneralProblem:
    x, g_bar, p = _steady_inputs(params, ss, grid)
    law = params.feedback
    if params.g_mode is not GMode.FROM_TRUE_DATA or not isinstance(law, TrueDataFeedback):
        raise ConfigurationError("true-data characteristic form needs true-data g and feedback")
    dgdv = params.epsilon * params.dg_dv(x, ss.v_bar)
    return TrueDataGeneralProblem(x=x, g_bar=g_bar, p=p, dgdv=dgdv, mu=params.mu, k=params.k,
                                  a_w=law.a_w, p_w=law.p_w)


def _require_unit_epsilon(params: ContinuousModelParams, form: str) -> None:
    if params.epsilon != 1.0:
        raise ConfigurationError(f"the {form} form is derived for an unscaled flux (epsilon = 1)")


def gconst_problem(params: ContinuousModelParams, grid: Grid) -> GConstProblem:
    _require_unit_epsilon(params, "gconst")
    law = params.feedback
    if not isinstance(law, TrueDataFeedback):
        raise ConfigurationError("gconst form needs the true-data feedback law")
    x = grid.centers
    return GConstProblem(x=x, p=params.p(x), mu=params.mu, a_w=law.a_w, p_w=law.p_w)


def reduced_quadratic(params: ContinuousModelParams, grid: Grid) -> ReducedQuadraticProblem:
    """b(x) = (p(x) - p_w)/p_w sampled on the grid"""
    _require_unit_epsilon(params, "reduced quadratic")
    law = params.feedback
    if not isinstance(law, TrueDataFeedback):
        raise ConfigurationError("reduced quadratic form needs the true-data feedback law")
    x = grid.centers
    b = (params.p(x) - law.p_w) / law.p_w
    excess = None if np.all(b == 0) else SampledExcess(x - x[0], b)
    return ReducedQuadraticProblem.from_model(params.mu, law.a_w, law.p_w, grid.length, excess)
