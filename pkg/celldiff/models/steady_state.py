#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Steady states
Positive root of alpha, the stationary maturity profile and residual checks
against the stationary system
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Tuple, Union

import numpy as np
from scipy.integrate import simpson
from scipy.optimize import bisect

from ..core.coefficients import FeedbackLaw, GenericAlphaFeedback, TrueDataFeedback
from ..core.errors import ConfigurationError, DomainError, NumericalError
from ..core.params import BoundaryMode, ContinuousModelParams, GMode
from .common import Grid

logger = logging.getLogger(__name__)

MAX_DOUBLINGS = 60
VBAR_RTOL = 1e-13
CLOSED_FORM_RTOL = 1e-10
UNIQUENESS_SAMPLES = 2001


@dataclass(frozen=True)
class NoPositiveSteadyState:
    """Outcome of solve_vbar when alpha(0) <= 0"""

    alpha_zero: float

    @property
    def reason(self) -> str:
        return f"alpha(0) = {self.alpha_zero:g} <= 0, only the trivial steady state exists"


@dataclass(frozen=True)
class SteadyState:
    exists_positive: bool
    v_bar: float
    w_bar: float
    x: np.ndarray
    u_bar: np.ndarray
    residuals: Dict[str, float] = field(default_factory=dict)
    discrete: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {
            'exists_positive': self.exists_positive,
            'v_bar': self.v_bar,
            'w_bar': self.w_bar,
            'discrete': self.discrete,
            'residuals': dict(self.residuals),
        }


@dataclass(frozen=True)
class SteadyReport:
    residuals: Dict[str, float]
    tolerances: Dict[str, float]

    @property
    def passed(self) -> bool:
        return all(self.residuals[name] <= self.tolerances[name] for name in self.residuals)

    def failures(self) -> Dict[str, float]:
        return {name: value for name, value in self.residuals.items()
                if value > self.tolerances[name]}


def _bracket_cap(law: FeedbackLaw) -> float:
    if isinstance(law, GenericAlphaFeedback):
        return law.v_max
    return math.inf


def bisect_vbar(law: FeedbackLaw) -> float:
    """Positive root of alpha by bracket doubling and bisection, checked for uniqueness"""
    alpha0 = law.alpha_zero
    if alpha0 <= 0:
        raise DomainError(f"alpha(0)={alpha0:g} <= 0 has no positive root")

    cap = _bracket_cap(law)
    lo, hi = 0.0, min(law.bracket_start, cap)
    doublings = 0
    while law.alpha(hi) > 0:
        if hi >= cap or doublings >= MAX_DOUBLINGS:
            raise NumericalError(f"no sign change of alpha found up to v={hi:g}",
                                 diagnostics={'alpha_zero': alpha0, 'v_hi': hi})
        lo, hi = hi, min(2.0 * hi, cap)
        doublings += 1

    if law.alpha(hi) == 0:
        root = hi
    else:
        root = bisect(lambda v: law.alpha(v), lo, hi, xtol=1e-300,
                      rtol=VBAR_RTOL, maxiter=400)

    samples = np.linspace(0.0, hi, UNIQUENESS_SAMPLES)
    signs = np.sign(law.alpha(samples))
    changes = int(np.count_nonzero(np.diff(signs[signs != 0])))
    if changes > 1:
        raise NumericalError(f"alpha changes sign {changes} times on [0, {hi:g}]")
    return float(root)


def solve_vbar(law: FeedbackLaw) -> Union[float, NoPositiveSteadyState]:
    """Unique positive root of alpha, or NoPositiveSteadyState when alpha(0) <= 0"""
    alpha0 = law.alpha_zero
    if alpha0 <= 0:
        logger.info(f"No positive steady state: alpha(0)={alpha0:g}")
        return NoPositiveSteadyState(alpha0)

    root = bisect_vbar(law)
    closed = law.closed_form_root()
    if closed is not None:
        if not math.isclose(root, closed, rel_tol=CLOSED_FORM_RTOL):
            raise NumericalError(
                f"bisection root {root!r} disagrees with closed form {closed!r}")
        return closed
    return float(root)


def _cell_integrals(params: ContinuousModelParams, grid: Grid, v_bar: float) -> np.ndarray:
    """Simpson integral of p/(eps*g) over each cell, midpoints from the tables"""
    eps = params.epsilon
    x = grid.centers
    mid = grid.midpoints

    def integrand(points):
        return params.p(points) / (eps * params.g(points, v_bar))

    f = integrand(x)
    samples = np.stack((f[:-1], integrand(mid), f[1:]))
    return simpson(samples, dx=0.5 * grid.dx, axis=0)


def _boundary_rate(params: ContinuousModelParams, v_bar: float) -> float:
    return params.feedback.differentiation_rate(v_bar)


def steady_profile(v_bar: float, params: ContinuousModelParams, grid: Grid,
                   discrete: bool = False) -> Tuple[float, np.ndarray]:
    """
    Stationary (w_bar, u_bar) on the grid centers for a given v_bar

    With discrete=True the profile is the exact fixed point of the upwind
    scheme on this grid instead of the quadrature of the stationary ODE.
    """
    if not v_bar > 0:
        raise DomainError(f"v_bar must be positive, got {v_bar}")
    eps = params.epsilon
    g_bar = params.g(grid.centers, v_bar)

    if discrete:
        p = params.p(grid.centers)
        u = np.empty(grid.I + 1)
        u[-1] = params.mu * v_bar / (eps * g_bar[-1])
        for j in range(grid.I, 0, -1):
            u[j - 1] = u[j] * (eps * g_bar[j] - grid.dx * p[j]) / (eps * g_bar[j - 1])
        if np.any(u <= 0):
            raise DomainError(f"grid with dx={grid.dx:g} too coarse for a positive discrete steady state")
    else:
        u_star = params.mu * v_bar / (eps * g_bar[-1])
        cells = _cell_integrals(params, grid, v_bar)
        # integral from x_j to x_star
        tail = np.concatenate((np.cumsum(cells[::-1])[::-1], [0.0]))
        u = (g_bar[-1] / g_bar) * u_star * np.exp(-tail)

    if params.boundary_mode is BoundaryMode.SIMPLIFIED:
        w_bar = float(u[0])
    else:
        w_bar = float(g_bar[0] * u[0] / _boundary_rate(params, v_bar))
    return w_bar, u


def closed_form_u_star(params: ContinuousModelParams) -> float:
    """u_bar(x_star) in closed form; only defined for the true-data maturation rate"""
    law = params.feedback
    if params.g_mode is not GMode.FROM_TRUE_DATA or not isinstance(law, TrueDataFeedback):
        raise ConfigurationError("the closed-form profile end value needs true-data g and feedback")
    if law.a_w <= 0.5:
        raise DomainError("no positive steady state for a_w <= 1/2")
    a_w = law.a_w
    a_star = float(params.a(params.x_star))
    p_star = float(params.p(params.x_star))
    return (params.mu / (params.k * p_star * params.epsilon)) * a_w * (2 * a_w - 1) / (2 * a_w - a_star)


def trivial_steady_state(grid: Grid) -> SteadyState:
    return SteadyState(False, 0.0, 0.0, grid.centers.copy(), np.zeros(grid.I + 1))


def compute_steady_state(params: ContinuousModelParams, grid: Grid,
                         discrete: bool = False) -> SteadyState:
    """Positive steady state if alpha(0) > 0, otherwise the trivial one"""
    outcome = solve_vbar(params.feedback)
    if isinstance(outcome, NoPositiveSteadyState):
        ss = trivial_steady_state(grid)
    else:
        w_bar, u_bar = steady_profile(outcome, params, grid, discrete=discrete)
        ss = SteadyState(True, outcome, w_bar, grid.centers.copy(), u_bar, discrete=discrete)
    report = verify_steady(ss, params, grid)
    logger.info(f"Steady state: v_bar={ss.v_bar:.6g}, w_bar={ss.w_bar:.6g}, "
                f"residuals ok={report.passed}")
    return SteadyState(ss.exists_positive, ss.v_bar, ss.w_bar, ss.x, ss.u_bar,
                       report.residuals, ss.discrete)


def verify_steady(ss: SteadyState, params: ContinuousModelParams, grid: Grid) -> SteadyReport:
    """Residuals of the stationary system evaluated on the grid"""
    eps = params.epsilon
    x = grid.centers
    u = ss.u_bar
    g_bar = params.g(x, ss.v_bar)
    p = params.p(x)

    flux = eps * g_bar * u
    derivative = np.gradient(flux, x, edge_order=2) - p * u
    if params.boundary_mode is BoundaryMode.SIMPLIFIED:
        boundary = abs(u[0] - ss.w_bar)
    else:
        boundary = abs(g_bar[0] * u[0] - _boundary_rate(params, ss.v_bar) * ss.w_bar) / g_bar[0]

    residuals = {
        'alpha': abs(params.feedback.alpha(ss.v_bar) * ss.w_bar),
        'derivative': float(np.max(np.abs(derivative))),
        'boundary': float(boundary),
        'outflow': abs(flux[-1] - params.mu * ss.v_bar),
    }
    pu_norm = float(np.max(np.abs(p * u)))
    tolerances = {
        'alpha': 1e-10 * max(params.p_w * ss.w_bar, 0.0),
        'derivative': 1e-3 * pu_norm,
        'boundary': 1e-10 * ss.w_bar,
        'outflow': 1e-10 * params.mu * ss.v_bar,
    }
    return SteadyReport(residuals, tolerances)
