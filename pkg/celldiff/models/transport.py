#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Transport model integrator
Explicit upwind finite-volume marching of the stem-cell / progenitor /
mature-cell system under the CFL time step, with a discrete cell-number
balance check and a profile stability metric at every step
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

import numpy as np

from ..core.coefficients import CoefficientTable, TrueDataFeedback
from ..core.errors import DomainError, StepError
from ..core.params import BoundaryMode, ContinuousModelParams, GMode
from .common import BalanceResidual, Grid

logger = logging.getLogger(__name__)

NEGATIVE_TOLERANCE = 1e-12
DEFAULT_SNAPSHOTS = 200


@dataclass(frozen=True)
class PdeState:
    w: float
    u: np.ndarray
    v: float
    t: float = 0.0

    def __post_init__(self):
        u = np.array(self.u, dtype=float)
        if u.ndim != 1 or u.size < 2:
            raise DomainError("u must be a vector of at least two cell averages")
        if not (self.w >= 0 and self.v >= 0) or np.any(np.isnan(u)) or np.any(u < 0):
            raise DomainError(f"state must be nonnegative (w={self.w}, v={self.v}, min u={u.min()})")
        u.setflags(write=False)
        object.__setattr__(self, 'u', u)
        object.__setattr__(self, 'w', float(self.w))
        object.__setattr__(self, 'v', float(self.v))

    def mass(self, grid: Grid) -> float:
        """Total cell count w + sum of interior u*dx + v"""
        return self.w + float(np.sum(self.u[1:])) * grid.dx + self.v

    def to_dict(self) -> Dict[str, Any]:
        return {'t': self.t, 'w': self.w, 'v': self.v, 'u': self.u.tolist()}


@dataclass
class PdeTrajectory:
    grid: Grid
    times: List[float] = field(default_factory=list)
    w: List[float] = field(default_factory=list)
    v: List[float] = field(default_factory=list)
    metric: List[float] = field(default_factory=list)
    residuals: List[BalanceResidual] = field(default_factory=list)
    dts: List[float] = field(default_factory=list)
    snapshots: List[PdeState] = field(default_factory=list)

    def record(self, state: PdeState, metric: float, residual: BalanceResidual, dt: float) -> None:
        self.times.append(state.t)
        self.w.append(state.w)
        self.v.append(state.v)
        self.metric.append(metric)
        self.residuals.append(residual)
        self.dts.append(dt)

    @property
    def final(self) -> PdeState:
        return self.snapshots[-1]

    @property
    def steps(self) -> int:
        return len(self.times) - 1

    def step_sizes(self) -> List[float]:
        return self.dts[1:]

    def max_relative_residual(self) -> float:
        return max((r.relative for r in self.residuals), default=0.0)

    def arrays(self) -> Dict[str, np.ndarray]:
        return {
            't': np.asarray(self.times),
            'w': np.asarray(self.w),
            'v': np.asarray(self.v),
            'metric': np.asarray(self.metric),
            'residual': np.asarray([r.relative for r in self.residuals]),
            'dt': np.asarray(self.dts),
        }


def initial_state(params: ContinuousModelParams, grid: Grid, w0: float, v0: float,
                  u0: Union[None, float, CoefficientTable, Callable, np.ndarray] = None,
                  t0: float = 0.0) -> PdeState:
    """Build the initial state; u0 defaults to the constant profile w0"""
    if u0 is None:
        u = np.full(grid.I + 1, float(w0))
    elif np.isscalar(u0):
        u = np.full(grid.I + 1, float(u0))
    elif callable(u0):
        u = np.asarray(u0(grid.centers), dtype=float)
    else:
        u = np.asarray(u0, dtype=float)
    if u.shape != (grid.I + 1,):
        raise DomainError(f"u0 has shape {u.shape}, grid needs {(grid.I + 1,)}")
    if params.boundary_mode is BoundaryMode.SIMPLIFIED and u[0] != w0:
        logger.debug(f"u0(0)={u[0]:g} differs from w0={w0:g}; boundary catches up after one step")
    return PdeState(w0, u, v0, t0)


def _feedback_level(state: PdeState, feedback_v: Optional[float]) -> float:
    return state.v if feedback_v is None else feedback_v


def cfl_dt(state: PdeState, params: ContinuousModelParams, grid: Grid,
           feedback_v: Optional[float] = None) -> float:
    """Largest stable step dx / (epsilon * max_j g(x_j, v))"""
    g = params.g(grid.centers, _feedback_level(state, feedback_v))
    g_max = float(np.max(g))
    if not (np.isfinite(g_max) and g_max > 0):
        logger.error(f"Error computing CFL step: max g = {g_max}")
        raise StepError(f"max g = {g_max} admits no CFL step", last_state=state,
                        diagnostics={'t': state.t, 'v': state.v, 'g_max': g_max})
    return grid.dx / (params.epsilon * g_max)


def boundary_density(w_new: float, v: float, params: ContinuousModelParams) -> float:
    """u_0 for the next step from the stem-cell count"""
    if params.boundary_mode is BoundaryMode.SIMPLIFIED:
        return w_new
    rate = params.feedback.differentiation_rate(v)
    return rate * w_new / float(params.g(params.x_origin, v))


def step(state: PdeState, params: ContinuousModelParams, grid: Grid,
         dt: Optional[float] = None, feedback_v: Optional[float] = None) -> PdeState:
    """
    Advance one explicit upwind step

    Order of updates: stem cells, boundary cell, interior cells with
    fluxes taken at the old state, then mature cells with implicit death.
    """
    level = _feedback_level(state, feedback_v)
    if dt is None:
        dt = cfl_dt(state, params, grid, feedback_v)
    eps = params.epsilon
    g = params.g(grid.centers, level)
    u_old = state.u

    w_new = (1.0 + dt * params.feedback.alpha(level)) * state.w

    u_new = np.empty_like(u_old)
    u_new[0] = boundary_density(w_new, level, params)
    flux = g * u_old
    p = params.p(grid.centers[1:])
    u_new[1:] = (u_old[1:] - eps * (dt / grid.dx) * (flux[1:] - flux[:-1])
                 + dt * p * u_old[1:])

    v_new = (state.v + dt * eps * flux[-1]) / (1.0 + dt * params.mu)

    scale = max(w_new, float(np.max(np.abs(u_new))), v_new, 0.0)
    bad = (not np.isfinite(w_new) or not np.isfinite(v_new) or not np.all(np.isfinite(u_new))
           or w_new < 0 or v_new < 0 or np.any(u_new < -NEGATIVE_TOLERANCE * scale))
    if bad:
        worst = int(np.nanargmin(u_new)) if np.any(np.isfinite(u_new)) else -1
        diagnostics = {
            't': state.t, 'dt': dt, 'w_new': w_new, 'v_new': v_new,
            'min_u': float(np.nanmin(u_new)) if worst >= 0 else math.nan,
            'argmin_u': worst, 'cfl_ratio': float(eps * dt * np.max(g) / grid.dx),
        }
        logger.error(f"Error in transport step at t={state.t:g}: {diagnostics}")
        raise StepError(f"transport step produced an invalid state at t={state.t:g}",
                        last_state=state, diagnostics=diagnostics)
    np.maximum(u_new, 0.0, out=u_new)
    return PdeState(w_new, u_new, v_new, state.t + dt)


def pde_mass_balance_residual(old: PdeState, new: PdeState, dt: float,
                              params: ContinuousModelParams, grid: Grid,
                              feedback_v: Optional[float] = None) -> BalanceResidual:
    """Discrete cell-number balance of one step, interior u weighted by dx"""
    level = _feedback_level(old, feedback_v)
    eps = params.epsilon
    dx = grid.dx
    alpha = params.feedback.alpha(level)
    g = params.g(grid.centers, level)
    p = params.p(grid.centers[1:])

    dw = (new.w - old.w) / dt
    du = float(np.sum(new.u[1:] - old.u[1:])) * dx / dt
    dv = (new.v - old.v) / dt
    influx = eps * g[0] * old.u[0]
    growth = float(np.sum(p * old.u[1:])) * dx
    lhs = dw + du + dv
    rhs = alpha * old.w + influx + growth - params.mu * new.v

    scale = ((new.w + old.w) / dt + float(np.sum(new.u[1:] + old.u[1:])) * dx / dt
             + (new.v + old.v) / dt + abs(alpha * old.w) + influx + growth
             + params.mu * new.v + 2.0 * eps * float(np.sum(g * old.u)))
    return BalanceResidual(lhs - rhs, scale)


def stability_metric(u_old: np.ndarray, u_new: np.ndarray, dt: float, grid: Grid) -> float:
    """Relative L2 rate of change of the profile; NaN when u_new is zero"""
    denom = float(np.sum(np.square(u_new))) * grid.dx
    if denom == 0 or dt <= 0:
        return math.nan
    num = float(np.sum(np.square((u_new - u_old) / dt))) * grid.dx
    return math.sqrt(num / denom)


def run(params: ContinuousModelParams, init: PdeState, t_end: float, grid: Grid,
        snapshot_count: int = DEFAULT_SNAPSHOTS, feedback_v: Optional[float] = None,
        max_steps: Optional[int] = None) -> PdeTrajectory:
    """
    March from init to t_end with adaptive CFL steps

    w and v, the stability metric and the balance residual are recorded at
    every step; u snapshots at snapshot_count evenly spaced times (the
    first and the last state always included).
    """
    if init.u.size != grid.I + 1:
        raise DomainError(f"state has {init.u.size} cells, grid has {grid.I + 1}")
    if not t_end > init.t:
        raise DomainError(f"t_end={t_end} must exceed the initial time {init.t}")
    snapshot_count = max(2, int(snapshot_count))
    targets = np.linspace(init.t, t_end, snapshot_count)

    traj = PdeTrajectory(grid=grid)
    traj.record(init, math.nan, BalanceResidual(0.0, 0.0), 0.0)
    traj.snapshots.append(init)
    next_target = 1

    state = init
    steps = 0
    while state.t < t_end:
        try:
            dt = cfl_dt(state, params, grid, feedback_v)
            remaining = t_end - state.t
            # split the tail evenly so the final step is not a sliver
            if dt < remaining < 2.0 * dt:
                dt = 0.5 * remaining
            last = dt >= remaining
            if last:
                dt = remaining
            new = step(state, params, grid, dt, feedback_v)
        except StepError as e:
            if e.last_state is None:
                e.last_state = state
            raise
        if last:
            new = PdeState(new.w, new.u, new.v, t_end)

        residual = pde_mass_balance_residual(state, new, dt, params, grid, feedback_v)
        traj.record(new, stability_metric(state.u, new.u, dt, grid), residual, dt)
        while next_target < snapshot_count and (new.t >= targets[next_target] or last):
            if traj.snapshots[-1] is not new:
                traj.snapshots.append(new)
            next_target += 1
        state = new
        steps += 1
        if max_steps is not None and steps >= max_steps:
            logger.warning(f"Stopped after max_steps={max_steps} at t={state.t:g}")
            break

    if traj.snapshots[-1] is not state:
        traj.snapshots.append(state)
    logger.info(f"Transport run: I={grid.I}, {steps} steps, t={state.t:g}, "
                f"w={state.w:.6g}, v={state.v:.6g}")
    return traj


def extinction_weights(params: ContinuousModelParams, grid: Grid,
                       decay: Optional[float] = None) -> Tuple[float, float]:
    """
    Weights (gamma, beta) making the extinction functional decrease along the scheme

    Needs alpha(0) < 0. decay defaults to |alpha(0)|/2.
    """
    alpha0 = params.feedback.alpha_zero
    if not alpha0 < 0:
        raise DomainError(f"extinction weights need alpha(0) < 0, got {alpha0:g}")
    decay = -0.5 * alpha0 if decay is None else decay
    vs = np.concatenate(([0.0], np.geomspace(params.v_max * 1e-9, params.v_max, 63)))
    if params.boundary_mode is BoundaryMode.SIMPLIFIED:
        inflow = float(np.max(params.g(params.x_origin, vs)))
    else:
        inflow = max(params.feedback.differentiation_rate(float(v)) for v in vs)
    if params.g_mode is GMode.FROM_TRUE_DATA or isinstance(params.feedback, TrueDataFeedback):
        # supremum over all v >= 0, not only the certification window
        inflow = max(inflow, 2.0 * params.p_w)
    gamma = (params.epsilon * inflow + decay) / (-alpha0)

    ratio = grid.dx * (params.p.maximum + decay) / (params.epsilon * params.g_minus)
    if ratio >= 1:
        raise DomainError(f"grid too coarse for an extinction functional (dx={grid.dx:g})")
    beta = -math.log1p(-ratio) / grid.dx
    return gamma, beta


def extinction_functional(state: PdeState, grid: Grid, gamma: float, beta: float) -> float:
    """gamma*w + sum exp(-beta*y_j) u_j dx + exp(-beta*(L+dx)) v, y_j = x_j - origin"""
    y = grid.centers[1:] - grid.origin
    tail = math.exp(-beta * (grid.length + grid.dx))
    return gamma * state.w + float(np.sum(np.exp(-beta * y) * state.u[1:])) * grid.dx + tail * state.v
