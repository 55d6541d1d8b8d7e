#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Compartment model integrator
Explicit Euler marching of the n-compartment ODE system with per-step
cell-number balance residuals and step rejection on negativity
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Union

import numpy as np

from ..core.errors import DomainError, NumericalError
from ..core.params import DiscreteModelParams
from .common import BalanceResidual

logger = logging.getLogger(__name__)

MAX_REJECTIONS = 60
STATIONARY_RTOL = 1e-10


@dataclass(frozen=True)
class CompartmentState:
    u: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        u = np.array(self.u, dtype=float)
        if u.ndim != 1:
            raise DomainError("compartment state must be a vector")
        if np.any(np.isnan(u)) or np.any(u < 0):
            raise DomainError(f"compartment populations must be nonnegative, got {u}")
        u.setflags(write=False)
        object.__setattr__(self, 'u', u)

    @property
    def n(self) -> int:
        return self.u.size


@dataclass
class DiscreteTrajectory:
    times: List[float] = field(default_factory=list)
    states: List[CompartmentState] = field(default_factory=list)
    balance_residuals: List[BalanceResidual] = field(default_factory=list)
    dts: List[float] = field(default_factory=list)
    rejections: int = 0
    stationary: bool = False

    def append(self, state: CompartmentState, residual: BalanceResidual, dt: float) -> None:
        self.times.append(state.t)
        self.states.append(state)
        self.balance_residuals.append(residual)
        self.dts.append(dt)

    @property
    def final(self) -> CompartmentState:
        return self.states[-1]

    def series(self, index: int) -> np.ndarray:
        return np.array([s.u[index] for s in self.states])

    def matrix(self) -> np.ndarray:
        return np.vstack([s.u for s in self.states])


class Matched:
    """Externally supplied time-step sequence, consumed in order"""

    def __init__(self, steps: Sequence[float]):
        self.steps = [float(dt) for dt in steps]
        if not self.steps or any(dt <= 0 for dt in self.steps):
            raise DomainError("matched time steps must be a nonempty positive sequence")

    def __len__(self) -> int:
        return len(self.steps)


def _check_shape(state: CompartmentState, params: DiscreteModelParams) -> None:
    if state.n != params.n:
        raise DomainError(f"state has {state.n} compartments, params expect {params.n}")


def signal_for(state: CompartmentState, params: DiscreteModelParams,
               frozen_signal: Optional[float] = None) -> float:
    if frozen_signal is not None:
        return frozen_signal
    return 1.0 / (1.0 + params.k * state.u[-1])


def maturation_fluxes(state: CompartmentState, params: DiscreteModelParams,
                      frozen_signal: Optional[float] = None) -> np.ndarray:
    """g_i = 2(1 - a_i s) p_i u_i for i = 1..n-1"""
    s = signal_for(state, params, frozen_signal)
    a = np.asarray(params.a)
    p = np.asarray(params.p)
    return 2.0 * (1.0 - a * s) * p * state.u[:-1]


def discrete_rhs(state: CompartmentState, params: DiscreteModelParams,
                 frozen_signal: Optional[float] = None) -> np.ndarray:
    """Right-hand side of the compartment system in cells per day"""
    _check_shape(state, params)
    u = state.u
    p = np.asarray(params.p)
    d = np.asarray(params.d)
    g = maturation_fluxes(state, params, frozen_signal)

    rhs = np.empty_like(u)
    rhs[:-1] = p * u[:-1] - g - d[:-1] * u[:-1]
    rhs[1:-1] += g[:-1]
    rhs[-1] = g[-1] - d[-1] * u[-1]
    return rhs


def discrete_mass_balance_residual(state: CompartmentState, rhs_value: np.ndarray,
                                   params: DiscreteModelParams,
                                   frozen_signal: Optional[float] = None) -> BalanceResidual:
    """Sum of the derivative minus net proliferation and death"""
    u = state.u
    p = np.asarray(params.p)
    d = np.asarray(params.d)
    net = float(np.sum((p - d[:-1]) * u[:-1]) - d[-1] * u[-1])
    g = maturation_fluxes(state, params, frozen_signal)
    scale = float(np.sum(p * u[:-1]) + np.sum(d * u) + 2.0 * np.sum(np.abs(g))
                  + np.sum(np.abs(rhs_value)))
    return BalanceResidual(float(np.sum(rhs_value)) - net, scale)


def default_dt(params: DiscreteModelParams) -> float:
    p = np.asarray(params.p)
    d = np.asarray(params.d[:-1])
    return 0.5 * float(np.min(1.0 / (p + d + 2.0 * p)))


def _euler(u: np.ndarray, rhs: np.ndarray, dt: float, params: DiscreteModelParams,
           implicit_terminal_death: bool) -> np.ndarray:
    if not implicit_terminal_death:
        return u + dt * rhs
    new = u + dt * rhs
    # terminal row: (u_n + dt*g_{n-1}) / (1 + dt*d_n)
    d_n = params.d[-1]
    influx = rhs[-1] + d_n * u[-1]
    new[-1] = (u[-1] + dt * influx) / (1.0 + dt * d_n)
    return new


def integrate_discrete(params: DiscreteModelParams, init: CompartmentState, t_end: float,
                       dt: Union[float, Matched, None] = None,
                       frozen_signal: Optional[float] = None,
                       implicit_terminal_death: bool = False,
                       stop_when_stationary: bool = False) -> DiscreteTrajectory:
    """
    March the compartment system with explicit Euler up to t_end

    A float dt is used as the nominal step; steps that would produce a
    negative population are rejected and retried with half the step. A
    Matched sequence is consumed as given and never halved, and the run
    ends when either the sequence or the horizon is exhausted.
    """
    _check_shape(init, params)
    if not t_end > init.t:
        raise DomainError(f"t_end={t_end} must exceed the initial time {init.t}")

    matched = dt if isinstance(dt, Matched) else None
    nominal = default_dt(params) if dt is None else (None if matched else float(dt))
    if nominal is not None and not nominal > 0:
        raise DomainError(f"time step must be positive, got {dt}")

    traj = DiscreteTrajectory()
    state = init
    rhs = discrete_rhs(state, params, frozen_signal)
    traj.append(state, discrete_mass_balance_residual(state, rhs, params, frozen_signal), 0.0)
    step_index = 0

    while state.t < t_end:
        if matched is not None:
            if step_index >= len(matched):
                break
            h = min(matched.steps[step_index], t_end - state.t)
        else:
            h = min(nominal, t_end - state.t)

        rejections = 0
        while True:
            new_u = _euler(state.u, rhs, h, params, implicit_terminal_death)
            if np.all(np.isfinite(new_u)) and np.all(new_u >= 0):
                break
            if matched is not None:
                raise NumericalError(
                    f"matched step {step_index} (dt={h:g}) produced a negative population",
                    diagnostics={'t': state.t, 'dt': h, 'u': state.u.tolist()})
            rejections += 1
            traj.rejections += 1
            logger.warning(f"Rejected step at t={state.t:g} with dt={h:g}, halving")
            if rejections >= MAX_REJECTIONS:
                logger.error(f"Error integrating compartments: {rejections} rejections at t={state.t:g}")
                raise NumericalError(
                    f"step rejected {rejections} times at t={state.t:g}",
                    diagnostics={'t': state.t, 'dt': h, 'u': state.u.tolist()})
            h *= 0.5

        t_next = t_end if h == t_end - state.t else state.t + h
        state = CompartmentState(new_u, t_next)
        rhs = discrete_rhs(state, params, frozen_signal)
        traj.append(state, discrete_mass_balance_residual(state, rhs, params, frozen_signal), h)
        step_index += 1

        norm_u = np.linalg.norm(state.u)
        if stop_when_stationary and norm_u > 0 and np.linalg.norm(rhs) < STATIONARY_RTOL * norm_u:
            traj.stationary = True
            logger.info(f"Compartment run stationary at t={state.t:g} after {step_index} steps")
            break

    logger.debug(f"Compartment run finished at t={state.t:g}: {step_index} steps, "
                 f"{traj.rejections} rejections")
    return traj
