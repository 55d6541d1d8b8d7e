#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
A priori bound certificates
Computes the log-derivative bound M and the ratio bounds between w, u and v
that hold once the initial profile has been transported out, and checks
recorded trajectories against them
"""

import logging
import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, List

import numpy as np

from ..core.errors import CertificateUnavailable
from ..core.params import BoundaryMode, ContinuousModelParams
from .common import Grid
from .steady_state import NoPositiveSteadyState, solve_vbar
from .transport import PdeState, PdeTrajectory

logger = logging.getLogger(__name__)

V_SAMPLES = 257
RATIO_RTOL = 1e-12


@dataclass(frozen=True)
class BoundsCertificate:
    M: float
    M1: float
    M2: float
    M3: float
    M4: float
    gamma: float
    t_valid: float
    w_max: float
    v_max: float
    u_transient: float
    v_transient: float

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class Violation:
    kind: str
    t: float
    lhs: float
    rhs: float

    @property
    def margin(self) -> float:
        """Relative excess of lhs over rhs"""
        return (self.lhs - self.rhs) / max(abs(self.rhs), 1e-300)

    def to_dict(self) -> Dict[str, Any]:
        return {'kind': self.kind, 't': self.t, 'lhs': self.lhs, 'rhs': self.rhs,
                'margin': self.margin}


def _v_samples(params: ContinuousModelParams) -> np.ndarray:
    return np.concatenate(([0.0], np.geomspace(params.v_max * 1e-9, params.v_max, V_SAMPLES - 1)))


def apriori_bounds(params: ContinuousModelParams, init: PdeState, grid: Grid) -> BoundsCertificate:
    """Certificate for the run starting at init on the given grid"""
    u0 = init.u
    if np.any(u0 <= 0):
        raise CertificateUnavailable("initial profile has zeros, its log-derivative is undefined")
    if not init.w > 0:
        raise CertificateUnavailable("initial stem-cell count must be positive")

    eps = params.epsilon
    x = grid.centers
    vs = _v_samples(params)
    L = params.length
    law = params.feedback

    G = params.g(x[:, None], vs[None, :])
    gx = np.gradient(G, x, axis=0)
    gxx = np.gradient(gx, x, axis=0)
    px = np.gradient(params.p(x), x)
    Q = -gxx + px[:, None] / eps
    q_norm = float(np.max(np.abs(Q / G)))
    gx_norm = float(np.max(np.abs(gx / G)))

    p0 = float(params.p(params.x_origin))
    alpha_v = np.asarray(law.alpha(vs))
    z_boundary = -(alpha_v - p0) / (eps * G[0]) - gx[0] / G[0]
    # v -> infinity, with g frozen at the end of the window
    z_inf = -(law.alpha_infinity - p0) / (eps * G[0, -1]) - gx[0, -1] / G[0, -1]
    z_boundary_sup = max(float(np.max(np.abs(z_boundary))), abs(z_inf))
    z_initial_sup = float(np.max(np.abs(np.gradient(np.log(u0), x))))

    M = (z_boundary_sup + z_initial_sup + L * q_norm) * math.exp(L * gx_norm)
    M1 = math.exp(M * L)
    M3 = M1
    g_minus, g_plus = params.g_minus, params.g_plus
    t_valid = L / (eps * g_minus)

    alpha0 = law.alpha_zero
    second = M1 * (alpha0 + params.mu) / (eps * g_minus)
    M2 = max(init.w / init.v, second) if init.v > 0 else second

    outcome = solve_vbar(law)
    v_bar = None if isinstance(outcome, NoPositiveSteadyState) else outcome
    w_transient = init.w * math.exp(max(alpha0, 0.0) * t_valid)
    w_max = max(w_transient, M2 * v_bar) if v_bar is not None else w_transient

    # before t_valid, u(x_star) is initial or injected mass grown along characteristics
    if params.boundary_mode is BoundaryMode.SIMPLIFIED:
        inflow = 1.0
    else:
        inflow = max(law.differentiation_rate(float(v)) / float(params.g(params.x_origin, v))
                     for v in vs)
    growth = max(0.0, float(np.max(params.p(x)[:, None] - eps * gx)))
    u_transient = max(float(np.max(u0)), inflow * w_transient) * math.exp(growth * t_valid)
    v_transient = max(init.v, eps * g_plus * u_transient / params.mu)

    alpha_inf = law.alpha_infinity
    w_low = init.w * math.exp(min(alpha_inf, 0.0) * t_valid)
    gamma = min(0.5, params.mu / (2.0 * abs(alpha_inf)))
    mu1 = params.mu + gamma * alpha_inf
    M4 = max(v_transient / w_low ** gamma, M3 * eps * g_plus * w_max ** (1.0 - gamma) / mu1)

    cert = BoundsCertificate(M=M, M1=M1, M2=M2, M3=M3, M4=M4, gamma=gamma,
                             t_valid=t_valid, w_max=w_max, v_max=params.v_max,
                             u_transient=u_transient, v_transient=v_transient)
    logger.info(f"Bounds certificate: M={M:.6g}, t_valid={t_valid:.6g}, gamma={gamma:.4g}")
    return cert


def check_bounds(traj: PdeTrajectory, cert: BoundsCertificate,
                 rtol: float = RATIO_RTOL) -> List[Violation]:
    """Violations of the certified inequalities at recorded times t >= t_valid"""
    violations = []
    slack = 1.0 + rtol

    for state in traj.snapshots:
        if state.t < cert.t_valid:
            continue
        u_min = float(np.min(state.u))
        u_max = float(np.max(state.u))
        if state.w > cert.M1 * u_min * slack:
            violations.append(Violation('w<=M1*u', state.t, state.w, cert.M1 * u_min))
        if u_max > cert.M3 * state.w * slack:
            violations.append(Violation('u<=M3*w', state.t, u_max, cert.M3 * state.w))

    for t, w, v in zip(traj.times, traj.w, traj.v):
        if t < cert.t_valid:
            continue
        if w > cert.M2 * v * slack:
            violations.append(Violation('w<=M2*v', t, w, cert.M2 * v))
        bound = cert.M4 * w ** cert.gamma
        if v > bound * slack:
            violations.append(Violation('v<=M4*w^gamma', t, v, bound))

    if violations:
        logger.warning(f"{len(violations)} bound violations, first: {violations[0].to_dict()}")
    return violations
