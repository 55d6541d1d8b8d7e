#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Hopf crossings
Explicit imaginary-axis crossings of the delay form, the Heaviside example of
the reduced form and a scan of |F(i omega)| for crossings of any variant
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
from scipy.optimize import bisect, minimize_scalar

from ..core.errors import DomainError, NumericalError
from .characteristic import CharProblem, DelayProblem, HeavisideExcess, ReducedQuadraticProblem

logger = logging.getLogger(__name__)

HOPF_TOL = 1e-8
BRANCH0_LEFT = 1e-6


@dataclass(frozen=True)
class HopfPoint:
    omega: float
    mu: float
    branch: int
    residual: float

    def to_dict(self) -> Dict[str, Any]:
        return {'branch': self.branch, 'omega': self.omega, 'mu': self.mu,
                'residual': self.residual}


@dataclass(frozen=True)
class OutOfRange:
    """Heaviside construction impossible: c = omega/(p_w (2a_w - 1) B) exceeds 1"""

    c: float

    @property
    def reason(self) -> str:
        return f"omega/(p_w(2a_w-1)B) = {self.c:g} > 1"

    def to_dict(self) -> Dict[str, Any]:
        return {'c': self.c}


@dataclass(frozen=True)
class HeavisideHopf:
    """Crossing of the reduced form at i*omega for b = B on the last delta units"""

    a_w: float
    B: float
    p_w: float
    omega: float
    theta: float
    delta: float
    mu: float
    residual: float

    def problem(self, length: Optional[float] = None) -> ReducedQuadraticProblem:
        length = self.delta if length is None else max(length, self.delta)
        return ReducedQuadraticProblem.from_model(self.mu, self.a_w, self.p_w, length,
                                                  HeavisideExcess(self.B, self.delta))

    def to_dict(self) -> Dict[str, Any]:
        return {'a_w': self.a_w, 'B': self.B, 'p_w': self.p_w, 'omega': self.omega,
                'theta': self.theta, 'delta': self.delta, 'mu': self.mu,
                'residual': self.residual}


@dataclass(frozen=True)
class Crossing:
    lo: float
    hi: float
    omega: float
    residual: float

    def to_dict(self) -> Dict[str, Any]:
        return {'lo': self.lo, 'hi': self.hi, 'omega': self.omega, 'residual': self.residual}


def branch_interval(k: int) -> Tuple[float, float]:
    """(2k pi, 2k pi + pi/2], the range of tau*omega on branch k"""
    return 2 * k * math.pi, 2 * k * math.pi + math.pi / 2


def omitted_branch_reason(A: float, k: int) -> Optional[str]:
    """Why branch k gives no admissible crossing for A = tau v_bar |alpha'|, None if it does"""
    lo, hi = branch_interval(k)
    if A <= 1:
        return f"A = {A:g} <= 1, no crossing"
    if k == 0:
        if A >= hi:
            return (f"branch 0 needs A < pi/2 (A = {A:g}); the root of x = A sin x lies "
                    f"beyond pi/2 where cos < 0 would make mu negative")
        if A * math.sin(BRANCH0_LEFT) - BRANCH0_LEFT <= 0:
            return (f"A = {A!r} is so close to 1 that the branch 0 crossing lies below "
                    f"tau*omega = {BRANCH0_LEFT:g}")
        return None
    if A <= hi:
        return f"branch {k} needs A > {hi:g} (A = {A:g})"
    return None


def hopf_simple(tau: float, v_bar: float, alpha_prime_abs: float) -> List[HopfPoint]:
    """
    Imaginary-axis crossings of lam + mu + mu v_bar |alpha'| exp(-tau lam)/lam

    On branch k, x = tau*omega solves x = A sin x in (2k pi, 2k pi + pi/2]
    with A = tau v_bar |alpha'|, and mu = omega^2/(v_bar |alpha'| cos x).
    """
    if not (tau > 0 and v_bar > 0 and alpha_prime_abs > 0):
        raise DomainError("hopf_simple needs tau, v_bar and |alpha'| positive")
    beta = v_bar * alpha_prime_abs
    A = tau * beta
    if A <= 1:
        logger.info(f"A = {A:g} <= 1, no imaginary-axis crossing")
        return []

    def f(x):
        return A * math.sin(x) - x

    points = []
    k_max = max(0, math.floor((A - math.pi / 2) / (2 * math.pi)))
    for k in range(k_max + 1):
        reason = omitted_branch_reason(A, k)
        if reason is not None:
            logger.warning(f"Hopf branch {k} omitted: {reason}")
            continue
        lo, hi = branch_interval(k)
        lo = BRANCH0_LEFT if k == 0 else lo
        x = bisect(f, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
        omega = x / tau
        mu = omega ** 2 / (beta * math.cos(x))
        residual = abs(DelayProblem(mu, tau, -mu * beta).F(1j * omega))
        if residual >= HOPF_TOL:
            raise NumericalError(f"Hopf branch {k} residual {residual:.3g} above {HOPF_TOL:g}",
                                 diagnostics={'branch': k, 'omega': omega, 'mu': mu})
        points.append(HopfPoint(omega, mu, k, residual))
    logger.info(f"A = {A:g}: {len(points)} Hopf branches")
    return points


def heaviside_hopf(a_w: float, B: float, p_w: float,
                   omega: float) -> Union[HeavisideHopf, OutOfRange]:
    """Threshold width delta and death rate mu putting a root of the reduced form at i*omega"""
    if not (a_w > 0.5 and B > 0 and p_w > 0 and omega > 0):
        raise DomainError("heaviside_hopf needs a_w > 1/2 and B, p_w, omega positive")
    c = omega / (p_w * (2 * a_w - 1) * B)
    if c > 1:
        logger.info(f"Heaviside construction out of range: c = {c:g}")
        return OutOfRange(c)
    theta = math.pi + math.asin(c)
    delta = theta * p_w / omega
    mu = (omega ** 2 / p_w) * (2 * a_w / (2 * a_w - 1)) / (1 + B * (1 - math.cos(theta)))
    result = HeavisideHopf(a_w, B, p_w, omega, theta, delta, mu, 0.0)
    residual = abs(result.problem().F(1j * omega))
    if residual >= HOPF_TOL:
        raise NumericalError(f"Heaviside crossing residual {residual:.3g} above {HOPF_TOL:g}",
                             diagnostics=result.to_dict())
    return HeavisideHopf(a_w, B, p_w, omega, theta, delta, mu, residual)


def imaginary_crossing_scan(problem: CharProblem, omega_range: Tuple[float, float],
                            steps: int = 2000, tol: float = 1e-6) -> List[Crossing]:
    """Local minima of |F(i omega)| on the scan grid that refine to a zero"""
    lo, hi = omega_range
    if not (0 < lo < hi):
        raise DomainError(f"omega range must be positive and increasing, got {omega_range}")
    omegas = np.linspace(lo, hi, steps + 1)
    residual = np.abs(np.asarray(problem.F(1j * omegas)))

    crossings = []
    for i in range(1, steps):
        if not (residual[i] <= residual[i - 1] and residual[i] <= residual[i + 1]):
            continue
        a, b = omegas[i - 1], omegas[i + 1]
        found = minimize_scalar(lambda w: abs(problem.F(1j * w)), bounds=(a, b),
                                method='bounded', options={'xatol': 1e-13 * (1 + b)})
        omega = float(found.x)
        value = abs(problem.F(1j * omega))
        if value <= tol * (1 + omega):
            crossings.append(Crossing(float(a), float(b), omega, value))
    logger.info(f"{problem.variant}: {len(crossings)} imaginary-axis crossings in [{lo:g}, {hi:g}]")
    return crossings
