#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Rightmost characteristic roots
Counts zeros of G(lam) = lam*F(lam) inside rectangles by the argument
principle, isolates the rightmost one by bisection of the box and polishes it
with Newton's method
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..core.errors import DomainError, NumericalError
from .characteristic import CharProblem, DelayProblem

logger = logging.getLogger(__name__)

Box = Tuple[float, float, float, float]  # re_min, re_max, im_min, im_max

PHASE_STEP = math.pi / 6
INITIAL_EDGE_SAMPLES = 64
MAX_EDGE_SAMPLES = 1 << 16
MIN_SEGMENT = 1e-9
WINDING_TOLERANCE = 0.25
NUDGE = 1e-3
MAX_NUDGES = 5
NEWTON_TOL = 1e-10
NEWTON_MAX_ITER = 60
EXPONENT_LIMIT = 600.0
# off-center so that cuts avoid the real axis and symmetric root pairs
SPLITS = (0.4961, 0.4517, 0.5393, 0.4173, 0.5719)
AXIS_NUDGE = 1e-9
RHP_TOL = 1e-8


class ContourTooClose(NumericalError):
    """Phase tracking could not resolve the contour, a zero lies on or near it"""


@dataclass
class RootReport:
    root: complex
    residual: float
    rhp_count: int
    box_count: int
    box: Box
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            're': self.root.real,
            'im': self.root.imag,
            'residual': self.residual,
            'rhp_count': self.rhp_count,
            'box_count': self.box_count,
            'box': list(self.box),
            'notes': list(self.notes),
        }


def default_box(problem: CharProblem) -> Box:
    """[-5S, S] x [-40S, 40S], left edge raised so exponentials stay finite"""
    S = problem.scale
    left = -5.0 * S
    if problem.delay > 0:
        left = max(left, -EXPONENT_LIMIT / problem.delay)
    return left, S, -40.0 * S, 40.0 * S


def delay_right_bound(problem: DelayProblem) -> float:
    """No root of the delay equation has real part above sqrt(|A|)"""
    if problem.mu < 0:
        raise DomainError("right-half-plane bound needs mu >= 0")
    return math.sqrt(abs(problem.A))


def _edge_phase(problem: CharProblem, start: complex, end: complex) -> float:
    """Continuous change of arg G along the segment start -> end"""
    t = np.linspace(0.0, 1.0, INITIAL_EDGE_SAMPLES + 1)
    values = np.asarray(problem.G(start + (end - start) * t))
    while True:
        if np.any(values == 0) or not np.all(np.isfinite(values)):
            raise ContourTooClose(f"G vanishes or overflows on the edge {start} -> {end}")
        jumps = np.angle(values[1:] / values[:-1])
        coarse = np.abs(jumps) >= PHASE_STEP
        if not np.any(coarse):
            return float(np.sum(jumps))
        if np.min(np.diff(t)[coarse]) < MIN_SEGMENT or t.size > MAX_EDGE_SAMPLES:
            raise ContourTooClose(f"phase not resolved on the edge {start} -> {end}")
        mids = 0.5 * (t[:-1][coarse] + t[1:][coarse])
        mid_values = np.asarray(problem.G(start + (end - start) * mids))
        order = np.argsort(np.concatenate((t, mids)), kind='stable')
        t = np.concatenate((t, mids))[order]
        values = np.concatenate((values, mid_values))[order]


def _count_once(problem: CharProblem, box: Box) -> int:
    x0, x1, y0, y1 = box
    corners = [complex(x0, y0), complex(x1, y0), complex(x1, y1), complex(x0, y1)]
    total = sum(_edge_phase(problem, corners[i], corners[(i + 1) % 4]) for i in range(4))
    winding = total / (2.0 * math.pi)
    count = round(winding)
    if abs(winding - count) > WINDING_TOLERANCE:
        raise NumericalError(f"winding number {winding:.3f} is not close to an integer",
                             diagnostics={'box': list(box)})
    return int(count)


def count_zeros(problem: CharProblem, box: Box, inward: bool = False) -> Tuple[int, Box]:
    """
    Number of zeros of G inside the box

    When the contour runs through a zero the box is moved by a small
    fraction of its larger side (outward, or inward when requested) and
    counted again. The step doubles with every attempt.
    """
    x0, x1, y0, y1 = box
    if not (x1 > x0 and y1 > y0):
        raise DomainError(f"degenerate search box {box}")
    for attempt in range(MAX_NUDGES + 1):
        try:
            return _count_once(problem, box), box
        except ContourTooClose as e:
            if attempt == MAX_NUDGES:
                raise NumericalError(f"contour still touches a zero after {MAX_NUDGES} nudges: {e}",
                                     diagnostics={'box': list(box)}) from e
            d = NUDGE * (2 ** attempt) * max(box[1] - box[0], box[3] - box[2])
            sign = -1.0 if inward else 1.0
            box = (box[0] - sign * d, box[1] + sign * d, box[2] - sign * d, box[3] + sign * d)
            logger.warning(f"Contour too close to a zero, nudged box to {box}")
    raise AssertionError("unreachable")


def _count_split(problem: CharProblem, box: Box, vertical: bool) -> Tuple[int, float]:
    """
    Zeros right of (vertical) or above a cut through the box, and the cut used

    The outer edges were already resolved when the box was counted, so only
    the cut can touch a zero; it is moved to the next fraction when it does.
    """
    x0, x1, y0, y1 = box
    for fraction in SPLITS:
        if vertical:
            cut = x0 + fraction * (x1 - x0)
            part = (cut, x1, y0, y1)
        else:
            cut = y0 + fraction * (y1 - y0)
            part = (x0, x1, cut, y1)
        try:
            return _count_once(problem, part), cut
        except ContourTooClose:
            logger.debug(f"cut at {cut:.12g} touches a zero, moving it")
    raise NumericalError(f"every cut of {box} touches a zero", diagnostics={'box': list(box)})


def newton_polish(problem: CharProblem, guess: complex, tol: float = NEWTON_TOL) -> Tuple[complex, float]:
    """Newton iteration on G with a centered-difference derivative"""
    lam = complex(guess)
    value = problem.G(lam)
    for _ in range(NEWTON_MAX_ITER):
        if abs(value) < tol:
            break
        h = 1e-6 * (1.0 + abs(lam))
        slope = (problem.G(lam + h) - problem.G(lam - h)) / (2.0 * h)
        if slope == 0 or not np.isfinite(slope):
            raise NumericalError(f"Newton derivative vanished at {lam}")
        lam = lam - value / slope
        value = problem.G(lam)
    residual = abs(value)
    if residual >= tol:
        logger.warning(f"Newton stopped at {lam} with |G|={residual:.3g}")
    return lam, residual


def _isolate(problem: CharProblem, box: Box, count: int, min_width: float) -> complex:
    """Shrink the box onto its rightmost zero, return a starting point for Newton"""
    x0, x1, y0, y1 = box
    for _ in range(200):
        width, height = x1 - x0, y1 - y0
        if count == 1 and max(width, height) < 1e-2 * (1.0 + abs(complex(x1, y1))):
            break
        if width > min_width:
            right, xm = _count_split(problem, (x0, x1, y0, y1), vertical=True)
            if right > 0:
                x0, count = xm, right
            else:
                x1 = xm
        else:
            upper, ym = _count_split(problem, (x0, x1, y0, y1), vertical=False)
            if upper > 0:
                y0, count = ym, upper
            else:
                y1 = ym
    return complex(0.5 * (x0 + x1), 0.5 * (y0 + y1))


def rhp_count(problem: CharProblem, box: Box) -> int:
    """
    Zeros with positive real part inside the box

    The left edge sits on the imaginary axis. If a zero lies on the axis the
    edge moves right by a step growing tenfold per attempt from AXIS_NUDGE,
    so zeros on the axis count as stable.
    """
    x0, x1, y0, y1 = box
    if x1 <= 0:
        return 0
    left = max(x0, 0.0)
    offset = AXIS_NUDGE * (1.0 + x1 - left)
    for attempt in range(MAX_NUDGES + 1):
        try:
            return _count_once(problem, (left, x1, y0, y1))
        except ContourTooClose as e:
            if attempt == MAX_NUDGES:
                raise NumericalError(f"right half-plane contour still touches a zero: {e}",
                                     diagnostics={'box': [left, x1, y0, y1]}) from e
            pad = NUDGE * max(x1 - left, y1 - y0)
            left += offset
            x1, y0, y1 = x1 + pad, y0 - pad, y1 + pad
            offset *= 10.0
            logger.warning(f"Zero near the imaginary axis, right half-plane box now starts at {left:.3g}")
    raise AssertionError("unreachable")


def rightmost_root(problem: CharProblem, box: Optional[Box] = None,
                   slabs: int = 8) -> RootReport:
    """
    Rightmost zero of G in the box and the number of zeros with Re > 0

    The box is scanned in vertical slabs from the right; the first slab
    holding zeros is bisected until one zero remains, which Newton polishes.
    """
    box = box or default_box(problem)
    notes = []
    if isinstance(problem, DelayProblem):
        bound = delay_right_bound(problem)
        if box[1] < bound:
            note = f"box right edge {box[1]:g} is left of the root bound {bound:g}"
            logger.warning(note)
            notes.append(note)

    total, box = count_zeros(problem, box)
    if total == 0:
        raise NumericalError(f"no characteristic roots inside {box}", diagnostics={'box': list(box)})

    x0, x1, y0, y1 = box
    edges = np.linspace(x1, x0, slabs + 1)
    guess = None
    for right, left in zip(edges[:-1], edges[1:]):
        count, slab = count_zeros(problem, (left, right, y0, y1))
        if count > 0:
            guess = _isolate(problem, slab, count, min_width=1e-6 * (x1 - x0))
            break
    if guess is None:
        raise NumericalError("slab scan found no zeros although the box count is positive")

    root, residual = newton_polish(problem, guess)
    if root.imag < 0 and abs(root.imag) > 1e-12:
        root = root.conjugate()
    count_rhp = rhp_count(problem, box)
    if count_rhp == 0 and root.real > RHP_TOL * (1.0 + abs(root)):
        # conjugate pair unless the root is real
        count_rhp = 1 if abs(root.imag) <= 1e-12 else 2
        note = f"contour count missed the root {root:.6g}; right half-plane count set to {count_rhp}"
        logger.warning(note)
        notes.append(note)
    logger.info(f"{problem.variant}: rightmost root {root:.6g}, |G|={residual:.2g}, "
                f"{count_rhp} in right half-plane")
    return RootReport(root, residual, count_rhp, total, box, notes)
