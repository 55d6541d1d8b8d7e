#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Tabular exports
CSV tables for trajectories, profiles, steady states and stability results,
plus the JSON summary and failure diagnostics of a run
"""

import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from ..analysis.hopf import HopfPoint
from ..analysis.roots import RootReport
from ..core.errors import CelldiffError, ConfigurationError, NumericalError, StepError
from ..models.steady_state import SteadyState
from ..models.transport import PdeState, PdeTrajectory

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]
LINE_TERMINATOR = '\r\n'
PROFILE_SELECTIONS = ('final', 'all')


def _to_json(value: Any) -> Any:
    """json.dump fallback for numpy scalars and arrays, paths and complex numbers"""
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, complex):
        return {'re': value.real, 'im': value.imag}
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def _clean(value: Any) -> Any:
    """Replace non-finite floats with None so the JSON stays strict"""
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, (float, np.floating)) and not math.isfinite(value):
        return None
    return value


def write_frame(frame: pd.DataFrame, out_dir: PathLike, name: str) -> Path:
    path = Path(out_dir) / name
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, lineterminator=LINE_TERMINATOR)
    logger.debug(f"Wrote {len(frame)} rows to {path}")
    return path


def series_frame(traj: PdeTrajectory) -> pd.DataFrame:
    arrays = traj.arrays()
    return pd.DataFrame({key: arrays[key] for key in ('t', 'w', 'v', 'metric', 'residual', 'dt')})


def write_series(traj: PdeTrajectory, out_dir: PathLike, name: str = 'series.csv') -> Path:
    return write_frame(series_frame(traj), out_dir, name)


def profile_frame(state: PdeState, x: np.ndarray) -> pd.DataFrame:
    return pd.DataFrame({'x': np.asarray(x), 'u': state.u})


def write_profiles(traj: PdeTrajectory, out_dir: PathLike,
                   which: str = 'final') -> List[Path]:
    """profile_<k>.csv for every snapshot k, or only the last one"""
    x = traj.grid.centers
    snapshots = list(enumerate(traj.snapshots))
    if which == 'final':
        snapshots = snapshots[-1:]
    elif which not in PROFILE_SELECTIONS:
        raise ConfigurationError(
            f"outputs.profiles must be one of {PROFILE_SELECTIONS}, got {which!r}")
    return [write_frame(profile_frame(state, x), out_dir, f"profile_{k}.csv")
            for k, state in snapshots]


def steady_header(ss: SteadyState) -> Dict[str, Any]:
    header = {'exists_positive': bool(ss.exists_positive), 'discrete': bool(ss.discrete),
              'v_bar': float(ss.v_bar), 'w_bar': float(ss.w_bar)}
    header.update({f"residual_{name}": float(value) for name, value in ss.residuals.items()})
    return header


def write_steady(ss: SteadyState, out_dir: PathLike) -> Path:
    """steady.csv: '# key=value' lines for the scalars, then the x, u_bar table"""
    path = Path(out_dir) / 'steady.csv'
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame({'x': ss.x, 'u_bar': ss.u_bar})
    with open(path, 'w', encoding='utf-8', newline='') as f:
        for key, value in steady_header(ss).items():
            f.write(f"# {key}={value!r}{LINE_TERMINATOR}")
        frame.to_csv(f, index=False, lineterminator=LINE_TERMINATOR)
    logger.debug(f"Wrote steady state with {len(frame)} rows to {path}")
    return path


def write_hopf(points: Iterable[HopfPoint], out_dir: PathLike,
               extra: Optional[Sequence[Dict[str, Any]]] = None) -> Path:
    """hopf.csv with branch, omega, mu, residual; extra holds leading columns per row"""
    rows = []
    for i, point in enumerate(points):
        row = dict(extra[i]) if extra else {}
        row.update(point.to_dict())
        rows.append(row)
    columns = list(rows[0].keys()) if rows else ['branch', 'omega', 'mu', 'residual']
    return write_frame(pd.DataFrame(rows, columns=columns), out_dir, 'hopf.csv')


def write_roots(reports: Sequence[RootReport], out_dir: PathLike,
                labels: Optional[Sequence[Dict[str, Any]]] = None) -> Path:
    rows = []
    for i, report in enumerate(reports):
        row = dict(labels[i]) if labels else {}
        row.update({'re': report.root.real, 'im': report.root.imag,
                    'residual': report.residual, 'rhp_count': report.rhp_count})
        rows.append(row)
    columns = list(rows[0].keys()) if rows else ['re', 'im', 'residual', 'rhp_count']
    return write_frame(pd.DataFrame(rows, columns=columns), out_dir, 'roots.csv')


def write_json(data: Dict[str, Any], out_dir: PathLike, name: str) -> Path:
    path = Path(out_dir) / name
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(_clean(data), f, indent=2, sort_keys=True, default=_to_json)
        f.write('\n')
    return path


def write_summary(summary: Dict[str, Any], out_dir: PathLike) -> Path:
    path = write_json(summary, out_dir, 'summary.json')
    logger.info(f"Summary written to {path}")
    return path


def write_diagnostic(error: CelldiffError, out_dir: PathLike,
                     context: Optional[Dict[str, Any]] = None) -> Path:
    """diagnostic.json describing a fatal numerical event"""
    data = {
        'error': type(error).__name__,
        'message': str(error),
        'context': context or {},
    }
    if isinstance(error, NumericalError):
        data['diagnostics'] = error.diagnostics
    if isinstance(error, StepError) and isinstance(error.last_state, PdeState):
        state = error.last_state
        data['last_state'] = {'t': state.t, 'w': state.w, 'v': state.v,
                              'u_min': float(np.min(state.u)), 'u_max': float(np.max(state.u))}
    path = write_json(data, out_dir, 'diagnostic.json')
    logger.error(f"Error details written to {path}")
    return path
