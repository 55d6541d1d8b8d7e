#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Single-shot tasks behind the steady and stability commands
"""

import logging
from pathlib import Path
from typing import Any, Dict, Optional

from ..analysis.characteristic import (
    DelayProblem, gconst_problem, general_problem, reduced_quadratic, true_data_problem,
)
from ..analysis.hopf import OutOfRange, heaviside_hopf, hopf_simple
from ..analysis.roots import rightmost_root
from ..core.errors import CelldiffError, ConfigurationError
from ..core.params import GMode
from ..data.loader import build_model
from ..models.common import Grid
from ..models.steady_state import closed_form_u_star, compute_steady_state
from ..reports.export import write_hopf, write_json, write_roots, write_steady

logger = logging.getLogger(__name__)

VARIANTS = ('delay', 'reduced', 'gconst', 'general', 'hopf-simple', 'heaviside')
MODEL_VARIANTS = ('reduced', 'gconst', 'general')


def _require(options: Dict[str, Any], *names: str) -> Dict[str, float]:
    missing = [name for name in names if name not in options]
    if missing:
        raise ConfigurationError(f"missing option(s): {', '.join(missing)}")
    try:
        return {name: float(options[name]) for name in names}
    except (TypeError, ValueError) as e:
        raise ConfigurationError(f"options must be numbers: {e}") from e


def _grid(config: Dict[str, Any]):
    if 'model' not in config:
        raise ConfigurationError("this command needs a configuration with a 'model' section")
    params = build_model(config['model'])
    I = int(config.get('numerics', {}).get('I', 100))
    return params, Grid.for_params(params, I)


def steady_task(config: Dict[str, Any], out_dir: Path) -> Dict[str, Any]:
    """Steady state of the configured model, written to steady.csv and steady.json"""
    params, grid = _grid(config)
    discrete = bool(config.get('options', {}).get('discrete_profile', False))
    ss = compute_steady_state(params, grid, discrete=discrete)
    result = ss.to_dict()
    result['I'] = grid.I
    if ss.exists_positive:
        try:
            result['u_star_closed_form'] = closed_form_u_star(params)
            result['u_star_numeric'] = float(ss.u_bar[-1])
        except CelldiffError as e:
            logger.debug(f"Closed form not available: {e}")
    else:
        result['reason'] = 'alpha(0) <= 0, only the trivial steady state exists'
    out_dir = Path(out_dir)
    write_steady(ss, out_dir)
    write_json(result, out_dir, 'steady.json')
    return result


def stability_task(variant: str, options: Dict[str, Any], out_dir: Path,
                   config: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """Rightmost root or Hopf data for one characteristic variant"""
    if variant not in VARIANTS:
        raise ConfigurationError(f"unknown variant '{variant}'; choose from {', '.join(VARIANTS)}")
    out_dir = Path(out_dir)
    box = tuple(float(b) for b in options['box']) if 'box' in options else None

    if variant == 'hopf-simple':
        values = _require(options, 'tau', 'v_bar', 'alpha_prime')
        points = hopf_simple(values['tau'], values['v_bar'], abs(values['alpha_prime']))
        write_hopf(points, out_dir)
        result = {'variant': variant, 'points': [p.to_dict() for p in points]}
    elif variant == 'heaviside':
        values = _require(options, 'a_w', 'B', 'p_w', 'omega')
        outcome = heaviside_hopf(values['a_w'], values['B'], values['p_w'], values['omega'])
        result = {'variant': variant, 'out_of_range': isinstance(outcome, OutOfRange)}
        result.update(outcome.to_dict())
        if isinstance(outcome, OutOfRange):
            result['reason'] = outcome.reason
    else:
        if variant == 'delay':
            values = _require(options, 'mu', 'tau', 'A')
            problem = DelayProblem(values['mu'], values['tau'], values['A'])
        else:
            params, grid = _grid(config or {})
            if variant == 'reduced':
                problem = reduced_quadratic(params, grid)
            elif variant == 'gconst':
                problem = gconst_problem(params, grid)
            else:
                ss = compute_steady_state(params, grid)
                if params.g_mode is GMode.FROM_TRUE_DATA:
                    problem = true_data_problem(params, ss, grid)
                else:
                    problem = general_problem(params, ss, grid)
        report = rightmost_root(problem, box)
        write_roots([report], out_dir)
        result = {'variant': variant, 'problem': problem.to_dict(), 'root': report.to_dict()}

    write_json(result, out_dir, 'stability.json')
    return result
