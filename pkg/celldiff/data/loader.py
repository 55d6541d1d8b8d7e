#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Preset and configuration loader
Reads bundled JSON presets and user configuration files and turns their
sections into parameter objects
"""

import copy
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from ..config import DEFAULT_PRESETS_DIR
from ..core.coefficients import CoefficientTable
from ..core.errors import ConfigurationError
from ..core.params import ContinuousModelParams, DiscreteModelParams

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def list_presets(presets_dir: Optional[PathLike] = None) -> List[str]:
    """Names of the JSON presets available in the presets directory"""
    directory = Path(presets_dir or DEFAULT_PRESETS_DIR)
    if not directory.is_dir():
        logger.warning(f"Presets directory {directory} does not exist")
        return []
    return sorted(path.stem for path in directory.glob('*.json'))


def load_config_file(path: PathLike) -> Dict[str, Any]:
    """Parse a JSON configuration file"""
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"configuration file {path} not found")
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        logger.error(f"Error parsing configuration {path}: {e}")
        raise ConfigurationError(f"invalid JSON in {path}: {e}") from e
    if not isinstance(data, dict):
        raise ConfigurationError(f"configuration {path} must hold a JSON object")
    return data


def load_preset(name: str, presets_dir: Optional[PathLike] = None) -> Dict[str, Any]:
    directory = Path(presets_dir or DEFAULT_PRESETS_DIR)
    path = directory / f"{name}.json"
    if not path.is_file():
        available = ', '.join(list_presets(directory)) or 'none'
        raise ConfigurationError(f"preset '{name}' not found in {directory} (available: {available})")
    data = load_config_file(path)
    logger.info(f"Loaded preset '{name}' from {path}")
    return data


def merge_config(base: Dict[str, Any], override: Optional[Dict[str, Any]]) -> Dict[str, Any]:
    """Recursive merge; dictionaries merge key by key, anything else replaces"""
    merged = copy.deepcopy(base)
    for key, value in (override or {}).items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = merge_config(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def build_table(data: Dict[str, Any]) -> CoefficientTable:
    """Coefficient table from nodes/values, a 'constant' or a 'step' description"""
    if 'step' in data:
        shape = data['step']
        try:
            return CoefficientTable.step(float(shape['lo']), float(shape['hi']), float(shape['base']),
                                         float(shape['jump']), float(shape['onset']),
                                         shape.get('ramp'))
        except KeyError as e:
            raise ConfigurationError(f"step table missing field {e}") from e
    if 'constant' in data:
        shape = data['constant']
        try:
            return CoefficientTable.constant(float(shape['value']), float(shape['lo']), float(shape['hi']))
        except KeyError as e:
            raise ConfigurationError(f"constant table missing field {e}") from e
    return CoefficientTable.from_dict(data)


def build_model(data: Dict[str, Any]) -> ContinuousModelParams:
    if not isinstance(data, dict):
        raise ConfigurationError("the 'model' section must be an object")
    normalized = dict(data)
    for name in ('a', 'p'):
        if name not in normalized:
            raise ConfigurationError(f"model parameters missing field '{name}'")
        normalized[name] = build_table(normalized[name]).to_dict()
    return ContinuousModelParams.from_dict(normalized)


def build_discrete(data: Dict[str, Any]) -> DiscreteModelParams:
    if not isinstance(data, dict):
        raise ConfigurationError("the 'discrete' section must be an object")
    return DiscreteModelParams.from_dict(data)
