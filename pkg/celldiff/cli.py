#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
celldiff command line
Runs registered scenarios, steady-state solves and stability queries
"""

import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

import click

from .config import Settings, load_environment_variables
from .core.errors import CelldiffError, NumericalError
from .data.loader import load_config_file
from .runner import SCENARIOS, VARIANTS, ScenarioConfig, run_scenario, stability_task, steady_task

logger = logging.getLogger(__name__)

EXIT_FAILED = 1
EXIT_NUMERICAL = 2


def _parse_options(pairs: Tuple[str, ...]) -> Dict[str, Any]:
    """key=value pairs; values parsed as JSON when possible"""
    options = {}
    for pair in pairs:
        if '=' not in pair:
            raise click.BadParameter(f"expected key=value, got '{pair}'", param_hint='--set')
        key, raw = pair.split('=', 1)
        try:
            options[key.strip()] = json.loads(raw)
        except json.JSONDecodeError:
            options[key.strip()] = raw
    return options


def _fail(error: CelldiffError) -> None:
    code = EXIT_NUMERICAL if isinstance(error, NumericalError) else EXIT_FAILED
    click.echo(f"Error: {error}", err=True)
    sys.exit(code)


@click.group()
@click.option('--env-file', type=click.Path(dir_okay=False, path_type=Path), default=None,
              help='Environment file to load (default: ./.env)')
@click.option('--log-level', default=None, help='Override CELLDIFF_LOG_LEVEL')
@click.pass_context
def cli(ctx, env_file: Optional[Path], log_level: Optional[str]):
    """Stem-cell differentiation model: simulations and stability analysis."""
    load_environment_variables(env_file)
    settings = Settings.from_env()
    if log_level:
        settings = Settings(settings.output_dir, log_level.upper(), settings.presets_dir,
                            settings.workers, settings.snapshot_count)
    settings.configure_logging()
    ctx.obj = settings


@cli.command('scenarios')
def list_scenarios():
    """List the registered scenarios."""
    for name, description in SCENARIOS.describe().items():
        click.echo(f"{name:16s} {description}")


@cli.command('run')
@click.argument('scenario')
@click.option('--config', 'config_path', type=click.Path(dir_okay=False, path_type=Path),
              default=None, help='JSON file merged over the scenario preset')
@click.option('--out', 'out_dir', type=click.Path(file_okay=False, path_type=Path), default=None,
              help='Output directory (default: <output dir>/<scenario>)')
@click.option('--plots/--no-plots', default=None, help='Write SVG plots')
@click.pass_obj
def run_command(settings: Settings, scenario: str, config_path: Optional[Path],
                out_dir: Optional[Path], plots: Optional[bool]):
    """Run SCENARIO and write its tables and summary.json."""
    try:
        overrides = load_config_file(config_path) if config_path else None
        config = ScenarioConfig.build(scenario, overrides, out_dir, plots, settings)
        result = run_scenario(config)
    except CelldiffError as e:
        _fail(e)
        return
    status = 'passed' if result.passed else 'FAILED'
    click.echo(f"{result.scenario}: {status} ({config.output_dir})")
    for name, ok in result.summary['checks'].items():
        click.echo(f"  {'ok ' if ok else 'BAD'} {name}")
    if not result.passed:
        sys.exit(EXIT_FAILED)


@cli.command('steady')
@click.option('--config', 'config_path', required=True,
              type=click.Path(dir_okay=False, path_type=Path), help='JSON file with a model section')
@click.option('--out', 'out_dir', type=click.Path(file_okay=False, path_type=Path), default=None)
@click.pass_obj
def steady_command(settings: Settings, config_path: Path, out_dir: Optional[Path]):
    """Solve for the steady state of a configured model."""
    out_dir = out_dir or settings.output_dir / 'steady'
    try:
        result = steady_task(load_config_file(config_path), out_dir)
    except CelldiffError as e:
        _fail(e)
        return
    if result['exists_positive']:
        click.echo(f"v_bar={result['v_bar']:.10g} w_bar={result['w_bar']:.10g} ({out_dir})")
    else:
        click.echo(f"trivial steady state only: {result['reason']}")


@cli.command('stability')
@click.argument('variant', type=click.Choice(VARIANTS))
@click.option('--config', 'config_path', type=click.Path(dir_okay=False, path_type=Path),
              default=None, help='JSON file with a model section (reduced, gconst, general)')
@click.option('--set', 'pairs', multiple=True, metavar='KEY=VALUE',
              help='Numeric inputs such as mu=1 tau=1 A=-2')
@click.option('--out', 'out_dir', type=click.Path(file_okay=False, path_type=Path), default=None)
@click.pass_obj
def stability_command(settings: Settings, variant: str, config_path: Optional[Path],
                      pairs: Tuple[str, ...], out_dir: Optional[Path]):
    """Rightmost root or Hopf data for a characteristic VARIANT."""
    out_dir = out_dir or settings.output_dir / f"stability-{variant}"
    try:
        config = load_config_file(config_path) if config_path else None
        result = stability_task(variant, _parse_options(pairs), out_dir, config)
    except CelldiffError as e:
        _fail(e)
        return
    click.echo(json.dumps(result, indent=2, sort_keys=True, default=str))


def main():
    cli(prog_name='celldiff')


if __name__ == '__main__':
    main()
