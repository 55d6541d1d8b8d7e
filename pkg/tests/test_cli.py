import json

import pytest
from click.testing import CliRunner

import celldiff.cli as cli_module
from celldiff.cli import cli
from celldiff.core.errors import NumericalError
from celldiff.data.loader import load_preset


@pytest.fixture
def runner(monkeypatch, tmp_path):
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv('CELLDIFF_OUTPUT_DIR', str(tmp_path / 'output'))
    monkeypatch.setenv('CELLDIFF_LOG_LEVEL', 'WARNING')
    return CliRunner()


def test_scenarios_command(runner):
    result = runner.invoke(cli, ['scenarios'])
    assert result.exit_code == 0
    assert 'fig1-grids' in result.output
    assert 'heaviside-hopf' in result.output


def test_unknown_scenario_exits_with_one(runner):
    result = runner.invoke(cli, ['run', 'fig99'])
    assert result.exit_code == 1
    assert 'unknown scenario' in result.output


def test_run_with_config_file(runner, tmp_path):
    config = tmp_path / 'hopf.json'
    config.write_text(json.dumps({'options': {'A_values': [1.3]}}))
    out = tmp_path / 'hopf-out'
    result = runner.invoke(cli, ['run', 'hopf-scan', '--config', str(config), '--out', str(out)])
    assert result.exit_code == 0, result.output
    assert 'passed' in result.output
    assert (out / 'hopf.csv').exists()
    assert json.loads((out / 'summary.json').read_text())['passed'] is True


def test_numerical_error_exits_with_two(runner, monkeypatch):
    def failing(config):
        raise NumericalError('winding number not an integer')

    monkeypatch.setattr(cli_module, 'run_scenario', failing)
    result = runner.invoke(cli, ['run', 'ddecheck'])
    assert result.exit_code == 2
    assert 'winding number' in result.output


def test_steady_command(runner, tmp_path):
    config = tmp_path / 'model.json'
    preset = load_preset('fig45')
    config.write_text(json.dumps({'model': preset['model'], 'numerics': {'I': 40}}))
    out = tmp_path / 'steady'
    result = runner.invoke(cli, ['steady', '--config', str(config), '--out', str(out)])
    assert result.exit_code == 0, result.output
    assert 'v_bar=' in result.output
    data = json.loads((out / 'steady.json').read_text())
    assert data['exists_positive'] is True
    assert data['I'] == 40
    assert (out / 'steady.csv').exists()


def test_steady_command_without_positive_state(runner, tmp_path):
    config = tmp_path / 'model.json'
    config.write_text(json.dumps({'model': load_preset('extinction')['model']}))
    result = runner.invoke(cli, ['steady', '--config', str(config), '--out', str(tmp_path / 's')])
    assert result.exit_code == 0
    assert 'trivial' in result.output


def test_stability_delay(runner, tmp_path):
    out = tmp_path / 'delay'
    result = runner.invoke(cli, ['stability', 'delay', '--set', 'mu=1', '--set', 'tau=1',
                                 '--set', 'A=-2', '--set', 'box=[-5, 5, -50, 50]',
                                 '--out', str(out)])
    assert result.exit_code == 0, result.output
    data = json.loads((out / 'stability.json').read_text())
    assert data['root']['rhp_count'] >= 1
    assert (out / 'roots.csv').exists()


def test_stability_heaviside_out_of_range(runner, tmp_path):
    result = runner.invoke(cli, ['stability', 'heaviside', '--set', 'a_w=0.75', '--set', 'B=50',
                                 '--set', 'p_w=30', '--set', 'omega=800',
                                 '--out', str(tmp_path / 'hv')])
    assert result.exit_code == 0, result.output
    data = json.loads((tmp_path / 'hv' / 'stability.json').read_text())
    assert data['out_of_range'] is True


def test_stability_missing_inputs(runner):
    result = runner.invoke(cli, ['stability', 'hopf-simple', '--set', 'tau=1'])
    assert result.exit_code == 1
    assert 'missing option' in result.output


def test_stability_model_variant_needs_config(runner):
    result = runner.invoke(cli, ['stability', 'reduced'])
    assert result.exit_code == 1
    assert 'model' in result.output


def test_bad_set_syntax(runner):
    result = runner.invoke(cli, ['stability', 'delay', '--set', 'mu'])
    assert result.exit_code == 2
