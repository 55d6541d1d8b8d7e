import json
import math

import numpy as np
import pandas as pd
import pytest

from celldiff.analysis.hopf import hopf_simple
from celldiff.core.errors import ConfigurationError, StepError
from celldiff.models.common import Grid
from celldiff.models.steady_state import compute_steady_state
from celldiff.models.transport import initial_state, run
from celldiff.reports.export import (
    write_diagnostic, write_hopf, write_profiles, write_series, write_steady, write_summary,
)
from celldiff.reports.plots import LinePlot, PlotBundle, emit_plots


def _short_run(model):
    grid = Grid.for_params(model, 10)
    return run(model, initial_state(model, grid, 10.0, 10.0), 0.2, grid, snapshot_count=3)


def test_series_csv_uses_crlf(tmp_path, g_one_model):
    traj = _short_run(g_one_model)
    path = write_series(traj, tmp_path)
    raw = path.read_bytes()
    assert raw.startswith(b't,w,v,metric,residual,dt\r\n')
    assert raw.count(b'\r\n') == len(traj.times) + 1
    frame = pd.read_csv(path)
    assert frame['t'].iloc[-1] == 0.2


def test_profiles_and_steady_tables(tmp_path, g_one_model):
    traj = _short_run(g_one_model)
    assert [p.name for p in write_profiles(traj, tmp_path)] == ['profile_2.csv']
    assert len(write_profiles(traj, tmp_path, 'all')) == 3
    profile = pd.read_csv(tmp_path / 'profile_0.csv')
    assert list(profile.columns) == ['x', 'u']

    grid = Grid.for_params(g_one_model, 10)
    ss = compute_steady_state(g_one_model, grid)
    path = write_steady(ss, tmp_path)
    frame = pd.read_csv(path, comment='#')
    assert list(frame.columns) == ['x', 'u_bar']
    assert np.allclose(frame['u_bar'], ss.u_bar, rtol=1e-12)
    header = dict(line[2:].split('=', 1) for line in path.read_text().splitlines()
                  if line.startswith('# '))
    assert float(header['v_bar']) == ss.v_bar
    assert float(header['w_bar']) == ss.w_bar
    assert float(header['residual_outflow']) == ss.residuals['outflow']
    assert header['exists_positive'] == 'True'


def test_unknown_profile_selection(tmp_path, g_one_model):
    with pytest.raises(ConfigurationError):
        write_profiles(_short_run(g_one_model), tmp_path, 'every')
    assert not list(tmp_path.iterdir())


def test_hopf_table_with_leading_columns(tmp_path):
    points = hopf_simple(1.0, 1.0, 1.3)
    path = write_hopf(points, tmp_path, [{'A': 1.3}])
    frame = pd.read_csv(path)
    assert list(frame.columns) == ['A', 'branch', 'omega', 'mu', 'residual']
    empty = pd.read_csv(write_hopf([], tmp_path / 'none'))
    assert list(empty.columns) == ['branch', 'omega', 'mu', 'residual']


def test_summary_is_strict_json(tmp_path):
    path = write_summary({'value': math.nan, 'array': np.arange(3), 'root': 1 + 2j,
                          'nested': {'x': np.float64(math.inf)}}, tmp_path)
    data = json.loads(path.read_text())
    assert data['value'] is None
    assert data['array'] == [0, 1, 2]
    assert data['root'] == {'re': 1.0, 'im': 2.0}
    assert data['nested']['x'] is None


def test_diagnostic_includes_last_state(tmp_path, g_one_model):
    state = _short_run(g_one_model).final
    error = StepError('bad step', last_state=state, diagnostics={'dt': 0.1})
    path = write_diagnostic(error, tmp_path, {'scenario': 'test'})
    data = json.loads(path.read_text())
    assert data['error'] == 'StepError'
    assert data['diagnostics'] == {'dt': 0.1}
    assert data['last_state']['t'] == 0.2
    assert data['context'] == {'scenario': 'test'}


def test_svg_output_is_reproducible(tmp_path):
    x = np.linspace(0, 1, 50)
    bundle = PlotBundle('demo', [
        LinePlot('curve', 'x', 'y', {'a': (x, x ** 2), 'b': (x, x)}),
        LinePlot('empty', 'x', 'y', {'a': ([], [])}, logy=True),
    ])
    first = emit_plots(bundle, tmp_path / 'one')
    second = emit_plots(bundle, tmp_path / 'two')
    assert [p.name for p in first] == ['curve.svg', 'empty.svg']
    for a, b in zip(first, second):
        assert a.read_bytes() == b.read_bytes()
