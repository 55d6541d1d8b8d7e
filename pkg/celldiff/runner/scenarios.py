#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Scenario registry and runner
Each registered scenario builds its parameters from a preset merged with the
user configuration, runs the models, writes CSV tables (and optionally SVG
plots) and records its checks in summary.json
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import numpy as np
import pandas as pd

from ..analysis.characteristic import DelayProblem, delay_problem, general_problem, true_data_problem
from ..analysis.hopf import (
    OutOfRange, branch_interval, heaviside_hopf, hopf_simple, imaginary_crossing_scan,
    omitted_branch_reason,
)
from ..analysis.roots import rightmost_root
from ..config import Settings
from ..core.errors import CelldiffError, ConfigurationError, NumericalError
from ..core.params import BoundaryMode, ContinuousModelParams, DiscreteModelParams, GMode, discrete_to_continuous
from ..data.loader import build_discrete, build_model, load_preset, merge_config
from ..models.bounds import apriori_bounds, check_bounds
from ..models.common import Grid
from ..models.compartments import CompartmentState, Matched, integrate_discrete
from ..models.steady_state import SteadyState, compute_steady_state
from ..models.transport import (
    PdeState, PdeTrajectory, extinction_functional, extinction_weights, initial_state, run,
)
from ..reports.export import (
    PROFILE_SELECTIONS, profile_frame, series_frame, write_diagnostic, write_frame, write_hopf,
    write_profiles, write_roots, write_series, write_summary,
)
from ..reports.plots import LinePlot, PlotBundle, emit_plots

logger = logging.getLogger(__name__)

BALANCE_RTOL = 1e-12
HOPF_RTOL = 1e-8
ROOT_RTOL = 1e-10


@dataclass
class ScenarioConfig:
    scenario: str
    data: Dict[str, Any]
    output_dir: Path
    plots: bool = False
    workers: int = 1
    snapshot_count: int = 200

    @property
    def numerics(self) -> Dict[str, Any]:
        return self.data.get('numerics', {})

    @property
    def initial(self) -> Dict[str, Any]:
        return self.data.get('initial', {})

    @property
    def options(self) -> Dict[str, Any]:
        return self.data.get('options', {})

    @property
    def outputs(self) -> Dict[str, Any]:
        return self.data.get('outputs', {})

    def model(self) -> ContinuousModelParams:
        if 'model' not in self.data:
            raise ConfigurationError(f"scenario '{self.scenario}' needs a 'model' section")
        return build_model(self.data['model'])

    def discrete(self) -> DiscreteModelParams:
        if 'discrete' not in self.data:
            raise ConfigurationError(f"scenario '{self.scenario}' needs a 'discrete' section")
        return build_discrete(self.data['discrete'])

    @classmethod
    def build(cls, scenario: str, overrides: Optional[Dict[str, Any]] = None,
              output_dir: Optional[Path] = None, plots: Optional[bool] = None,
              settings: Optional[Settings] = None) -> 'ScenarioConfig':
        """Merge the scenario preset with overrides and resolve output settings"""
        settings = settings or Settings.from_env()
        entry = SCENARIOS.get(scenario)
        base = load_preset(entry.preset, settings.presets_dir) if entry.preset else {}
        data = merge_config(base, overrides)
        outputs = data.get('outputs', {})
        if outputs.get('profiles', 'final') not in PROFILE_SELECTIONS:
            raise ConfigurationError(f"outputs.profiles must be one of {PROFILE_SELECTIONS}, "
                                     f"got {outputs['profiles']!r}")
        if output_dir is None:
            output_dir = Path(outputs['dir']) if outputs.get('dir') else settings.output_dir / scenario
        if plots is None:
            plots = bool(outputs.get('plots', False))
        snapshots = int(data.get('numerics', {}).get('snapshot_count', settings.snapshot_count))
        return cls(scenario, data, Path(output_dir), plots, settings.workers, snapshots)


@dataclass
class ScenarioOutcome:
    checks: Dict[str, bool]
    results: Dict[str, Any]
    files: List[Path] = field(default_factory=list)
    plots: Optional[PlotBundle] = None


@dataclass
class ScenarioResult:
    scenario: str
    passed: bool
    summary: Dict[str, Any]
    files: List[Path]


@dataclass(frozen=True)
class Scenario:
    name: str
    description: str
    preset: Optional[str]
    func: Callable[[ScenarioConfig], ScenarioOutcome]


class ScenarioRegistry:
    """Named scenarios registered with a decorator"""

    def __init__(self):
        self._scenarios: Dict[str, Scenario] = {}

    def register(self, name: str, description: str, preset: Optional[str] = None):
        def decorator(func):
            if name in self._scenarios:
                raise ConfigurationError(f"scenario '{name}' registered twice")
            self._scenarios[name] = Scenario(name, description, preset, func)
            return func
        return decorator

    def get(self, name: str) -> Scenario:
        try:
            return self._scenarios[name]
        except KeyError:
            raise ConfigurationError(
                f"unknown scenario '{name}'; registered: {', '.join(self.names())}") from None

    def names(self) -> List[str]:
        return sorted(self._scenarios)

    def describe(self) -> Dict[str, str]:
        return {name: self._scenarios[name].description for name in self.names()}


SCENARIOS = ScenarioRegistry()


def run_scenario(config: ScenarioConfig) -> ScenarioResult:
    """Run one scenario and write its outputs and summary.json"""
    scenario = SCENARIOS.get(config.scenario)
    out = config.output_dir
    out.mkdir(parents=True, exist_ok=True)
    logger.info(f"Running scenario '{scenario.name}' into {out}")

    try:
        outcome = scenario.func(config)
    except NumericalError as e:
        logger.error(f"Error running scenario {scenario.name}: {e}")
        write_diagnostic(e, out, {'scenario': scenario.name})
        raise

    files = list(outcome.files)
    if config.plots and outcome.plots is not None:
        files.extend(emit_plots(outcome.plots, out))

    passed = all(outcome.checks.values())
    summary = {
        'scenario': scenario.name,
        'description': scenario.description,
        'passed': passed,
        'checks': outcome.checks,
        'results': outcome.results,
        'config': config.data,
        'files': sorted(Path(f).name for f in files),
    }
    files.append(write_summary(summary, out))
    level = logging.INFO if passed else logging.WARNING
    logger.log(level, f"Scenario '{scenario.name}' finished: passed={passed}, checks={outcome.checks}")
    return ScenarioResult(scenario.name, passed, summary, files)


# helpers shared by the scenarios

def scaled_steady_state(ss: SteadyState, scale: float) -> PdeState:
    return PdeState(scale * ss.w_bar, scale * ss.u_bar, scale * ss.v_bar, 0.0)


def initial_pde(params: ContinuousModelParams, grid: Grid, initial: Dict[str, Any],
                ss: Optional[SteadyState] = None) -> PdeState:
    """Initial data from a configuration 'initial' section"""
    if 'steady_scale' in initial:
        ss = ss or compute_steady_state(params, grid)
        if not ss.exists_positive:
            raise ConfigurationError("steady_scale initial data needs a positive steady state")
        return scaled_steady_state(ss, float(initial['steady_scale']))

    w0 = float(initial.get('w0', 1e6))
    v0 = float(initial.get('v0', w0))
    tilt = initial.get('u0_tilt')
    if tilt is not None:
        def u0(x):
            return w0 * np.exp(float(tilt) * (x - params.x_origin))
    else:
        u0 = initial.get('u0')
    return initial_state(params, grid, w0, v0, u0)


def sign_changes(values: np.ndarray) -> int:
    """Sign changes of the discrete derivative, flat steps ignored"""
    diffs = np.diff(np.asarray(values, dtype=float))
    signs = np.sign(diffs[diffs != 0])
    return int(np.count_nonzero(np.diff(signs)))


def fit_decay_rate(t: np.ndarray, y: np.ndarray, start: float) -> float:
    """Slope of log y against t for t >= start"""
    mask = (t >= start) & (y > 0)
    if np.count_nonzero(mask) < 2:
        raise NumericalError(f"fewer than two positive samples after t={start:g} to fit a rate")
    slope, _ = np.polyfit(t[mask], np.log(y[mask]), 1)
    return float(slope)


def is_nonincreasing(values, rtol: float = 1e-12) -> bool:
    values = np.asarray(values, dtype=float)
    if values.size < 2:
        return True
    return bool(np.all(np.diff(values) <= rtol * np.abs(values[:-1])))


def _balance(traj: PdeTrajectory) -> float:
    return traj.max_relative_residual()


def _series_plots(traj: PdeTrajectory) -> List[LinePlot]:
    arrays = traj.arrays()
    final = traj.final
    return [
        LinePlot('w', 't (days)', 'stem cells w', {'w': (arrays['t'], arrays['w'])}),
        LinePlot('v', 't (days)', 'mature cells v', {'v': (arrays['t'], arrays['v'])}),
        LinePlot('metric', 't (days)', 'profile stability metric',
                 {'metric': (arrays['t'][1:], arrays['metric'][1:])}, logy=True),
        LinePlot('profile', 'maturity x', 'density u',
                 {f"t={final.t:g}": (traj.grid.centers, final.u)}),
    ]


def characteristic_root(params: ContinuousModelParams, ss: SteadyState, grid: Grid) -> Dict[str, Any]:
    """Rightmost characteristic root about the steady state, or the reason it is unavailable"""
    if not ss.exists_positive or params.boundary_mode is not BoundaryMode.SIMPLIFIED:
        return {'available': False, 'reason': 'needs a positive steady state and the simplified boundary'}
    try:
        if np.all(params.dg_dv(grid.centers, ss.v_bar) == 0):
            problem = delay_problem(params, ss, grid)
        elif params.g_mode is GMode.FROM_TRUE_DATA:
            problem = true_data_problem(params, ss, grid)
        else:
            problem = general_problem(params, ss, grid)
        report = rightmost_root(problem)
    except CelldiffError as e:
        logger.warning(f"Characteristic root unavailable: {e}")
        return {'available': False, 'reason': str(e)}
    data = report.to_dict()
    data.update({'available': True, 'problem': problem.to_dict()})
    return data


# registered scenarios

@SCENARIOS.register('fig1-grids', "Compartment model against transport runs on refined grids",
                    preset='table1')
def fig1_grids(config: ScenarioConfig) -> ScenarioOutcome:
    """
    Grid runs start from the steady state of their own scheme ('profile':
    'discrete') or from the quadrature profile ('continuous'), scaled by
    steady_scale. The I = n-2 comparison with the compartment model always
    starts from the quadrature profile, which is not a fixed point of the
    scheme, so both models go through the same transient.
    """
    dparams = config.discrete()
    grids = sorted({int(I) for I in config.numerics.get('grids', [6, 10, 25, 50, 100])})
    t_end = float(config.numerics.get('t_end', 500.0))
    scale = float(config.initial.get('steady_scale', 1.0))
    profile = str(config.initial.get('profile', 'continuous'))
    if profile not in ('continuous', 'discrete'):
        raise ConfigurationError(f"initial profile must be 'continuous' or 'discrete', got '{profile}'")
    equivalence_rtol = float(config.options.get('equivalence_rtol', 1e-6))
    converge_tol = float(config.options.get('converge_tol', 1e-6))
    out = config.output_dir
    base_I = dparams.n - 2

    def simulate(job):
        I, discrete = job
        params = discrete_to_continuous(dparams, I)
        grid = Grid.for_params(params, I)
        ss = compute_steady_state(params, grid, discrete=discrete)
        traj = run(params, scaled_steady_state(ss, scale), t_end, grid,
                   snapshot_count=config.snapshot_count)
        return I, ss, traj

    jobs = [(I, profile == 'discrete') for I in grids]
    if profile == 'discrete' or base_I not in grids:
        jobs.append((base_I, False))
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        finished = list(pool.map(simulate, jobs))
    runs = finished[:len(grids)]
    base = finished[-1] if len(finished) > len(grids) else next(r for r in runs if r[0] == base_I)

    checks = {}
    results: Dict[str, Any] = {'t_end': t_end, 'profile': profile, 'grids': {}}
    files = []
    frames = []
    v_lines, profile_lines, metric_lines = {}, {}, {}
    balance = 0.0
    for I, ss, traj in runs:
        metric = traj.metric[-1]
        results['grids'][str(I)] = {
            'steps': traj.steps,
            'final_w': traj.final.w,
            'final_v': traj.final.v,
            'final_metric': metric,
            'max_residual': _balance(traj),
            'converged': bool(metric < converge_tol),
        }
        results['v_bar'] = ss.v_bar
        balance = max(balance, _balance(traj))
        frame = series_frame(traj)
        frame.insert(0, 'I', I)
        frames.append(frame)
        files.append(write_frame(profile_frame(traj.final, traj.grid.centers), out, f"profile_{I}.csv"))
        v_lines[f"I={I}"] = (traj.times, traj.v)
        profile_lines[f"I={I}"] = (traj.grid.centers, traj.final.u)
        metric_lines[f"I={I}"] = (traj.times[1:], traj.metric[1:])
    files.append(write_frame(pd.concat(frames, ignore_index=True), out, 'series.csv'))

    coarse, fine = runs[0][2], runs[-1][2]
    results['contrast'] = bool(fine.metric[-1] < coarse.metric[-1])
    checks[f"converged_I={runs[-1][0]}"] = bool(fine.metric[-1] < converge_tol)

    traj = base[2]
    balance = max(balance, _balance(traj))
    start = traj.snapshots[0]
    init = CompartmentState(np.concatenate(([start.w], start.u[1:], [start.v])), start.t)
    disc = integrate_discrete(dparams, init, t_end, dt=Matched(traj.step_sizes()),
                              implicit_terminal_death=True)
    v_pde = np.asarray(traj.v)
    v_disc = disc.series(-1)
    if v_disc.size != v_pde.size:
        logger.warning(f"compartment run has {v_disc.size} samples, transport run {v_pde.size}")
    m = min(v_disc.size, v_pde.size)
    deviation = float(np.max(np.abs(v_disc[:m] - v_pde[:m])) / max(np.max(np.abs(v_pde[:m])), 1e-300))
    results['equivalence_deviation'] = deviation
    results['equivalence_v_range'] = [float(np.min(v_pde)), float(np.max(v_pde))]
    checks['equivalence'] = bool(m == v_pde.size and deviation < equivalence_rtol)
    balance = max(balance, max(r.relative for r in disc.balance_residuals))

    matrix = disc.matrix()
    table = pd.DataFrame(matrix, columns=[f"u{i + 1}" for i in range(matrix.shape[1])])
    table.insert(0, 't', disc.times)
    files.append(write_frame(table, out, 'compartments.csv'))
    v_lines['compartments'] = (disc.times, v_disc)

    results['max_balance_residual'] = balance
    checks['balance'] = bool(balance < BALANCE_RTOL)

    bundle = PlotBundle('Compartments and refined grids', [
        LinePlot('v_overlay', 't (days)', 'mature cells v', v_lines),
        LinePlot('profiles', 'maturity x', 'density u', profile_lines, logy=True),
        LinePlot('metrics', 't (days)', 'profile stability metric', metric_lines, logy=True),
    ])
    return ScenarioOutcome(checks, results, files, bundle)


def _instability(config: ScenarioConfig, title: str) -> ScenarioOutcome:
    params = config.model()
    I = int(config.numerics.get('I', 100))
    t_end = float(config.numerics.get('t_end', 2000.0))
    grid = Grid.for_params(params, I)
    ss = compute_steady_state(params, grid)
    init = initial_pde(params, grid, config.initial, ss)
    traj = run(params, init, t_end, grid, snapshot_count=config.snapshot_count)
    out = config.output_dir

    arrays = traj.arrays()
    late = arrays['t'] >= 0.5 * t_end
    changes = sign_changes(arrays['v'][late])
    late_metric = arrays['metric'][late]
    metric_min = float(np.nanmin(late_metric)) if np.any(np.isfinite(late_metric)) else math.nan

    results = {
        'mu': params.mu,
        'steady': ss.to_dict(),
        'steps': traj.steps,
        'sign_changes_late': changes,
        'metric_min_late': metric_min,
        'final_metric': traj.metric[-1],
        'max_balance_residual': _balance(traj),
    }
    if config.options.get('characteristic', True):
        results['characteristic'] = characteristic_root(params, ss, grid)
    checks = {'balance': bool(_balance(traj) < BALANCE_RTOL)}
    options = config.options
    if 'min_sign_changes' in options:
        checks['oscillation'] = bool(changes >= int(options['min_sign_changes']))
    if 'metric_floor' in options:
        checks['metric_floor'] = bool(metric_min >= float(options['metric_floor']))

    files = [write_series(traj, out)]
    files.extend(write_profiles(traj, out, config.outputs.get('profiles', 'final')))
    return ScenarioOutcome(checks, results, files, PlotBundle(title, _series_plots(traj)))


@SCENARIOS.register('fig23-instab', "Oscillations with a proliferation jump and true-data maturation",
                    preset='fig23')
def fig23_instab(config: ScenarioConfig) -> ScenarioOutcome:
    return _instability(config, 'Proliferation jump')


@SCENARIOS.register('fig45-instab', "Oscillations with constant proliferation and g = 1",
                    preset='fig45')
def fig45_instab(config: ScenarioConfig) -> ScenarioOutcome:
    return _instability(config, 'Constant proliferation, g = 1')


@SCENARIOS.register('extinction', "Decay of every population when alpha(0) < 0", preset='extinction')
def extinction(config: ScenarioConfig) -> ScenarioOutcome:
    params = config.model()
    I = int(config.numerics.get('I', 100))
    t_end = float(config.numerics.get('t_end', 5.0))
    grid = Grid.for_params(params, I)
    init = initial_pde(params, grid, config.initial)
    traj = run(params, init, t_end, grid, snapshot_count=config.snapshot_count)
    options = config.options

    arrays = traj.arrays()
    t, w, v = arrays['t'], arrays['w'], arrays['v']
    alpha0 = params.feedback.alpha_zero
    fraction = float(options.get('fit_fraction', 0.25))
    rate = fit_decay_rate(t, w, t_end * (1.0 - fraction))
    rtol = float(options.get('rate_rtol', 0.05))

    late = t >= 0.5 * t_end
    late_snapshots = [s for s in traj.snapshots if s.t >= 0.5 * t_end]
    u_mass = [float(np.sum(s.u[1:])) * grid.dx for s in late_snapshots]
    monotone = {
        'w': is_nonincreasing(w[late]),
        'u': is_nonincreasing(u_mass),
        'v': is_nonincreasing(v[late]),
    }

    gamma, beta = extinction_weights(params, grid)
    functional = [extinction_functional(s, grid, gamma, beta) for s in traj.snapshots]

    results = {
        'alpha_zero': alpha0,
        'fitted_rate': rate,
        'rate_error': abs(rate - alpha0) / abs(alpha0),
        'monotone_late': monotone,
        'functional_weights': {'gamma': gamma, 'beta': beta},
        'functional_monotone': is_nonincreasing(functional),
        'max_balance_residual': _balance(traj),
        'steps': traj.steps,
    }
    checks = {
        'decay_rate': bool(abs(rate - alpha0) <= rtol * abs(alpha0)),
        'monotone': all(monotone.values()),
        'balance': bool(_balance(traj) < BALANCE_RTOL),
    }
    files = [write_series(traj, config.output_dir)]
    files.extend(write_profiles(traj, config.output_dir, config.outputs.get('profiles', 'final')))
    plots = _series_plots(traj)
    plots.append(LinePlot('functional', 't (days)', 'extinction functional',
                          {'functional': ([s.t for s in traj.snapshots], functional)}, logy=True))
    return ScenarioOutcome(checks, results, files, PlotBundle('Extinction', plots))


@SCENARIOS.register('persistence', "Positive solutions and certified a priori bounds when alpha(0) > 0",
                    preset='persistence')
def persistence(config: ScenarioConfig) -> ScenarioOutcome:
    params = config.model()
    I = int(config.numerics.get('I', 50))
    t_end = float(config.numerics.get('t_end', 300.0))
    grid = Grid.for_params(params, I)
    init = initial_pde(params, grid, config.initial)
    cert = apriori_bounds(params, init, grid)
    traj = run(params, init, t_end, grid, snapshot_count=config.snapshot_count)
    violations = check_bounds(traj, cert, float(config.options.get('bounds_rtol', 1e-12)))

    arrays = traj.arrays()
    late = arrays['t'] >= 0.5 * t_end
    min_w = float(np.min(arrays['w'][late]))
    min_v = float(np.min(arrays['v'][late]))
    results = {
        'certificate': cert.to_dict(),
        'violations': [item.to_dict() for item in violations[:20]],
        'violation_count': len(violations),
        'min_w_late': min_w,
        'min_v_late': min_v,
        'max_balance_residual': _balance(traj),
        'steps': traj.steps,
    }
    checks = {
        'persistence': bool(min_w > 0 and min_v > 0),
        'bounds': not violations,
        'balance': bool(_balance(traj) < BALANCE_RTOL),
    }
    files = [write_series(traj, config.output_dir)]
    files.extend(write_profiles(traj, config.output_dir, config.outputs.get('profiles', 'final')))
    return ScenarioOutcome(checks, results, files, PlotBundle('Persistence', _series_plots(traj)))


def _default_hopf_sweep() -> List[float]:
    sweep = np.linspace(1.05, 14.0, 38)
    anchors = [1.1, 1.3, 1.5, 2 * math.pi + 1.6]
    return sorted(set(np.round(sweep, 6).tolist()) | set(anchors))


@SCENARIOS.register('hopf-scan', "Hopf branches of the delay form over A = tau v_bar |alpha'|")
def hopf_scan(config: ScenarioConfig) -> ScenarioOutcome:
    options = config.options
    tau = float(options.get('tau', 1.0))
    v_bar = float(options.get('v_bar', 1.0))
    A_values = [float(A) for A in options.get('A_values', _default_hopf_sweep())]

    points, extra, omitted = [], [], []
    for A in A_values:
        alpha_abs = A / (tau * v_bar)
        found = hopf_simple(tau, v_bar, alpha_abs)
        points.extend(found)
        extra.extend({'A': A} for _ in found)
        k_max = max(0, math.floor((A - math.pi / 2) / (2 * math.pi)))
        for k in range(k_max + 1):
            reason = omitted_branch_reason(A, k)
            if reason is not None and A > 1:
                omitted.append({'A': A, 'branch': k, 'reason': reason})

    def in_branch(point):
        lo, hi = branch_interval(point.branch)
        return lo < tau * point.omega <= hi

    checks = {
        'residual': all(p.residual < HOPF_RTOL for p in points),
        'branch_interval': all(in_branch(p) for p in points),
        'mu_positive': all(p.mu > 0 for p in points),
    }
    results = {'tau': tau, 'v_bar': v_bar, 'points': len(points), 'omitted': omitted}
    files = [write_hopf(points, config.output_dir, extra)]

    lines = {}
    for branch in sorted({p.branch for p in points}):
        rows = [(e['A'], p.mu) for e, p in zip(extra, points) if p.branch == branch]
        lines[f"branch {branch}"] = ([r[0] for r in rows], [r[1] for r in rows])
    bundle = PlotBundle('Hopf branches', [LinePlot('hopf_mu', 'A', 'mu at crossing', lines)])
    return ScenarioOutcome(checks, results, files, bundle)


@SCENARIOS.register('ddecheck', "Rightmost roots of the delay form for mu = tau = 1")
def ddecheck(config: ScenarioConfig) -> ScenarioOutcome:
    options = config.options
    mu = float(options.get('mu', 1.0))
    tau = float(options.get('tau', 1.0))
    A_values = [float(A) for A in options.get('A_values', [-1.0, -2.0])]
    box = tuple(float(b) for b in options.get('box', [-5.0, 5.0, -50.0, 50.0]))
    expect = {float(k): v for k, v in options.get('expect', {'-1': 'stable', '-2': 'unstable'}).items()}

    def solve(A):
        return rightmost_root(DelayProblem(mu, tau, A), box)

    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        reports = list(pool.map(solve, A_values))

    checks = {'residual': all(r.residual < ROOT_RTOL for r in reports)}
    cases = {}
    for A, report in zip(A_values, reports):
        cases[f"{A:g}"] = report.to_dict()
        wanted = expect.get(A)
        if wanted == 'stable':
            checks[f"stable_A={A:g}"] = bool(report.root.real < 0 and report.rhp_count == 0)
        elif wanted == 'unstable':
            checks[f"unstable_A={A:g}"] = bool(report.rhp_count >= 1)
    results = {'mu': mu, 'tau': tau, 'box': list(box), 'cases': cases}
    files = [write_roots(reports, config.output_dir, [{'A': A} for A in A_values])]
    return ScenarioOutcome(checks, results, files)


@SCENARIOS.register('heaviside-hopf', "Threshold proliferation jump putting a root on the imaginary axis")
def heaviside_scenario(config: ScenarioConfig) -> ScenarioOutcome:
    options = config.options
    a_w = float(options.get('a_w', 0.75))
    B = float(options.get('B', 50.0))
    p_w = float(options.get('p_w', 30.0))
    omega = float(options.get('omega', 30.0))
    omega_out = float(options.get('omega_out_of_range', 800.0))

    result = heaviside_hopf(a_w, B, p_w, omega)
    beyond = heaviside_hopf(a_w, B, p_w, omega_out)
    results = {'out_of_range_example': {'omega': omega_out,
                                        'out_of_range': isinstance(beyond, OutOfRange)}}
    if isinstance(result, OutOfRange):
        results['reason'] = result.reason
        return ScenarioOutcome({'in_range': False}, results)

    scan_range = tuple(options.get('scan_range', [0.5 * omega, 2.0 * omega]))
    crossings = imaginary_crossing_scan(result.problem(), scan_range,
                                        int(options.get('scan_steps', 2000)))
    bracketed = any(c.lo <= omega <= c.hi for c in crossings)
    results.update({
        'construction': result.to_dict(),
        'crossings': [c.to_dict() for c in crossings],
    })
    checks = {
        'in_range': True,
        'residual': bool(result.residual < HOPF_RTOL),
        'scan_bracket': bool(bracketed),
        'beyond_threshold': isinstance(beyond, OutOfRange),
    }
    frame = pd.DataFrame([c.to_dict() for c in crossings], columns=['lo', 'hi', 'omega', 'residual'])
    files = [write_frame(frame, config.output_dir, 'crossings.csv')]
    return ScenarioOutcome(checks, results, files)
