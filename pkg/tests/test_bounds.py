import numpy as np
import pytest

from celldiff.core.errors import CertificateUnavailable
from celldiff.models.bounds import Violation, apriori_bounds, check_bounds
from celldiff.models.common import BalanceResidual, Grid
from celldiff.models.transport import PdeState, PdeTrajectory, initial_state, run


@pytest.fixture
def certified(persistence_model):
    grid = Grid.for_params(persistence_model, 50)
    init = initial_state(persistence_model, grid, 1e6, 1e6, lambda x: 1e6 * np.exp(0.5 * x))
    return grid, init, apriori_bounds(persistence_model, init, grid)


def test_certificate_constants(persistence_model, certified):
    grid, init, cert = certified
    assert cert.t_valid == pytest.approx(persistence_model.length / persistence_model.g_minus)
    assert cert.M > 0
    assert cert.M1 == cert.M3 == pytest.approx(np.exp(cert.M * persistence_model.length))
    assert 0 < cert.gamma <= 0.5
    assert cert.M2 >= init.w / init.v
    assert set(cert.to_dict()) >= {'M', 'M1', 'M2', 'M3', 'M4', 'gamma', 't_valid'}


def test_certificate_needs_positive_profile(persistence_model):
    grid = Grid.for_params(persistence_model, 10)
    init = initial_state(persistence_model, grid, 1.0, 1.0, np.zeros(11))
    with pytest.raises(CertificateUnavailable):
        apriori_bounds(persistence_model, init, grid)


def _trajectory(grid, states):
    traj = PdeTrajectory(grid=grid)
    for state in states:
        traj.record(state, 0.0, BalanceResidual(0.0, 1.0), 0.0)
        traj.snapshots.append(state)
    return traj


def test_check_bounds_reports_violations(certified):
    grid, init, cert = certified
    late = cert.t_valid + 1.0
    good = PdeState(init.w, init.u, init.v, late)
    assert check_bounds(_trajectory(grid, [good]), cert) == []

    huge_w = cert.M1 * float(np.max(init.u)) * 10
    bad = PdeState(huge_w, init.u, init.v, late)
    early = PdeState(huge_w, init.u, init.v, 0.5 * cert.t_valid)
    found = check_bounds(_trajectory(grid, [early, bad]), cert)
    kinds = {v.kind for v in found}
    assert 'w<=M1*u' in kinds
    assert all(v.t == late for v in found)
    assert all(v.margin > 0 for v in found)


def test_violation_margin():
    assert Violation('w<=M2*v', 1.0, 3.0, 2.0).margin == pytest.approx(0.5)


def test_mature_bound_covers_the_initial_wave(persistence_model):
    params = persistence_model
    grid = Grid.for_params(params, 50)
    # few stem and mature cells, a large maturing population about to exit
    init = initial_state(params, grid, 1.0, 1.0, np.full(51, 1e6))
    cert = apriori_bounds(params, init, grid)
    assert cert.u_transient >= 1e6
    assert cert.v_transient >= params.epsilon * params.g_plus * 1e6 / params.mu
    w_low = np.exp(params.feedback.alpha_infinity * cert.t_valid)
    assert cert.M4 >= (1 - 1e-12) * cert.v_transient / w_low ** cert.gamma

    traj = run(params, init, cert.t_valid + 2.0, grid, snapshot_count=20)
    assert max(traj.v) > init.v * 1e3
    assert not [v for v in check_bounds(traj, cert) if v.kind == 'v<=M4*w^gamma']
