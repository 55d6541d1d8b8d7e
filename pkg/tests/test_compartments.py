import numpy as np
import pytest

from celldiff.core.errors import DomainError
from celldiff.models.compartments import (
    CompartmentState, Matched, default_dt, discrete_mass_balance_residual, discrete_rhs,
    integrate_discrete,
)


@pytest.fixture
def start(table1):
    return CompartmentState(np.linspace(1e5, 1e8, table1.n))


def test_rhs_conserves_cells(table1, start):
    rhs = discrete_rhs(start, table1)
    u = start.u
    net = np.sum((np.array(table1.p) - np.array(table1.d[:-1])) * u[:-1]) - table1.d[-1] * u[-1]
    assert np.sum(rhs) == pytest.approx(net, rel=1e-12)
    assert discrete_mass_balance_residual(start, rhs, table1).within(1e-12)


def test_frozen_signal_changes_fluxes(table1, start):
    live = discrete_rhs(start, table1)
    frozen = discrete_rhs(start, table1, frozen_signal=1.0)
    assert not np.allclose(live, frozen)
    # stem cells with s = 1: (2a - 1) p u
    assert frozen[0] == pytest.approx((2 * table1.a[0] - 1) * table1.p[0] * start.u[0])


def test_integrate_stays_positive_and_balanced(table1, start):
    traj = integrate_discrete(table1, start, 20.0)
    assert traj.final.t == 20.0
    assert np.all(traj.matrix() >= 0)
    assert max(r.relative for r in traj.balance_residuals) < 1e-12
    assert traj.times == sorted(traj.times)
    assert traj.series(-1).shape == (len(traj.times),)


def test_matched_steps_are_consumed_in_order(table1, start):
    steps = [0.1, 0.2, 0.05, 0.15]
    traj = integrate_discrete(table1, start, 10.0, dt=Matched(steps))
    assert traj.dts[1:] == steps
    assert traj.times[-1] == pytest.approx(0.5)


def test_matched_last_step_clipped_to_horizon(table1, start):
    traj = integrate_discrete(table1, start, 0.25, dt=Matched([0.1, 0.1, 0.1]))
    assert traj.final.t == 0.25
    assert traj.dts[-1] == pytest.approx(0.05)


def test_implicit_terminal_death_matches_closed_form(table1, start):
    dt = 0.1
    traj = integrate_discrete(table1, start, dt, dt=dt, implicit_terminal_death=True)
    rhs = discrete_rhs(start, table1)
    d_n = table1.d[-1]
    influx = rhs[-1] + d_n * start.u[-1]
    expected = (start.u[-1] + dt * influx) / (1 + dt * d_n)
    assert traj.final.u[-1] == pytest.approx(expected, rel=1e-14)


def test_input_validation(table1):
    with pytest.raises(DomainError):
        integrate_discrete(table1, CompartmentState(np.ones(3)), 1.0)
    with pytest.raises(DomainError):
        integrate_discrete(table1, CompartmentState(np.ones(table1.n)), 0.0)
    with pytest.raises(DomainError):
        Matched([])
    with pytest.raises(DomainError):
        Matched([0.1, -0.1])
    with pytest.raises(DomainError):
        CompartmentState(np.array([1.0, -1.0]))


def test_default_dt_positive(table1):
    assert 0 < default_dt(table1) < 1.0
