import numpy as np
import pytest

from celldiff.core.coefficients import CoefficientTable
from celldiff.core.errors import ConfigurationError, DomainError
from celldiff.core.params import (
    BoundaryMode, ContinuousModelParams, DiscreteModelParams, GMode, discrete_to_continuous, g_eval,
)

from conftest import constant_model


def test_true_data_maturation_rate(persistence_model):
    params = persistence_model
    assert params.g_mode is GMode.FROM_TRUE_DATA
    assert params.g(0.0, 0.0) == pytest.approx(2 * (1 - 0.75) * 6.0)
    assert params.g_minus == pytest.approx(3.0)
    assert params.g_minus <= params.g_plus <= 12.0
    assert g_eval(np.array([0.0, 1.0]), 0.0, params).shape == (2,)


def test_custom_maturation_rate(g_one_model):
    assert np.all(g_one_model.g(np.linspace(0, 1, 5), 1e8) == 1.0)
    assert np.all(g_one_model.dg_dv(np.linspace(0, 1, 5), 1e8) == 0.0)
    assert g_one_model.g_minus == g_one_model.g_plus == 1.0


def test_dg_dv_true_data(persistence_model):
    params = persistence_model
    v = 4e8
    h = 1e4
    numeric = (params.g(0.5, v + h) - params.g(0.5, v - h)) / (2 * h)
    assert float(params.dg_dv(0.5, v)) == pytest.approx(float(numeric), rel=1e-6)


def test_params_validation():
    with pytest.raises(ConfigurationError):
        constant_model(mu=0.0)
    with pytest.raises(ConfigurationError):
        constant_model(epsilon=1.5)
    with pytest.raises(ConfigurationError):
        constant_model(x_star=2.0)
    with pytest.raises(ConfigurationError):
        constant_model(g_mode='custom_tabulated')
    with pytest.raises(ConfigurationError):
        ContinuousModelParams.from_dict({'x_star': 1.0, 'k': 1.0})


def test_x_outside_interval(g_one_model):
    with pytest.raises(DomainError):
        g_one_model.g(1.5, 0.0)


def test_to_dict_restores_parameters(persistence_model):
    again = ContinuousModelParams.from_dict(persistence_model.to_dict())
    assert again.mu == persistence_model.mu
    assert again.a == persistence_model.a
    assert again.boundary_mode is BoundaryMode.SIMPLIFIED
    assert again.v_max == persistence_model.v_max


def test_discrete_params_validation(table1):
    assert table1.n == 8
    assert not table1.has_interior_death
    with pytest.raises(ConfigurationError):
        DiscreteModelParams(3, (0.5,), (1.0, 1.0), (0.0, 0.0, 1.0), 1e-9)
    with pytest.raises(ConfigurationError):
        DiscreteModelParams(3, (0.5, 0.5), (1.0, 1.0), (0.0, 0.0, 0.0), 1e-9)


def test_discrete_to_continuous(table1):
    params = discrete_to_continuous(table1, 6)
    assert params.x_origin == 1.0
    assert params.x_star == 7.0
    assert params.mu == 0.6925
    assert params.a(1.0) == 0.77
    assert params.p(7.0) == 1.0
    assert params.a(1.5) == pytest.approx(0.5 * (0.77 + 0.7689))
    with pytest.raises(ConfigurationError):
        discrete_to_continuous(table1, 5)


def test_step_table_model():
    params = ContinuousModelParams(
        x_star=50.0, k=1.28e-9, mu=0.6925,
        a=CoefficientTable.constant(0.75, 0.0, 50.0),
        p=CoefficientTable.step(0.0, 50.0, 30.0, 50.0, 20.0),
    )
    assert params.p_w == 30.0
    assert params.a_w == 0.75
    assert params.length == 50.0
