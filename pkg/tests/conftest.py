import os
import sys

import pytest

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from celldiff.core.coefficients import CoefficientTable
from celldiff.core.params import ContinuousModelParams, DiscreteModelParams
from celldiff.data.loader import build_discrete, build_model, load_preset


def constant_model(a_w=0.75, p_w=6.0, mu=0.6925, k=1.28e-9, g_one=False, **changes):
    """Model on [0, 1] with constant a and p, optionally with g = 1"""
    data = {
        'x_origin': 0.0,
        'x_star': 1.0,
        'k': k,
        'mu': mu,
        'a': CoefficientTable.constant(a_w, 0.0, 1.0).to_dict(),
        'p': CoefficientTable.constant(p_w, 0.0, 1.0).to_dict(),
    }
    if g_one:
        data['g_mode'] = 'custom_tabulated'
        data['custom_g'] = {'x_nodes': [0.0, 1.0], 'v_nodes': [0.0, 1e13],
                            'values': [[1.0, 1.0], [1.0, 1.0]]}
    data.update(changes)
    return ContinuousModelParams.from_dict(data)


@pytest.fixture
def g_one_model() -> ContinuousModelParams:
    return constant_model(g_one=True)


@pytest.fixture
def persistence_model() -> ContinuousModelParams:
    return build_model(load_preset('persistence')['model'])


@pytest.fixture
def extinction_model() -> ContinuousModelParams:
    return build_model(load_preset('extinction')['model'])


@pytest.fixture
def table1() -> DiscreteModelParams:
    return build_discrete(load_preset('table1')['discrete'])
