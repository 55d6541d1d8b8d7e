import math

import numpy as np
import pytest

from celldiff.core.coefficients import (
    CoefficientTable, GenericAlphaFeedback, TrueDataFeedback, alpha, feedback_from_dict, signal,
)
from celldiff.core.errors import ConfigurationError, DomainError


def test_table_hits_node_values_exactly():
    table = CoefficientTable((1.0, 2.0, 3.0), (0.77, 0.7689, 0.7359))
    assert table(2.0) == 0.7689
    assert table(2.5) == pytest.approx(0.5 * (0.7689 + 0.7359))
    assert isinstance(table(2.0), float)
    assert table(np.array([1.0, 3.0])).tolist() == [0.77, 0.7359]


def test_table_rejects_points_outside_its_nodes():
    table = CoefficientTable.constant(6.0, 0.0, 1.0)
    with pytest.raises(DomainError):
        table(1.5)
    with pytest.raises(DomainError):
        table(float('nan'))


def test_table_validation():
    with pytest.raises(ConfigurationError):
        CoefficientTable((0.0,), (1.0,))
    with pytest.raises(ConfigurationError):
        CoefficientTable((0.0, 0.0), (1.0, 1.0))
    with pytest.raises(ConfigurationError):
        CoefficientTable((0.0, 1.0), (1.0,))


def test_step_table_jumps_at_onset():
    table = CoefficientTable.step(0.0, 50.0, 30.0, 50.0, 20.0)
    assert table(0.0) == 30.0
    assert table(19.9) == 30.0
    assert table(20.0) == 80.0
    assert table(50.0) == 80.0
    assert table.maximum == 80.0


def test_signal():
    assert signal(0.0, 1e-9) == 1.0
    assert signal(1e9, 1e-9) == pytest.approx(0.5)
    with pytest.raises(DomainError):
        signal(-1.0, 1e-9)
    with pytest.raises(DomainError):
        signal(1.0, 0.0)


def test_true_data_feedback_values():
    law = TrueDataFeedback(0.75, 6.0, 1.28e-9)
    assert law.alpha_zero == pytest.approx(3.0)
    assert law.alpha_infinity == -6.0
    root = law.closed_form_root()
    assert root == pytest.approx(0.5 / 1.28e-9)
    assert abs(law.alpha(root)) < 1e-12
    h = 1e-3 * root
    numeric = (law.alpha(root + h) - law.alpha(root - h)) / (2 * h)
    assert law.alpha_prime(root) == pytest.approx(numeric, rel=1e-5)


def test_true_data_feedback_without_positive_root():
    law = TrueDataFeedback(0.4, 30.0, 1.28e-9)
    assert law.alpha_zero == pytest.approx(-6.0)
    assert law.closed_form_root() is None


def test_alpha_rejects_negative_counts():
    law = TrueDataFeedback(0.75, 6.0, 1.0)
    with pytest.raises(DomainError):
        alpha(-1.0, law)


def test_generic_alpha_must_decrease():
    rising = CoefficientTable((0.0, 10.0), (-1.0, 1.0))
    with pytest.raises(ConfigurationError):
        GenericAlphaFeedback.from_table(rising)
    law = GenericAlphaFeedback.from_table(CoefficientTable((0.0, 10.0), (2.0, -3.0)), p_w=4.0)
    assert law.alpha_zero == 2.0
    assert law.alpha_infinity == -3.0
    assert law.alpha_prime(5.0) == pytest.approx(-0.5)
    assert law.differentiation_rate(0.0) == pytest.approx(2.0)


def test_feedback_from_dict():
    law = feedback_from_dict({'variant': 'true_data', 'a_w': 0.75, 'p_w': 6.0, 'k': 1e-9})
    assert isinstance(law, TrueDataFeedback)
    with pytest.raises(ConfigurationError):
        feedback_from_dict({'variant': 'unknown'})


def test_differentiation_rate_matches_maturation_rate_at_origin():
    law = TrueDataFeedback(0.75, 6.0, 1e-9)
    v = 3e8
    s = 1.0 / (1.0 + 1e-9 * v)
    assert law.differentiation_rate(v) == pytest.approx(2 * (1 - 0.75 * s) * 6.0)
    assert math.isclose(law.differentiation_rate(0.0), 3.0)
