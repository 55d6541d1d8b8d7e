import cmath

import numpy as np
import pytest

from celldiff.analysis.characteristic import (
    DelayProblem, HeavisideExcess, ReducedQuadraticProblem, char_eval, delay_problem,
    gconst_problem, general_problem, quadratic_roots, reduced_quadratic, true_data_problem,
)
from celldiff.core.errors import ConfigurationError, DomainError
from celldiff.models.common import Grid
from celldiff.models.steady_state import compute_steady_state

from conftest import constant_model


def test_delay_form_evaluation():
    problem = DelayProblem(mu=1.0, tau=2.0, A=-1.5)
    lam = 0.3 + 0.7j
    expected = lam + 1.0 + 1.5 * cmath.exp(-2.0 * lam) / lam
    assert char_eval(problem, lam) == pytest.approx(expected)
    assert problem.G(lam) == pytest.approx(lam * expected)
    values = problem.F(np.array([1j, 2j]))
    assert values.shape == (2,)
    with pytest.raises(DomainError):
        problem.F(0.0)
    with pytest.raises(ConfigurationError):
        DelayProblem(1.0, 0.0, 1.0)


def test_quadratic_roots():
    r1, r2 = quadratic_roots(1.0, 4.0)
    for r in (r1, r2):
        assert abs(r * r + r + 4.0) < 1e-12
    with pytest.raises(DomainError):
        quadratic_roots(-1.0, 4.0)


def test_reduced_quadratic_without_excess_has_quadratic_roots():
    params = constant_model()
    grid = Grid.for_params(params, 50)
    problem = reduced_quadratic(params, grid)
    assert problem.excess is None
    assert problem.C == pytest.approx(params.mu / 1.5)
    for root in quadratic_roots(problem.C, problem.D):
        assert abs(problem.G(root)) < 1e-12


def test_delay_form_from_unit_maturation_rate(g_one_model):
    grid = Grid.for_params(g_one_model, 50)
    ss = compute_steady_state(g_one_model, grid)
    problem = delay_problem(g_one_model, ss, grid)
    assert problem.tau == pytest.approx(1.0)
    # tau v_bar |alpha'(v_bar)| = 2 for a_w = 0.75
    assert problem.A == pytest.approx(-2.0 * g_one_model.mu, rel=1e-10)


def test_true_data_form_needs_true_data_model(g_one_model, persistence_model):
    grid = Grid.for_params(g_one_model, 20)
    ss = compute_steady_state(g_one_model, grid)
    with pytest.raises(ConfigurationError):
        true_data_problem(g_one_model, ss, grid)

    grid = Grid.for_params(persistence_model, 20)
    ss = compute_steady_state(persistence_model, grid)
    problem = true_data_problem(persistence_model, ss, grid)
    assert problem.to_dict()['variant'] == problem.variant
    assert np.isfinite(problem.F(0.5 + 0.5j))


def test_profile_forms_need_positive_steady_state(extinction_model):
    grid = Grid.for_params(extinction_model, 20)
    ss = compute_steady_state(extinction_model, grid)
    with pytest.raises(DomainError):
        true_data_problem(extinction_model, ss, grid)


def test_gconst_needs_unit_epsilon():
    params = constant_model(epsilon=0.5)
    with pytest.raises(ConfigurationError):
        gconst_problem(params, Grid.for_params(params, 20))


def test_gconst_constant_p_matches_closed_integral():
    params = constant_model()
    grid = Grid.for_params(params, 200)
    problem = gconst_problem(params, grid)
    lam = 1.0 + 2.0j
    L, p_w = problem.length, problem.p_w
    integral = p_w / lam * (1 - cmath.exp(-lam * L / p_w))
    expected_R = lam + problem.C + problem.C * (2 * problem.a_w - 1) * integral
    expected = expected_R + problem.D * cmath.exp(-lam * L / p_w) / lam
    assert problem.F(lam) == pytest.approx(expected, rel=1e-8)


def test_heaviside_excess_integral():
    excess = HeavisideExcess(B=50.0, delta=2.0)
    assert excess.weighted_integral(np.array([0.0]))[0] == pytest.approx(100.0)
    kappa = np.array([0.5 + 0.25j])
    expected = 50.0 * (1 - np.exp(-kappa * 2.0)) / kappa
    assert excess.weighted_integral(kappa)[0] == pytest.approx(expected[0])


def test_reduced_form_needs_self_renewal_above_half():
    with pytest.raises(ConfigurationError):
        ReducedQuadraticProblem.from_model(1.0, 0.5, 30.0, 1.0)


def _sample_lambdas(seed, size=20):
    rng = np.random.default_rng(seed)
    return rng.uniform(-1.0, 1.0, size) + 1j * rng.uniform(0.5, 10.0, size)


def _assert_close(left, right, tol):
    gap = np.abs(left - right)
    assert np.all(gap <= tol * (1.0 + np.abs(right))), gap.max()


def test_general_form_matches_delay_form_for_unit_rate(g_one_model):
    grid = Grid.for_params(g_one_model, 50)
    ss = compute_steady_state(g_one_model, grid)
    general = general_problem(g_one_model, ss, grid)
    assert np.all(general.h == 0)
    lam = _sample_lambdas(11)
    _assert_close(general.F(lam), delay_problem(g_one_model, ss, grid).F(lam), 1e-9)


def test_general_form_matches_true_data_form():
    params = constant_model()
    grid = Grid.for_params(params, 200)
    ss = compute_steady_state(params, grid)
    lam = _sample_lambdas(12)
    _assert_close(general_problem(params, ss, grid).F(lam),
                  true_data_problem(params, ss, grid).F(lam), 1e-5)


def test_constant_coefficients_reduce_to_the_quadratic():
    params = constant_model()
    grid = Grid.for_params(params, 200)
    ss = compute_steady_state(params, grid)
    lam = _sample_lambdas(13)
    true_data = true_data_problem(params, ss, grid).F(lam)
    gconst = gconst_problem(params, grid).F(lam)
    reduced = reduced_quadratic(params, grid)
    _assert_close(true_data, gconst, 1e-6)
    _assert_close(gconst, reduced.F(lam), 1e-6)
    _assert_close(reduced.F(lam), lam + reduced.C + reduced.D / lam, 1e-12)


def test_conjugate_symmetry(g_one_model):
    params = constant_model()
    grid = Grid.for_params(params, 100)
    ss = compute_steady_state(params, grid)
    unit_grid = Grid.for_params(g_one_model, 50)
    unit_ss = compute_steady_state(g_one_model, unit_grid)
    problems = [
        delay_problem(g_one_model, unit_ss, unit_grid),
        general_problem(params, ss, grid),
        true_data_problem(params, ss, grid),
        gconst_problem(params, grid),
        reduced_quadratic(params, grid),
        ReducedQuadraticProblem(1.0, 4.0, 1.0, 2.0, HeavisideExcess(B=3.0, delta=0.5)),
    ]
    lam = _sample_lambdas(14)
    for problem in problems:
        values = problem.F(lam)
        mirrored = problem.F(np.conj(lam))
        assert mirrored == pytest.approx(np.conj(values), rel=1e-12, abs=1e-12), problem.variant


def test_quadratic_roots_stable_for_positive_coefficients():
    rng = np.random.default_rng(7)
    C = 10.0 ** rng.uniform(-3.0, 2.0, 1000)
    D = 10.0 ** rng.uniform(-3.0, 2.0, 1000)
    for c, d in zip(C, D):
        r1, r2 = quadratic_roots(c, d)
        assert r1.real < 0 and r2.real < 0
        assert abs(r1 * r1 + c * r1 + d) <= 1e-9 * (c * c + d)
