import logging
import math

import pytest

from celldiff.analysis.characteristic import DelayProblem, ReducedQuadraticProblem
from celldiff.analysis.hopf import (
    OutOfRange, branch_interval, heaviside_hopf, hopf_simple, imaginary_crossing_scan,
    omitted_branch_reason,
)
from celldiff.analysis.roots import (
    count_zeros, delay_right_bound, newton_polish, rhp_count, rightmost_root,
)
from celldiff.core.errors import DomainError

DDE_BOX = (-5.0, 5.0, -50.0, 50.0)


@pytest.fixture
def quadratic():
    # G = lam^2 + lam + 4, zeros -1/2 +- i sqrt(15)/2
    return ReducedQuadraticProblem(C=1.0, D=4.0, p_w=1.0, length=1.0)


def test_count_zeros(quadratic):
    assert count_zeros(quadratic, (-2.0, 1.0, -3.0, 3.0))[0] == 2
    assert count_zeros(quadratic, (-2.0, 1.0, 0.5, 3.0))[0] == 1
    assert count_zeros(quadratic, (0.0, 1.0, -3.0, 3.0))[0] == 0
    with pytest.raises(DomainError):
        count_zeros(quadratic, (1.0, 0.0, -1.0, 1.0))


def test_rightmost_root_of_quadratic(quadratic):
    report = rightmost_root(quadratic, (-2.0, 1.1, -3.0, 3.0))
    assert report.root.real == pytest.approx(-0.5, abs=1e-10)
    assert report.root.imag == pytest.approx(math.sqrt(15) / 2, abs=1e-10)
    assert report.rhp_count == 0
    assert report.box_count == 2
    assert report.residual < 1e-10


def test_newton_polish(quadratic):
    root, residual = newton_polish(quadratic, -0.4 + 1.9j)
    assert abs(root - complex(-0.5, math.sqrt(15) / 2)) < 1e-10
    assert residual < 1e-10


def test_delay_form_stable_for_small_gain():
    report = rightmost_root(DelayProblem(1.0, 1.0, -1.0), DDE_BOX)
    assert report.root.real < 0
    assert report.rhp_count == 0
    assert report.residual < 1e-10


def test_delay_form_unstable_for_large_gain():
    report = rightmost_root(DelayProblem(1.0, 1.0, -2.0), DDE_BOX)
    assert report.root.real > 0
    assert report.rhp_count >= 1
    assert report.residual < 1e-10
    assert report.root.real <= delay_right_bound(DelayProblem(1.0, 1.0, -2.0))


def test_no_hopf_crossing_below_unit_gain():
    assert hopf_simple(1.0, 1.0, 0.9) == []


@pytest.mark.parametrize('A', [1.1, 1.3, 1.5])
def test_hopf_branch_zero(A):
    points = hopf_simple(1.0, 1.0, A)
    assert len(points) == 1
    point = points[0]
    assert point.branch == 0
    x = point.omega
    assert 0 < x <= math.pi / 2
    assert x == pytest.approx(A * math.sin(x), abs=1e-12)
    assert point.mu == pytest.approx(point.omega ** 2 / (A * math.cos(x)))
    assert point.residual < 1e-8


def test_hopf_scales_with_delay():
    near = hopf_simple(1.0, 1.0, 1.3)[0]
    far = hopf_simple(2.0, 1.0, 0.65)[0]
    assert far.omega == pytest.approx(near.omega / 2)


def test_hopf_higher_branch_only(caplog):
    A = 2 * math.pi + 1.6
    with caplog.at_level(logging.WARNING):
        points = hopf_simple(1.0, 1.0, A)
    assert [p.branch for p in points] == [1]
    lo, hi = branch_interval(1)
    assert lo < points[0].omega <= hi
    assert points[0].mu > 0
    assert 'branch 0 omitted' in caplog.text
    assert omitted_branch_reason(A, 0) is not None
    assert omitted_branch_reason(A, 1) is None
    assert omitted_branch_reason(7.0, 1) is not None


def test_hopf_input_validation():
    with pytest.raises(DomainError):
        hopf_simple(0.0, 1.0, 1.0)


def test_heaviside_crossing_values():
    result = heaviside_hopf(0.75, 50.0, 30.0, 30.0)
    assert result.theta == pytest.approx(math.pi + math.asin(0.04))
    assert result.delta == pytest.approx(3.1816, abs=1e-4)
    assert result.mu == pytest.approx(0.8914, abs=1e-4)
    assert result.residual < 1e-8


def test_heaviside_scan_brackets_the_crossing():
    result = heaviside_hopf(0.75, 50.0, 30.0, 30.0)
    crossings = imaginary_crossing_scan(result.problem(), (1.0, 60.0))
    assert any(c.lo <= 30.0 <= c.hi for c in crossings)
    assert all(c.residual <= 1e-6 * (1 + c.omega) for c in crossings)


def test_heaviside_out_of_range():
    outcome = heaviside_hopf(0.75, 50.0, 30.0, 800.0)
    assert isinstance(outcome, OutOfRange)
    assert outcome.c > 1
    assert 'exceeds' in outcome.reason or '>' in outcome.reason
    with pytest.raises(DomainError):
        heaviside_hopf(0.5, 50.0, 30.0, 30.0)


@pytest.mark.parametrize('shift', [1e-2, 1e-3])
def test_unstable_just_past_the_crossing(shift):
    point = hopf_simple(1.0, 1.0, 1.3)[0]
    mu = point.mu - shift
    report = rightmost_root(DelayProblem(mu, 1.0, -1.3 * mu), DDE_BOX)
    assert 0 < report.root.real < 1e-2
    assert report.root.imag == pytest.approx(point.omega, rel=1e-2)
    assert report.rhp_count >= 1
    assert report.residual < 1e-10


def test_rhp_count_from_the_imaginary_axis(quadratic):
    # G = lam^2 - 2e-4 lam + 4 has both zeros at Re = 1e-4
    near_axis = ReducedQuadraticProblem(C=-2e-4, D=4.0, p_w=1.0, length=1.0)
    assert rhp_count(near_axis, (-2.0, 1.0, -3.0, 3.0)) == 2
    assert rhp_count(quadratic, (-2.0, 1.0, -3.0, 3.0)) == 0


@pytest.mark.parametrize('A', [-1.3, -1.3 * 3.351588650107063])
def test_cut_through_a_root_is_moved(A):
    report = rightmost_root(DelayProblem(3.351588650107063, 1.0, A), DDE_BOX)
    assert report.residual < 1e-10
    assert (report.rhp_count > 0) == (report.root.real > 0)
    # the larger gain sits just below the A = 1.3 crossing, Re is about 1e-4
    if A < -1.3:
        assert 0 < report.root.real < 1e-2


def test_crossing_below_resolution_is_omitted(caplog):
    A = 1.0 + 1e-13
    with caplog.at_level(logging.WARNING):
        assert hopf_simple(1.0, 1.0, A) == []
    assert 'branch 0 omitted' in caplog.text
    assert omitted_branch_reason(A, 0) is not None
