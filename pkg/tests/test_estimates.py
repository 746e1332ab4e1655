import math

import numpy as np
import pytest

from balance_lab import (
    analytic_library,
    balance_sweep,
    dafermos_balance,
    holder_seminorm,
    lipschitz_along,
    lipschitz_sweep,
    oscillation_A,
    oscillation_survey,
    trace_characteristic,
)
from balance_lab.estimates import ConvexityError, GeometryError
from balance_lab.flux import builtin_flux


def test_uniform_source_balance_is_an_equality(uniform_source):
    gamma = trace_characteristic(uniform_source, 0.1, -0.2, 0.6)
    rep = dafermos_balance(uniform_source, gamma, 0.05, 0.1, 0.6)
    assert rep.lhs_plus == pytest.approx(0.05 * 0.5, abs=1e-12)
    assert rep.rhs_plus == pytest.approx(rep.lhs_plus, abs=1e-8)
    assert rep.lhs_minus == pytest.approx(rep.rhs_minus, abs=1e-8)
    assert rep.satisfied


def test_example_balance_inequalities(ex33):
    gamma = trace_characteristic(ex33, 0.0, 0.5, 0.2)
    rep = dafermos_balance(ex33, gamma, 0.05, 0.0, 0.2)
    assert rep.lhs_plus <= rep.rhs_plus + rep.quad_error_bound
    assert rep.lhs_minus >= rep.rhs_minus - rep.quad_error_bound


def test_balance_rejects_nonconvex_flux():
    fld2 = analytic_library("linear_decay", flux=builtin_flux("cubic", (-2, 2)))
    gamma = trace_characteristic(fld2, 0.0, 0.0, 0.5)
    with pytest.raises(ConvexityError):
        dafermos_balance(fld2, gamma, 0.2, 0.0, 0.5)


def test_balance_rejects_bands_outside(uniform_source):
    gamma = trace_characteristic(uniform_source, 0.0, 0.95, 0.2)
    with pytest.raises(GeometryError):
        dafermos_balance(uniform_source, gamma, 0.1, 0.0, 0.2)


def test_balance_sweep_all_satisfied(linear_decay):
    reps = balance_sweep(linear_decay, 20, seed=3)
    assert len(reps) == 20 and all(r.satisfied for r in reps)


def test_lipschitz_along_example(ex33):
    gamma = trace_characteristic(ex33, 0.0, 1.0, 0.5)
    assert lipschitz_along(ex33, gamma) == pytest.approx(1.0, abs=1e-6)


def test_lipschitz_sweep_bounded_by_source(uniform_source):
    L = lipschitz_sweep(uniform_source, 10, seed=0)
    assert L.max() <= 1.0 + 1e-9


def test_holder_example(ex33_unit):
    rep = holder_seminorm(ex33_unit, 0.0, 2)
    assert rep.empirical == pytest.approx(math.sqrt(2), rel=1e-2)
    assert rep.exponent_fit == pytest.approx(0.5, abs=0.02)
    assert rep.theoretical == pytest.approx(2.0, rel=1e-6)
    assert rep.theoretical_applicable is False or rep.empirical <= rep.theoretical


def test_holder_linear_field_exponent_one(linear_decay):
    rep = holder_seminorm(linear_decay, 0.5, 1)
    assert rep.exponent_fit == pytest.approx(1.0, abs=1e-6)
    assert rep.degenerate_source


def test_holder_window_outside():
    fld = analytic_library("linear_decay")
    with pytest.raises(GeometryError):
        holder_seminorm(fld, 0.0, 2, window=(-2, 0))


def test_oscillation_functional_values(ex33):
    assert oscillation_A(ex33, 0.0, 0.0, 2, 0.125) == pytest.approx(1.0, abs=1e-12)
    closed = math.sqrt(1 / 8) / (math.sqrt(3 / 8) + math.sqrt(1 / 2))
    assert oscillation_A(ex33, 0.0, 0.5, 2, 0.125) == pytest.approx(closed, abs=1e-9)


def test_oscillation_survey_monotone(ex33):
    tab = oscillation_survey(ex33, 500, [0.2, 0.1, 0.05], 0.5, 2, seed=4)
    assert np.all(np.diff(tab.fractions) <= 0)
    assert [d for d, _ in tab.rows()] == [0.2, 0.1, 0.05]


def test_survey_reproducible(ex33):
    a = oscillation_survey(ex33, 200, [0.1, 0.05], 0.5, 2, seed=9)
    b = oscillation_survey(ex33, 200, [0.1, 0.05], 0.5, 2, seed=9)
    np.testing.assert_array_equal(a.fractions, b.fractions)


def test_band_average_tends_to_change_along_curve(ex33):
    gamma = trace_characteristic(ex33, 0.0, 0.5, 0.2)
    du = float(ex33(0.2, gamma(0.2)) - ex33(0.0, gamma(0.0)))
    errs = [abs(dafermos_balance(ex33, gamma, h, 0.0, 0.2).lhs_plus / h - du) for h in (0.1, 0.05, 0.025, 0.0125)]
    assert all(b < a for a, b in zip(errs, errs[1:]))
    assert errs[-1] < 1e-3


def test_holder_constant_time_independent(ex33_unit):
    a = holder_seminorm(ex33_unit, 0.0, 2).empirical
    b = holder_seminorm(ex33_unit, 0.5, 2).empirical
    assert abs(a - b) <= 1e-12


def test_oscillation_monotone_in_delta_and_below_global(ex33_unit):
    glob = holder_seminorm(ex33_unit, 0.0, 2).empirical
    for x in (0.0, 0.3, -0.6):
        vals = [oscillation_A(ex33_unit, 0.0, x, 2, d) for d in (0.0125, 0.05, 0.1, 0.2)]
        assert all(b >= a for a, b in zip(vals, vals[1:]))
        assert vals[-1] <= glob * (1 + 1e-12)
