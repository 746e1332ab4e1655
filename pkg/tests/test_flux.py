import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from balance_lab.flux import (
    DegenerateFluxError,
    FluxModel,
    InflectionError,
    UnsupportedOrderError,
    builtin_flux,
    check_fprime_separation,
    convexity_ratio_q,
    inflection_zeros,
    min_order_at_point,
    nonlinearity_constant,
    pointwise_nonlinearity_constant,
)


@pytest.mark.parametrize("interval", [(-1, 1), (0, 3), (-10, -2), (-50, 50)])
def test_burgers_constant_is_one_half(interval):
    f = builtin_flux("burgers", interval)
    assert nonlinearity_constant(f, 2) == pytest.approx(0.5, abs=1e-6)


def test_cubic_cancels_on_symmetric_interval():
    assert nonlinearity_constant(builtin_flux("cubic", (-1, 1)), 3) <= 1e-3


def test_cubic_pointwise_constant_at_origin():
    assert pointwise_nonlinearity_constant(builtin_flux("cubic", (-1, 1)), 0.0, 3, 0.5) == pytest.approx(1.0, rel=1e-6)


def test_remainder_matches_definition():
    f = FluxModel.polynomial([0.3, -1.0, 0.25, 0.5], (-2, 2), 2)
    v, h = 0.7, -0.4
    direct = f.f(v + h) - f.f(v) - f.df(v) * h
    assert float(f.remainder(v, h)) == pytest.approx(direct, abs=1e-14)


def test_derivatives_second_order_consistent():
    f = FluxModel.polynomial([0.0, 1.0, -0.5, 0.2, 0.05], (-2, 2), 2)
    v = np.linspace(-1.5, 1.5, 7)
    errs = []
    for h in (1e-2, 5e-3):
        fd1 = (f.f(v + h) - f.f(v - h)) / (2 * h)
        fd2 = (f.df(v + h) - f.df(v - h)) / (2 * h)
        errs.append(max(np.abs(fd1 - f.df(v)).max(), np.abs(fd2 - f.d2f(v)).max()))
    assert errs[1] <= errs[0] / 3.5


def test_nested_intervals_give_monotone_constants():
    f = FluxModel.polynomial([0, 0, 1.0, 0.3], (-1, 1), 2)
    outer = nonlinearity_constant(f, 2, (-0.5, 0.5))
    inner = nonlinearity_constant(f, 2, (-0.25, 0.25))
    assert inner >= outer - 1e-12


def test_with_nonlinearity_constant_verifies():
    f = builtin_flux("burgers", (-1, 1)).with_nonlinearity_constant()
    assert f.c_ell == pytest.approx(0.5, abs=1e-6)
    assert f.verify_constant()


def test_min_order_at_point():
    assert min_order_at_point(builtin_flux("cubic"), 0.0) == (3, 1.0, False)
    assert min_order_at_point(builtin_flux("cubic"), 1.0)[:2] == (2, 3.0)
    assert min_order_at_point(builtin_flux("burgers"), 0.0)[:2] == (2, 0.5)


def test_min_order_needs_finite_differences_for_general_fluxes():
    f = FluxModel(np.sin, np.cos, lambda v: -np.sin(v), (-1.0, 1.0), 2)
    with pytest.raises(UnsupportedOrderError):
        min_order_at_point(f, 0.0)
    order = min_order_at_point(f, 0.0, finite_difference=True)
    assert order.order == 3 and order.approximate
    assert order.constant == pytest.approx(1 / 6, rel=1e-2)


def test_inflection_zeros_of_quartic():
    f = FluxModel.polynomial([0, 0, -1, 0, 1], (-1, 1), 2)
    z = inflection_zeros(f)
    assert len(z) == 2
    np.testing.assert_allclose(z, [-math.sqrt(1 / 6), math.sqrt(1 / 6)], atol=1e-9)


def test_inflection_zeros_tangential():
    z = inflection_zeros(builtin_flux("quartic", (-1, 2)))
    assert len(z) == 1 and abs(z[0]) < 1e-5


def test_flat_second_derivative_is_degenerate():
    with pytest.raises(DegenerateFluxError):
        inflection_zeros(FluxModel.polynomial([0, 1.0], (-1, 1), 2))


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-0.9, 0.9), min_size=2, max_size=2, unique=True).filter(lambda r: abs(r[0] - r[1]) > 0.05))
def test_inflection_zeros_match_companion_roots(roots):
    # f'' = 12 (v - r0)(v - r1) for f(v) = v^4 - 2 (r0 + r1) v^3 + 6 r0 r1 v^2
    r0, r1 = roots
    f = FluxModel.polynomial([0, 0, 6 * r0 * r1, -2 * (r0 + r1), 1.0], (-1, 1), 2)
    ref = np.sort(np.roots(np.polyder(np.poly1d([1.0, -2 * (r0 + r1), 6 * r0 * r1, 0, 0]), 2)).real)
    np.testing.assert_allclose(inflection_zeros(f), ref, atol=1e-9)


def test_q_ratio():
    f = builtin_flux("cubic", (-10, 10))
    stats = convexity_ratio_q(f, (1, 2), (0.5, 3))
    assert stats.q == pytest.approx(1 / 3, rel=1e-12)
    assert convexity_ratio_q(f, (1, 2)).enlarged == (0.5, 2.5)


def test_q_rejects_inflection():
    with pytest.raises(InflectionError):
        convexity_ratio_q(builtin_flux("cubic", (-10, 10)), (-1, 1))


def test_separation_holds_with_scanned_constant():
    f = builtin_flux("quartic", (-10, 10))
    c = nonlinearity_constant(f, 2, (1, 2))
    rep = check_fprime_separation(f, 2, c, (1, 2))
    assert rep.margin >= -1e-9 and rep.ok


def test_separation_fails_with_too_large_constant():
    rep = check_fprime_separation(builtin_flux("cubic", (-1, 1)), 3, 1.0, (-1, 1))
    assert not rep.ok
    assert rep.margin == pytest.approx(-8.0)


@pytest.mark.parametrize("flux,ell,iv", [
    (builtin_flux("burgers", (-3, 3)), 2, (-3, 3)),
    (builtin_flux("quartic", (-5, 5)), 2, (1, 2)),
    (builtin_flux("quartic", (-5, 5)), 4, (-1, 1)),
    (FluxModel.polynomial([0, 0, 1.0, 0.3], (-1, 1), 2), 2, (-1, 1)),
])
def test_separation_with_slightly_reduced_constant(flux, ell, iv):
    c = nonlinearity_constant(flux, ell, iv)
    assert check_fprime_separation(flux, ell, c * (1 - 1e-6), iv).margin >= 0


@pytest.mark.parametrize("I,J", [((1, 2), None), ((0.5, 4), (0.25, 5)), ((-3, -1), None)])
def test_q_in_unit_interval(I, J):
    f = FluxModel.polynomial([0, 0, 0.5, 0.1, 0.02], (-10, 10), 2)
    q = convexity_ratio_q(f, I, J, absolute=True).q
    assert 0 < q <= 1
