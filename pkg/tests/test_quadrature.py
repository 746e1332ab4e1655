import numpy as np
import pytest

from balance_lab.quadrature import gauss_panels, simpson_weights, slice_integrals, trapezoid_error_bound


def test_simpson_weights_sum_to_one():
    s, w = simpson_weights(8)
    assert s[0] == 0 and s[-1] == 1
    assert w.sum() == pytest.approx(1.0, abs=1e-15)


def test_simpson_rejects_odd_panels():
    with pytest.raises(ValueError):
        simpson_weights(3)


def test_slice_integrals_exact_for_cubics():
    times = np.array([0.0, 1.0, 2.0])
    F, err = slice_integrals(lambda t, x: x**3 + t * x, times, -1.0, np.array([1.0, 2.0, 3.0]), m=4)
    hi = np.array([1.0, 2.0, 3.0])
    exact = (hi**4 - 1) / 4 + times * (hi**2 - 1) / 2
    np.testing.assert_allclose(F, exact, rtol=1e-10, atol=1e-14)
    assert np.all(err >= 0)


def test_break_splits_jump_exactly():
    F, _ = slice_integrals(lambda t, x: np.sign(x), np.zeros(1), -0.3, 0.7, m=2, breaks=(0.0,))
    assert F[0] == pytest.approx(0.4, abs=1e-14)


def test_break_outside_interval_is_harmless():
    F, _ = slice_integrals(lambda t, x: np.ones_like(x), np.zeros(2), 0.0, 1.0, m=2, breaks=(5.0, -3.0))
    np.testing.assert_allclose(F, 1.0)


def test_trapezoid_error_bound_covers_actual_error():
    t = np.linspace(0, 1, 33)
    v = np.exp(t)
    err = abs(np.trapezoid(v, t) - (np.e - 1))
    assert err <= trapezoid_error_bound(v, t) * 1.0001 + 1e-15


def test_gauss_panels_integrate_piecewise_polynomials():
    nodes, w = gauss_panels(np.array([0.0, 0.5, 1.0]), order=3)
    f = np.where(nodes < 0.5, nodes**5, 1.0 - nodes)
    assert np.dot(w, f) == pytest.approx(0.5**6 / 6 + 0.125, abs=1e-14)
