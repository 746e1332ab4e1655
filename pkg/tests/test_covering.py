import numpy as np
import pytest

from balance_lab import analytic_library, average_over, lebesgue_point_test, make_region, region_area
from balance_lab.covering import RegionError


def test_region_area_matches_formula(ex33):
    for rho, eps in [(1.0, 0.1), (0.25, 0.05), (0.125, 0.2)]:
        region = make_region(ex33, 0.0, 0.5, eps, rho)
        assert region.area == pytest.approx(4 * rho * eps**3, rel=1e-15)
        assert region_area(region) == pytest.approx(region.area, abs=1e-10)


def test_region_follows_characteristic(ex33):
    region = make_region(ex33, 0.0, 1.0, 0.1, 1.0)
    t = np.linspace(-0.1, 0.1, 11)
    np.testing.assert_allclose(region.gamma(t), (1 + t) ** 2, atol=1e-6)
    assert region.contains(0.05, 1.05**2)
    assert not region.contains(0.05, 1.05**2 + 0.02)


def test_region_outside_field_raises(uniform_source):
    with pytest.raises(RegionError):
        make_region(uniform_source, 0.05, 0.0, 0.1, 1.0)


def test_average_of_constant(ex33):
    region = make_region(ex33, 0.2, 0.5, 0.05, 0.5)
    mean, dev = average_over(lambda t, x: np.full_like(x, 3.0), region, c=3.0)
    assert mean == pytest.approx(3.0, abs=1e-12)
    assert dev == pytest.approx(0.0, abs=1e-12)


def test_sign_source_lebesgue_point(ex33):
    tab = lebesgue_point_test(ex33, ex33.source, 0.0, 0.5, breaks=(0.0,))
    assert tab.passed
    rows = list(tab.rows())
    assert len(rows) == 24 and {r[3] for r in rows} == {True}


def test_symmetric_negative_control():
    fld = analytic_library("constant", c=0.0, t_span=(0, 1), x_span=(-1, 1))
    sgn = lambda t, x: np.sign(x)  # noqa: E731
    tab = lebesgue_point_test(fld, sgn, 0.5, 0.0, breaks=(0.0,), reference=0.0)
    assert np.all(tab.deviations >= 0.99)
    assert not tab.passed


def test_regions_are_nested(ex33):
    for eps in (0.2, 0.1, 0.05):
        big = make_region(ex33, 0.1, 1.0, eps, 0.5)
        small = make_region(ex33, 0.1, 1.0, eps / 2, 0.5)
        ts = np.linspace(0.1 - eps / 2, 0.1 + eps / 2, 21)
        lo, hi = small.bounds(ts)
        assert np.all(big.contains(ts, lo) & big.contains(ts, hi))


def test_lipschitz_function_deviation_bound(ex33):
    # q = x is 1-Lipschitz; the centre curve has speed at most max|f'| over the region
    for eps, rho in [(0.2, 1.0), (0.05, 0.25), (0.0125, 0.125)]:
        region = make_region(ex33, 0.0, 1.0, eps, rho)
        speed = float(np.abs(ex33.flux.df(region.gamma.values)).max())
        _, dev = average_over(lambda t, x: x, region, 1.0)
        assert dev <= speed * eps + rho * eps**2 + eps
