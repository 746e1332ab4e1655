"""Acceptance criteria, one test per criterion.

Each test appends a ``criterion N PASS|FAIL ...`` line to the acceptance log
(shown in the pytest terminal summary) before asserting. Tolerances are the
published ones and are not to be loosened.
"""

import math

import numpy as np
import pytest

from balance_lab import (
    analytic_library,
    balance_sweep,
    builtin_flux,
    check_fprime_separation,
    holder_seminorm,
    inflection_zeros,
    lebesgue_point_test,
    lipschitz_along,
    lipschitz_sweep,
    make_region,
    nonlinearity_constant,
    oscillation_survey,
    rademacher_residual,
    region_area,
    surface_library,
    trace_characteristic,
    weak_residual,
)
from balance_lab.covering import DEFAULT_EPSILONS, DEFAULT_RHOS
from balance_lab.flux import FluxModel
from balance_lab.heisenberg import dilate, dist_inf, group_inv, group_mul

SQRT2 = math.sqrt(2.0)
SCALES = (0.2, 0.1, 0.05, 0.025)
DELTAS = (0.2, 0.1, 0.05, 0.025, 0.0125)

# dense-grid oracle for the sqrt surface at A0 = (0, 1/2): max over two independent
# dense samplings, times 1.05 (frozen)
RADEMACHER_ORACLE = np.array([0.2042, 0.0999, 0.0500, 0.0251]) * 1.05


def _report(log, n, ok, text):
    log.append(f"criterion {n} {'PASS' if ok else 'FAIL'} {text}")
    return ok


def test_criterion_1_holder_constant(acceptance_log):
    fld = analytic_library("example33", nx=4001, x_span=(-1.0, 1.0))
    rep = holder_seminorm(fld, 0.0, 2)
    lo, hi = SQRT2 * (1 - 1e-2), SQRT2 * (1 + 1e-2)
    ok = lo <= rep.empirical <= hi and 0.48 <= rep.exponent_fit <= 0.52
    assert _report(acceptance_log, 1, ok,
                   f"holder empirical={rep.empirical:.8f} in [{lo:.5f}, {hi:.5f}], exponent_fit={rep.exponent_fit:.4f} in [0.48, 0.52]")


def test_criterion_2_dafermos_balances(acceptance_log):
    worst = {}
    ok = True
    for k, name in enumerate(("example33", "linear_decay", "uniform_source", "constant")):
        fld = analytic_library(name)
        reps = balance_sweep(fld, 200, seed=100 + k, dt=fld.dt)
        good = [r.lhs_plus <= r.rhs_plus + r.quad_error_bound and r.lhs_minus >= r.rhs_minus - r.quad_error_bound for r in reps]
        worst[name] = min(min(r.plus_margin, r.minus_margin) + r.quad_error_bound for r in reps)
        ok &= len(reps) == 200 and all(good)
        if name == "uniform_source":
            gap = max(max(abs(r.lhs_plus - r.rhs_plus), abs(r.lhs_minus - r.rhs_minus)) for r in reps)
            ok &= gap <= 1e-8
    text = ", ".join(f"{k}:{v:.2e}" for k, v in worst.items())
    assert _report(acceptance_log, 2, ok, f"4x200 configurations, min margin+err {text}; uniform_source equality gap={gap:.1e} <= 1e-8")


def test_criterion_3_lipschitz_along_characteristics(acceptance_log):
    ok = True
    parts = []
    for name in ("example33", "uniform_source"):
        fld = analytic_library(name)
        L = lipschitz_sweep(fld, 50, seed=7)
        bound = fld.g_inf * (1 + 1e-3) + 10 * fld.dt
        ok &= L.size == 50 and float(L.max()) <= bound
        parts.append(f"{name} max={L.max():.6f} <= {bound:.4f}")
    ex = analytic_library("example33")
    q = lipschitz_along(ex, trace_characteristic(ex, 0.0, 1.0, 1.0))
    ok &= abs(q - 1.0) <= 1e-6
    assert _report(acceptance_log, 3, ok, "; ".join(parts) + f"; quotient from (0,1)={q:.10f}")


def test_criterion_4_oscillation_decay(acceptance_log):
    ex = oscillation_survey(analytic_library("example33"), 2000, DELTAS, 0.5, 2, seed=0)
    fr = ex.fractions
    ok = bool(np.all(np.diff(fr) <= 0)) and fr[-1] <= fr[0] / 4
    lin = analytic_library("linear_decay")
    small = [d for d in DELTAS if d < 1 / 16]
    f05 = oscillation_survey(lin, 2000, DELTAS, 0.5, 2, seed=0)
    f025 = oscillation_survey(lin, 2000, DELTAS, 0.25, 2, seed=0)
    for tab in (f05, f025):
        ok &= all(f == 0.0 for d, f in tab.rows() if d in small)
    assert _report(acceptance_log, 4, ok,
                   f"example33 fractions={np.round(fr, 4).tolist()} (last <= first/4); "
                   f"linear_decay zero below 1/16 at thresholds 0.5 and 0.25 {np.round(f025.fractions, 4).tolist()}")


def test_criterion_5_covering_lebesgue(acceptance_log):
    ex = analytic_library("example33")
    ok = True
    area_err = 0.0
    for rho in DEFAULT_RHOS:
        for eps in (0.2, 0.05, 0.0125):
            region = make_region(ex, 0.0, 0.5, eps, rho)
            area_err = max(area_err, abs(region_area(region) - 4 * rho * eps**3))
    ok &= area_err <= 1e-10

    rng = np.random.default_rng(5)
    points = [(0.0, 0.5)]
    while len(points) < 21:
        t, x = rng.uniform(-0.75, 0.75), rng.uniform(-3.0, 3.0)
        if abs(x) >= 0.1:
            points.append((t, x))
    worst = 0.0
    for t, x in points:
        tab = lebesgue_point_test(ex, ex.source, t, x, DEFAULT_RHOS, DEFAULT_EPSILONS, tol=1e-3, breaks=(0.0,))
        ok &= tab.passed
        worst = max(worst, float(np.nanmax(tab.deviations[:, -1])))

    flat = analytic_library("constant", c=0.0, t_span=(0.0, 1.0), x_span=(-1.0, 1.0))
    neg = lebesgue_point_test(flat, lambda t, x: np.sign(x), 0.5, 0.0, DEFAULT_RHOS, DEFAULT_EPSILONS,
                              breaks=(0.0,), reference=0.0)
    ok &= bool(np.all(neg.deviations >= 0.99))
    assert _report(acceptance_log, 5, ok,
                   f"21 points, worst final mean_abs_dev={worst:.2e} < 1e-3; negative control min={neg.deviations.min():.4f} >= 0.99; "
                   f"area error={area_err:.1e}")


def test_criterion_6_flux_calculus(acceptance_log):
    burgers = [nonlinearity_constant(builtin_flux("burgers", iv), 2) for iv in [(-1, 1), (0, 5), (-20, -3)]]
    cubic = nonlinearity_constant(builtin_flux("cubic", (-1, 1)), 3)
    margins = []
    for flux, ell, iv in [(builtin_flux("burgers", (-2, 2)), 2, (-2, 2)), (builtin_flux("quartic", (-5, 5)), 2, (1, 2)),
                          (builtin_flux("cubic", (-1, 1)), 3, (-1, 1)), (builtin_flux("quartic", (-5, 5)), 4, (-1, 1))]:
        c = nonlinearity_constant(flux, ell, iv)
        margins.append(check_fprime_separation(flux, ell, c, iv).margin)
    zeros = inflection_zeros(FluxModel.polynomial([0, 0, -1, 0, 1], (-2, 2), 2))
    zerr = max(abs(z - s * math.sqrt(1 / 6)) for z, s in zip(zeros, (-1, 1)))
    ok = (all(abs(b - 0.5) <= 1e-6 for b in burgers) and cubic <= 1e-3 and min(margins) >= -1e-9
          and len(zeros) == 2 and zerr <= 1e-9)
    assert _report(acceptance_log, 6, ok,
                   f"burgers c={max(burgers, key=lambda b: abs(b - 0.5)):.9f}, cubic c={cubic:.1e}, "
                   f"min separation margin={min(margins):.2e}, inflection error={zerr:.1e}")


def test_criterion_7_heisenberg_algebra(acceptance_log):
    rng = np.random.default_rng(7)
    n = 10_000
    P, Q, R = (rng.uniform(-2, 2, (n, 3)) for _ in range(3))
    r = rng.uniform(0.1, 3.0, (n, 1))
    errs = {
        "assoc": np.abs(group_mul(group_mul(P, Q), R) - group_mul(P, group_mul(Q, R))).max(),
        "identity": np.abs(group_mul(P, np.zeros(3)) - P).max() + np.abs(group_mul(np.zeros(3), P) - P).max(),
        "inverse": np.abs(group_mul(P, group_inv(P))).max() + np.abs(group_mul(group_inv(P), P)).max(),
        "dilation": np.abs(dilate(group_mul(P, Q), r[:, 0]) - group_mul(dilate(P, r[:, 0]), dilate(Q, r[:, 0]))).max(),
        "left-inv": np.abs(dist_inf(group_mul(R, P), group_mul(R, Q)) - dist_inf(P, Q)).max(),
        "homog": np.abs(dist_inf(dilate(P, r[:, 0]), dilate(Q, r[:, 0])) - r[:, 0] * dist_inf(P, Q)).max(),
    }
    ok = all(v <= 1e-12 for v in errs.values())
    assert _report(acceptance_log, 7, ok, "max errors " + ", ".join(f"{k}={v:.1e}" for k, v in errs.items()))


def test_criterion_8_rademacher(acceptance_log):
    surf = surface_library("sqrt")
    rng = np.random.default_rng(8)
    ok = True
    ratios = []
    for _ in range(10):
        y0 = rng.uniform(-0.6, 0.6)
        t0 = rng.choice([-1.0, 1.0]) * rng.uniform(0.1, 0.6)
        R = rademacher_residual(surf, (y0, t0), SCALES).residuals
        ok &= bool(np.all(np.isfinite(R)) and np.all(np.diff(R) <= 0) and R[-1] <= R[0] / 2)
        ratios.append(R[-1] / R[0])
    base = rademacher_residual(surf, (0.0, 0.5), SCALES).residuals
    ok &= bool(np.all(base <= RADEMACHER_ORACLE))
    neg = rademacher_residual(surf, (0.0, 0.0), SCALES).residuals
    ok &= bool(np.all(neg >= 1.0)) and bool(np.all(np.abs(neg - SQRT2) <= 1e-12))
    lin = rademacher_residual(surface_library("linear", w=0.75), (0.1, -0.2), SCALES).residuals
    ok &= bool(np.all(np.abs(lin) <= 1e-12))
    assert _report(acceptance_log, 8, ok,
                   f"10 points, worst R(0.025)/R(0.2)={max(ratios):.3f} <= 0.5; (0,1/2) within frozen curve; "
                   f"negative control R={neg.min():.12f}; linear max R={np.abs(lin).max():.1e}")


def test_criterion_9_residual_convergence(acceptance_log):
    res = []
    for d in (4e-3, 2e-3):
        fld = analytic_library("linear_decay", nt=int(round(1 / d)) + 1, nx=int(round(2 / d)) + 1, interpolation="bilinear")
        res.append(weak_residual(fld, 50, 0))
    ratio = res[0] / res[1]
    assert _report(acceptance_log, 9, ratio >= 3,
                   f"linear_decay residual {res[0]:.3e} -> {res[1]:.3e}, factor={ratio:.2f} >= 3")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
