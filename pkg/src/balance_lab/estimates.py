"""Quantitative estimates for continuous solutions, evaluated on sampled fields.

* :func:`dafermos_balance` compares the mass in bands of width ``h`` beside
  a characteristic with the integrated source (convex-flux inequalities).
* :func:`lipschitz_along` measures the Lipschitz constant of ``u`` along a
  characteristic, which must not exceed ``sup |g|``.
* :func:`holder_seminorm` computes the ``1/l``-Hoelder quotient, the
  theoretical constant ``(4G / (q c_l))**(1/l)`` and a log-log exponent fit.
* :func:`oscillation_A` and :func:`oscillation_survey` are finite-scale
  surrogates of the pointwise oscillation ``limsup |u(t,y) - u(t,x)| / |y-x|**(1/l)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import stats

from .flux import (
    ABS_TOL,
    DegenerateFluxError,
    InflectionError,
    convexity_ratio_q,
    inflection_zeros,
    nonlinearity_constant,
)
from .quadrature import slice_integrals, trapezoid, trapezoid_error_bound
from .solver import Characteristic, SolutionField, trace_characteristics

__all__ = [
    "BalanceReport",
    "HolderReport",
    "SurveyTable",
    "ConvexityError",
    "GeometryError",
    "dafermos_balance",
    "lipschitz_along",
    "holder_seminorm",
    "oscillation_A",
    "oscillation_survey",
    "balance_sweep",
    "lipschitz_sweep",
]


class ConvexityError(ValueError):
    """The flux is not convex (or concave) on the range of the solution."""


class GeometryError(ValueError):
    """A band or window leaves the field rectangle."""


@dataclass(frozen=True)
class BalanceReport:
    lhs_plus: float
    rhs_plus: float
    lhs_minus: float
    rhs_minus: float
    h: float
    t1: float
    t2: float
    quad_error_bound: float
    concave: bool = False

    @property
    def plus_margin(self) -> float:
        """``rhs_plus - lhs_plus`` (sign-flipped for concave fluxes); nonnegative up to quadrature error."""
        d = self.rhs_plus - self.lhs_plus
        return -d if self.concave else d

    @property
    def minus_margin(self) -> float:
        d = self.lhs_minus - self.rhs_minus
        return -d if self.concave else d

    @property
    def satisfied(self) -> bool:
        e = self.quad_error_bound
        return self.plus_margin >= -e and self.minus_margin >= -e


def _scan_convexity(field: SolutionField, values: np.ndarray, concave: bool, n: int = 512):
    lo, hi = float(np.nanmin(values)), float(np.nanmax(values))
    grid = np.linspace(lo, hi, n) if hi > lo else np.array([lo])
    d2 = np.asarray(field.flux.d2f(grid), dtype=float) * np.ones_like(grid)
    if concave:
        bad = np.any(d2 > ABS_TOL)
    else:
        bad = np.any(d2 < -ABS_TOL)
    if bad:
        kind = "concave" if concave else "convex"
        raise ConvexityError(f"flux not {kind} on solution range [{lo:.6g}, {hi:.6g}]")


def dafermos_balance(
    field: SolutionField,
    gamma: Characteristic,
    h: float,
    t1: float,
    t2: float,
    *,
    concave: bool = False,
    n_slices: int = 64,
    n_x: int = 32,
) -> BalanceReport:
    """Integral balances in the bands ``S+ = {gamma <= x <= gamma + h}`` and ``S- = {gamma - h <= x <= gamma}``.

    ``lhs_plus`` is the change of ``int_{gamma}^{gamma+h} u dx`` between ``t1``
    and ``t2`` and ``rhs_plus`` the source integrated over ``S+`` (same for
    ``S-``). For convex fluxes ``lhs_plus <= rhs_plus`` and
    ``lhs_minus >= rhs_minus``; ``concave=True`` reverses both.

    Slices are integrated with composite Simpson in ``x`` (split at the
    field's break lines) and the trapezoid rule in ``t``.
    ``quad_error_bound`` adds the scanned composite-rule bounds and the
    drift of ``gamma`` away from an exact characteristic.
    """
    if h <= 0:
        raise ValueError("band width must be positive")
    g0, g1 = gamma.t_span
    tol = 1e-12 * max(1.0, abs(g1 - g0))
    if not (t1 < t2 and g0 - tol <= t1 and t2 <= g1 + tol):
        raise ValueError(f"[{t1}, {t2}] is not inside the characteristic's span [{g0}, {g1}]")
    t1 = max(t1, g0)
    t2 = min(t2, g1)
    times = np.linspace(t1, t2, n_slices + 1)
    pos = gamma(times)
    if not np.all(field.contains(times, pos - h) & field.contains(times, pos + h)):
        raise GeometryError("bands S+/S- leave the field rectangle")

    s = np.linspace(-1.0, 1.0, 2 * n_x + 1)
    band_vals = field(times[:, None], pos[:, None] + h * s[None, :])
    _scan_convexity(field, band_vals, concave)

    breaks = field.all_breaks
    ends = np.array([t1, t2])
    pend = gamma(ends)
    up, up_err = slice_integrals(field, ends, pend, pend + h, n_x, breaks)
    dn, dn_err = slice_integrals(field, ends, pend - h, pend, n_x, breaks)
    lhs_plus = float(up[1] - up[0])
    lhs_minus = float(dn[1] - dn[0])

    Fp, Fp_err = slice_integrals(field.source, times, pos, pos + h, n_x, breaks)
    Fm, Fm_err = slice_integrals(field.source, times, pos - h, pos, n_x, breaks)
    rhs_plus = trapezoid(Fp, times)
    rhs_minus = trapezoid(Fm, times)

    # an inexact gamma shifts the band balance by (gamma' - f'(u(gamma))) * [u]_band per unit time
    vel = gamma.velocity(times)
    speed = field.flux.df(field(times, pos))
    jump = np.maximum(np.abs(field(times, pos + h) - field(times, pos)), np.abs(field(times, pos) - field(times, pos - h)))
    drift = (t2 - t1) * float(np.max(np.abs(vel - speed) * jump))

    span = t2 - t1
    err = (
        float(up_err.sum() + dn_err.sum())
        + span * float(max(Fp_err.max(), Fm_err.max()))
        + max(trapezoid_error_bound(Fp, times), trapezoid_error_bound(Fm, times))
        + drift
    )
    scale = h * (1.0 + float(np.nanmax(np.abs(band_vals))) + field.g_inf * span)
    err += 64 * np.finfo(float).eps * scale
    return BalanceReport(lhs_plus, rhs_plus, lhs_minus, rhs_minus, float(h), float(t1), float(t2), float(err), concave)


def lipschitz_along(field: SolutionField, gamma: Characteristic) -> float:
    """``max_{i<j} |u_j - u_i| / |t_j - t_i|`` along the sampled curve.

    The quotient over any pair is a convex combination of the quotients of
    consecutive samples, so the maximum over adjacent pairs is exact.
    """
    if len(gamma) < 3:
        raise ValueError("need at least three samples")
    dt = np.diff(gamma.times)
    return float(np.max(np.abs(np.diff(gamma.values)) / dt))


@dataclass(frozen=True)
class HolderReport:
    empirical: float
    theoretical: float
    theoretical_applicable: bool
    exponent_fit: float
    fit_r2: float
    fit_reliable: bool
    pairs_scanned: int
    stride: int
    scales: int
    degenerate_source: bool = False
    q: float | None = None
    c_ell: float | None = None


def _window_nodes(field: SolutionField, window) -> np.ndarray:
    x = field.x_grid
    if window is None:
        return np.ones(x.size, dtype=bool)
    a, b = map(float, window)
    tol = 1e-9 * field.dx
    x0, x1 = field.x_span
    if a < x0 - tol or b > x1 + tol or not a < b:
        raise GeometryError(f"window [{a}, {b}] is not inside [{x0}, {x1}]")
    return (x >= a - tol) & (x <= b + tol)


def _sup_quotient(vals: np.ndarray, dx: float, alpha: float) -> float:
    best = 0.0
    for k in range(1, vals.size):
        d = float(np.abs(vals[k:] - vals[:-k]).max())
        if d > 0:
            best = max(best, d / (k * dx) ** alpha)
    return best


def holder_seminorm(
    field: SolutionField,
    t: float,
    ell: int,
    window=None,
    *,
    max_pairs: int = 2_000_000,
    min_scales: int = 8,
) -> HolderReport:
    """``1/ell``-Hoelder quotient of ``u(t, .)`` on the window's grid nodes.

    ``empirical`` is ``max |u(x) - u(y)| / |x - y|**(1/ell)`` over node pairs
    (strided when there are more than ``max_pairs``). ``theoretical`` is
    ``(4G / (q c_ell))**(1/ell)`` with ``G = g_inf`` and ``q``, ``c_ell`` taken
    on the window's value range; it is not applicable when that range meets
    a zero of ``f''``, and is ``0`` with ``degenerate_source`` when ``G = 0``.
    ``exponent_fit`` is the least-squares slope of ``log osc(h)`` against
    ``log h`` for dyadic lags ``h = 2**k dx`` (``k >= 1``), where ``osc(h)``
    is the largest increment at lag exactly ``h``.
    """
    t0, t1 = field.t_span
    if not (t0 - 1e-12 <= t <= t1 + 1e-12):
        raise GeometryError(f"t = {t} outside [{t0}, {t1}]")
    mask = _window_nodes(field, window)
    vals = field.row(t)[mask]
    n = vals.size
    alpha = 1.0 / ell

    stride = 1
    while (m := -(-n // stride)) * (m - 1) // 2 > max_pairs:
        stride += 1
    sub = vals[::stride]
    empirical = _sup_quotient(sub, field.dx * stride, alpha)
    pairs = sub.size * (sub.size - 1) // 2

    # theoretical constant
    G = float(field.g_inf)
    lo, hi = float(vals.min()), float(vals.max())
    q = c = None
    degenerate = G == 0.0
    if degenerate:
        theoretical, applicable = 0.0, True
    else:
        applicable = False
        theoretical = math.nan
        if hi > lo:
            try:
                zeros = inflection_zeros(field.flux, (lo, hi))
                if not zeros:
                    st = convexity_ratio_q(field.flux, (lo, hi), absolute=True)
                    c = nonlinearity_constant(field.flux, ell, (lo, hi))
                    q = st.q
                    if c > 0:
                        theoretical = (4.0 * G / (q * c)) ** alpha
                        applicable = True
            except (InflectionError, DegenerateFluxError, ValueError):
                applicable = False

    # dyadic oscillation fit
    lags = []
    k = 2
    while k <= (n - 1) // 2:
        lags.append(k)
        k *= 2
    osc = np.array([np.abs(vals[L:] - vals[:-L]).max() for L in lags]) if lags else np.array([])
    reliable = len(lags) >= min_scales and osc.size > 0 and np.all(osc > 0)
    if osc.size >= 2 and np.all(osc > 0):
        fit = stats.linregress(np.log(np.array(lags) * field.dx), np.log(osc))
        slope, r2 = float(fit.slope), float(fit.rvalue**2)
    else:
        slope, r2 = math.nan, math.nan
        reliable = False
    return HolderReport(
        empirical, theoretical, applicable, slope, r2, bool(reliable), pairs, stride,
        len(lags), degenerate, q, c,
    )


def oscillation_A(field: SolutionField, t: float, x: float, ell: int, delta: float) -> float:
    """``max |u(t,y) - u(t,x)| / |y - x|**(1/ell)`` over grid nodes ``0 < |y - x| <= delta``."""
    if delta < 2 * field.dx * (1 - 1e-9):
        raise ValueError(f"delta must be at least 2 dx = {2 * field.dx}")
    a, b = field.x_span
    if x - delta < a - 1e-12 or x + delta > b + 1e-12:
        raise GeometryError("[x - delta, x + delta] leaves the field")
    xg = field.x_grid
    sel = (np.abs(xg - x) <= delta) & (np.abs(xg - x) > 0)
    y = xg[sel]
    uy = field(np.full_like(y, t), y)
    ux = float(field(t, x))
    return float(np.max(np.abs(uy - ux) / np.abs(y - x) ** (1.0 / ell)))


@dataclass(frozen=True)
class SurveyTable:
    deltas: np.ndarray
    fractions: np.ndarray
    threshold: float
    samples: int
    seed: int

    def rows(self):
        return list(zip(self.deltas.tolist(), self.fractions.tolist()))


def oscillation_survey(
    field: SolutionField,
    sample_count: int,
    deltas: Sequence[float],
    threshold: float,
    ell: int,
    seed: int = 0,
) -> SurveyTable:
    """Fraction of seeded interior sample points with ``A_delta > threshold``, per ``delta``.

    The same samples serve every ``delta``, so fractions are monotone in
    ``delta`` by construction.
    """
    deltas = np.asarray(sorted(deltas, reverse=True), dtype=float)
    dmax = float(deltas[0])
    if deltas[-1] < 2 * field.dx * (1 - 1e-9):
        raise ValueError("every delta must be at least 2 dx")
    rng = np.random.default_rng(seed)
    t0, t1 = field.t_span
    a, b = field.x_span
    if b - a <= 2 * dmax:
        raise GeometryError("field too narrow for the largest delta")
    ts = rng.uniform(t0, t1, sample_count)
    xs = rng.uniform(a + dmax, b - dmax, sample_count)
    dx = field.dx
    K = int(math.ceil(dmax / dx)) + 1
    j0 = np.floor((xs - a) / dx).astype(np.intp)
    offs = np.arange(-K, K + 2)
    idx = np.clip(j0[:, None] + offs[None, :], 0, field.x_grid.size - 1)
    Y = field.x_grid[idx]
    U = field(ts[:, None], Y)
    ux = field(ts, xs)
    dist = np.abs(Y - xs[:, None])
    with np.errstate(divide="ignore", invalid="ignore"):
        quot = np.where(dist > 0, np.abs(U - ux[:, None]) / dist ** (1.0 / ell), 0.0)
    fractions = np.array([float(np.mean(np.where(dist <= d, quot, 0.0).max(axis=1) > threshold)) for d in deltas])
    return SurveyTable(deltas, fractions, float(threshold), int(sample_count), int(seed))


def balance_sweep(
    field: SolutionField,
    count: int,
    seed: int = 0,
    *,
    h_max: float = 0.1,
    span_max: float = 0.5,
    concave: bool = False,
    max_tries: int = 50,
    dt: float | None = None,
) -> list[BalanceReport]:
    """Dafermos balances for ``count`` seeded random ``(gamma, h, t1, t2)`` configurations.

    Each draw picks a start ``(t1, x0)``, a duration up to ``span_max`` and a
    band width up to ``h_max``; draws whose bands leave the field are
    redrawn (at most ``max_tries`` times per configuration). ``dt`` is the
    RK4 step (the field's default step when omitted); tracing error enters
    ``quad_error_bound`` through the drift term.
    """
    rng = np.random.default_rng(seed)
    t0, t1_max = field.t_span
    a, b = field.x_span
    span_max = min(span_max, t1_max - t0)
    reports = []
    for _ in range(count):
        for _ in range(max_tries):
            span = rng.uniform(0.1, 1.0) * span_max
            t1 = rng.uniform(t0, t1_max - span)
            h = rng.uniform(0.1, 1.0) * min(h_max, 0.25 * (b - a))
            x0 = rng.uniform(a + h, b - h)
            gamma = trace_characteristics(field, t1, [x0], t1 + span, dt)[0]
            if gamma.exited:
                continue
            try:
                reports.append(dafermos_balance(field, gamma, h, t1, t1 + span, concave=concave))
                break
            except GeometryError:
                continue
        else:
            raise GeometryError("could not place a balance configuration inside the field")
    return reports


def lipschitz_sweep(field: SolutionField, count: int, seed: int = 0, span: float | None = None) -> np.ndarray:
    """Lipschitz constants of ``u`` along ``count`` seeded characteristics.

    Starts are uniform at the initial time; curves run for ``span`` (the
    whole time range by default) or until they leave the rectangle.
    """
    rng = np.random.default_rng(seed)
    t0, t1 = field.t_span
    a, b = field.x_span
    end = t1 if span is None else min(t1, t0 + span)
    xs = np.sort(rng.uniform(a, b, count))
    out = []
    for ch in trace_characteristics(field, t0, xs, end):
        out.append(lipschitz_along(field, ch) if len(ch) >= 3 else 0.0)
    return np.array(out)
