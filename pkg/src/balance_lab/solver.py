"""Continuous solutions of ``u_t + [f(u)]_x = g`` built and checked by characteristics.

A :class:`SolutionField` holds node values on a uniform ``(t, x)`` grid
together with its source and an interpolation rule. Fields built by
:func:`solve_characteristics` or read from CSV are interpolated bilinearly;
fields from :func:`analytic_library` may instead evaluate their closed form
off the grid (``interpolation == "exact"``).
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from .flux import FluxModel, builtin_flux
from .quadrature import gauss_panels

__all__ = [
    "SolutionField",
    "Characteristic",
    "CharacteristicCrossing",
    "DomainClipWarning",
    "solve_characteristics",
    "trace_characteristic",
    "trace_characteristics",
    "weak_residual",
    "weak_residuals",
    "analytic_library",
    "ANALYTIC_FIELDS",
    "write_field_csv",
    "read_field_csv",
]

Source = Callable[[np.ndarray, np.ndarray], np.ndarray]


class CharacteristicCrossing(RuntimeError):
    """Traced feet lost strict ordering: the solution stops being continuous."""

    def __init__(self, time: float):
        super().__init__(f"characteristics cross at t = {time:.12g}")
        self.time = time


class DomainClipWarning(UserWarning):
    """Characteristics left the rectangle; the output x-range was shrunk."""


def _uniform(grid, name: str) -> np.ndarray:
    g = np.asarray(grid, dtype=float)
    if g.ndim != 1 or g.size < 2:
        raise ValueError(f"{name} needs at least two nodes")
    d = np.diff(g)
    if np.any(d <= 0):
        raise ValueError(f"{name} must be strictly increasing")
    if not np.allclose(d, d[0], rtol=1e-8, atol=0.0):
        raise ValueError(f"{name} must be uniformly spaced")
    return g


@dataclass(frozen=True, eq=False)
class SolutionField:
    """Sampled solution ``u(t, x)`` of a balance law on a rectangle.

    Attributes
    ----------
    t_grid, x_grid : ndarray
        Uniform, strictly increasing node coordinates.
    u : ndarray, shape (nt, nx)
        Node values.
    flux : FluxModel
    g : ndarray or callable
        Source at the nodes, or a vectorized ``g(t, x)``.
    breaks : tuple of float
        x-lines where ``u`` or ``g`` is not smooth; quadratures split there.
    exact : callable, optional
        Closed form ``u(t, x)``; when given it replaces bilinear interpolation.
    g_inf : float, optional
        Declared ``sup |g|``; defaults to the maximum over the nodes.
    """

    t_grid: np.ndarray
    x_grid: np.ndarray
    u: np.ndarray
    flux: FluxModel
    g: np.ndarray | Source = 0.0
    breaks: tuple[float, ...] = ()
    exact: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None
    g_inf: float | None = None
    name: str = "field"
    g_breaks: tuple[float, ...] = dc_field(default=(), repr=False)

    def __post_init__(self):
        t = _uniform(self.t_grid, "t_grid")
        x = _uniform(self.x_grid, "x_grid")
        u = np.asarray(self.u, dtype=float)
        if u.shape != (t.size, x.size):
            raise ValueError(f"u has shape {u.shape}, expected {(t.size, x.size)}")
        if not np.all(np.isfinite(u)):
            raise ValueError("u must be finite at every node")
        object.__setattr__(self, "t_grid", t)
        object.__setattr__(self, "x_grid", x)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "breaks", tuple(sorted(float(b) for b in self.breaks)))
        if not callable(self.g):
            g = np.broadcast_to(np.asarray(self.g, dtype=float), u.shape).copy()
            object.__setattr__(self, "g", g)
        if self.g_inf is None:
            object.__setattr__(self, "g_inf", float(np.abs(self.source_nodes()).max()))

    # -- geometry -----------------------------------------------------------
    @property
    def dt(self) -> float:
        return float(self.t_grid[1] - self.t_grid[0])

    @property
    def dx(self) -> float:
        return float(self.x_grid[1] - self.x_grid[0])

    @property
    def t_span(self) -> tuple[float, float]:
        return float(self.t_grid[0]), float(self.t_grid[-1])

    @property
    def x_span(self) -> tuple[float, float]:
        return float(self.x_grid[0]), float(self.x_grid[-1])

    @property
    def interpolation(self) -> str:
        return "bilinear" if self.exact is None else "exact"

    def contains(self, t, x, tol: float = 1e-12) -> np.ndarray:
        t0, t1 = self.t_span
        x0, x1 = self.x_span
        st, sx = tol * (t1 - t0), tol * (x1 - x0)
        t = np.asarray(t)
        x = np.asarray(x)
        return (t >= t0 - st) & (t <= t1 + st) & (x >= x0 - sx) & (x <= x1 + sx)

    # -- evaluation ---------------------------------------------------------
    def _locate(self, grid: np.ndarray, q: np.ndarray):
        d = grid[1] - grid[0]
        f = np.clip((q - grid[0]) / d, 0.0, grid.size - 1.0)
        f = np.where(np.isnan(f), 0.0, f)  # NaN queries are masked by the caller
        i = np.minimum(np.floor(f).astype(np.intp), grid.size - 2)
        return i, f - i

    def _bilinear(self, values: np.ndarray, t, x) -> np.ndarray:
        t, x = np.asarray(t, dtype=float), np.asarray(x, dtype=float)
        i, a = self._locate(self.t_grid, t)
        j, b = self._locate(self.x_grid, x)
        out = (1 - a) * ((1 - b) * values[i, j] + b * values[i, j + 1]) + a * (
            (1 - b) * values[i + 1, j] + b * values[i + 1, j + 1]
        )
        inside = self.contains(t, x)
        if not np.all(inside):
            out = np.where(inside, out, np.nan)
        return out

    def __call__(self, t, x) -> np.ndarray:
        """``u(t, x)``; NaN outside the rectangle."""
        if self.exact is not None:
            t, x = np.asarray(t, dtype=float), np.asarray(x, dtype=float)
            out = np.asarray(self.exact(t, x), dtype=float) * np.ones(np.broadcast(t, x).shape)
            inside = self.contains(t, x)
            return out if np.all(inside) else np.where(inside, out, np.nan)
        return self._bilinear(self.u, t, x)

    def source(self, t, x) -> np.ndarray:
        if callable(self.g):
            t, x = np.asarray(t, dtype=float), np.asarray(x, dtype=float)
            return np.asarray(self.g(t, x), dtype=float) * np.ones(np.broadcast(t, x).shape)
        return self._bilinear(self.g, t, x)

    def source_nodes(self) -> np.ndarray:
        if callable(self.g):
            return self.source(self.t_grid[:, None], self.x_grid[None, :])
        return self.g

    def row(self, t: float) -> np.ndarray:
        """Values on ``x_grid`` at time ``t`` (node values when ``t`` is a node)."""
        k = (t - self.t_grid[0]) / self.dt
        kr = int(round(k))
        if abs(k - kr) < 1e-9 and 0 <= kr < self.t_grid.size:
            if self.exact is not None:
                return self(self.t_grid[kr], self.x_grid)
            return self.u[kr].copy()
        return self(np.full_like(self.x_grid, t), self.x_grid)

    @cached_property
    def max_speed(self) -> float:
        return float(np.abs(self.flux.df(self.u)).max())

    @property
    def all_breaks(self) -> tuple[float, ...]:
        return tuple(sorted(set(self.breaks) | set(self.g_breaks)))

    def default_step(self) -> float:
        """CFL-like characteristic step ``dx / (1 + max |f'(u)|)``."""
        return self.dx / (1.0 + self.max_speed)


# -- characteristics -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Characteristic:
    """Time-sampled characteristic curve, stored in increasing time.

    ``slopes`` are ``f'(u)`` at the samples; positions between samples come
    from the cubic Hermite interpolant through ``(times, positions, slopes)``.
    """

    times: np.ndarray
    positions: np.ndarray
    values: np.ndarray
    slopes: np.ndarray
    step: float
    start: tuple[float, float]
    exited: bool = False
    direction: int = 1

    def __len__(self):
        return self.times.size

    @property
    def t_span(self) -> tuple[float, float]:
        return float(self.times[0]), float(self.times[-1])

    @property
    def end(self) -> tuple[float, float]:
        """The last point reached in the direction of integration."""
        i = -1 if self.direction > 0 else 0
        return float(self.times[i]), float(self.positions[i])

    @cached_property
    def _spline(self):
        return CubicHermiteSpline(self.times, self.positions, self.slopes)

    def __call__(self, t) -> np.ndarray:
        return self._spline(np.asarray(t, dtype=float))

    def velocity(self, t) -> np.ndarray:
        return self._spline.derivative()(np.asarray(t, dtype=float))

    def consistency_defect(self) -> float:
        """``max |gamma_{i+1} - gamma_i - f'(u_i) dt| / dt**2`` over the samples."""
        dt = np.diff(self.times)
        lhs = np.abs(np.diff(self.positions) - self.slopes[:-1] * dt)
        return float((lhs / dt**2).max()) if dt.size else 0.0


def _rk4_paths(field: SolutionField, t0: float, x0: np.ndarray, t_end: float, dt: float):
    """Vectorized RK4 for ``x' = f'(u(t, x))``; returns times, positions and last valid index per path."""
    n = max(1, int(math.ceil(abs(t_end - t0) / dt - 1e-9)))
    times = np.linspace(t0, t_end, n + 1)
    h = (t_end - t0) / n
    m = x0.size
    X = np.full((n + 1, m), np.nan)
    X[0] = x0
    last = np.zeros(m, dtype=np.intp)
    alive = np.asarray(field.contains(t0, x0), dtype=bool)
    if not np.all(alive):
        raise ValueError("starting point outside the field rectangle")
    fp = field.flux.df
    x = x0.astype(float).copy()
    for k in range(n):
        t = times[k]
        k1 = fp(field(t, x))
        k2 = fp(field(t + h / 2, x + h / 2 * k1))
        k3 = fp(field(t + h / 2, x + h / 2 * k2))
        k4 = fp(field(t + h, x + h * k3))
        xn = x + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        ok = alive & np.isfinite(xn) & field.contains(times[k + 1], xn)
        alive = ok
        if not np.any(alive):
            break
        x = np.where(alive, xn, x)
        X[k + 1] = np.where(alive, xn, np.nan)
        last = np.where(alive, k + 1, last)
    return times, X, last


def trace_characteristics(field: SolutionField, t0: float, x0s, t_end: float, dt: float | None = None) -> list[Characteristic]:
    """Trace a batch of characteristics from ``(t0, x0s[i])`` to ``t_end`` (forward or backward).

    Output ordering follows the input. A curve leaving the rectangle is
    truncated at its last interior sample and flagged ``exited``.
    """
    x0s = np.atleast_1d(np.asarray(x0s, dtype=float))
    dt = field.default_step() if dt is None else float(dt)
    if dt <= 0:
        raise ValueError("step must be positive")
    times, X, last = _rk4_paths(field, float(t0), x0s, float(t_end), dt)
    step = abs(times[1] - times[0])
    out = []
    for i in range(x0s.size):
        k = int(last[i]) + 1
        ts, xs = times[:k], X[:k, i]
        us = field(ts, xs)
        sl = field.flux.df(us) * np.ones_like(us)
        if ts.size > 1 and ts[-1] < ts[0]:
            ts, xs, us, sl = ts[::-1], xs[::-1], us[::-1], sl[::-1]
        out.append(
            Characteristic(
                times=np.ascontiguousarray(ts), positions=np.ascontiguousarray(xs),
                values=np.ascontiguousarray(us), slopes=np.ascontiguousarray(sl),
                step=step, start=(float(t0), float(x0s[i])), exited=k < times.size,
                direction=1 if t_end >= t0 else -1,
            )
        )
    return out


def trace_characteristic(field: SolutionField, t0: float, x0: float, t_end: float, dt: float | None = None) -> Characteristic:
    """RK4 characteristic ``gamma' = f'(u(t, gamma))`` through ``(t0, x0)`` up to ``t_end``.

    >>> fld = analytic_library("uniform_source")
    >>> ch = trace_characteristic(fld, 0.0, 0.0, 0.5)
    >>> round(float(ch.positions[-1]), 8)
    0.125
    """
    return trace_characteristics(field, t0, [x0], t_end, dt)[0]


def solve_characteristics(
    flux: FluxModel,
    x_grid,
    u0,
    g: Source | float = 0.0,
    t_span: tuple[float, float] = (0.0, 1.0),
    dt: float | None = None,
    *,
    breaks: Sequence[float] = (),
    g_inf: float | None = None,
    slack: float = 1e-12,
) -> SolutionField:
    """Build a continuous solution by integrating ``gamma' = f'(U)``, ``U' = g(t, gamma)`` from every foot.

    At each RK4 step the feet must stay strictly ordered, otherwise
    :class:`CharacteristicCrossing` is raised with the first offending time.
    Values are resampled onto the fixed ``x_grid`` by linear (monotone)
    interpolation. If characteristics drift out of the initial x-range,
    the output keeps only nodes covered at every time and a
    :class:`DomainClipWarning` is issued.

    Parameters
    ----------
    flux : FluxModel
    x_grid : array_like
        Uniform grid of feet at ``t_span[0]``.
    u0 : array_like or callable
        Initial datum on ``x_grid`` (or a function of ``x``).
    g : callable or float
        Source ``g(t, x)``; a number means a constant source.
    dt : float, optional
        RK4 step; defaults to ``dx / (1 + max |f'(u0)|)``.
    """
    x_grid = _uniform(x_grid, "x_grid")
    U = np.asarray(u0(x_grid) if callable(u0) else u0, dtype=float) * np.ones_like(x_grid)
    if not np.all(np.isfinite(U)):
        raise ValueError("initial datum must be finite")
    src: Source = g if callable(g) else (lambda t, x, c=float(g): np.full(np.broadcast(t, x).shape, c))
    dx = x_grid[1] - x_grid[0]
    if dt is None:
        dt = dx / (1.0 + float(np.abs(flux.df(U)).max()))
    t0, t1 = map(float, t_span)
    n = max(1, int(math.ceil((t1 - t0) / dt - 1e-9)))
    times = np.linspace(t0, t1, n + 1)
    h = (t1 - t0) / n
    fp = flux.df
    X = x_grid.copy()
    Xs = np.empty((n + 1, X.size))
    Us = np.empty_like(Xs)
    Xs[0], Us[0] = X, U
    for k in range(n):
        t = times[k]
        a1, b1 = fp(U), src(t, X)
        a2, b2 = fp(U + h / 2 * b1), src(t + h / 2, X + h / 2 * a1)
        a3, b3 = fp(U + h / 2 * b2), src(t + h / 2, X + h / 2 * a2)
        a4, b4 = fp(U + h * b3), src(t + h, X + h * a3)
        X = X + h / 6 * (a1 + 2 * a2 + 2 * a3 + a4)
        U = U + h / 6 * (b1 + 2 * b2 + 2 * b3 + b4)
        if np.any(np.diff(X) <= slack) or not np.all(np.isfinite(X)):
            raise CharacteristicCrossing(float(times[k + 1]))
        Xs[k + 1], Us[k + 1] = X, U

    lo, hi = Xs[:, 0].max(), Xs[:, -1].min()
    tol = 1e-12 * (x_grid[-1] - x_grid[0])
    keep = (x_grid >= lo - tol) & (x_grid <= hi + tol)
    if keep.sum() < 2:
        raise ValueError("characteristics leave no common x-range; shorten t_span")
    if not np.all(keep):
        warnings.warn(
            f"characteristics exit the rectangle; x-range clipped to [{x_grid[keep][0]:.6g}, {x_grid[keep][-1]:.6g}]",
            DomainClipWarning, stacklevel=2,
        )
    xg = x_grid[keep]
    u = np.vstack([np.interp(xg, Xs[k], Us[k]) for k in range(n + 1)])
    if g_inf is None:
        g_inf = float(np.abs(src(times[:, None], xg[None, :])).max())
    return SolutionField(times, xg, u, flux, g=src, breaks=tuple(breaks), g_inf=g_inf, name="solved")


# -- weak residual ---------------------------------------------------------------

_BUMP_MASS = 32.0 / 35.0  # integral of (1 - s^2)^3 over [-1, 1]


def _bump(s):
    return (1.0 - s * s) ** 3


def _dbump(s):
    return -6.0 * s * (1.0 - s * s) ** 2


def _axis_breakpoints(lo, hi, grid, exact: bool, panels: int, extra: Sequence[float]):
    if exact:
        pts = list(np.linspace(lo, hi, panels + 1))
    else:
        inner = grid[(grid > lo) & (grid < hi)]
        pts = [lo, *inner, hi]
    pts += [b for b in extra if lo < b < hi]
    return np.array(pts)


def weak_residuals(field: SolutionField, test_count: int = 50, seed: int = 0, *, order: int = 5, panels: int = 48,
                   width: tuple[float, float] = (0.03, 0.1)) -> np.ndarray:
    """Normalized weak-form residuals for a seeded family of polynomial bumps.

    Each test function is ``(1 - s^2)^3 (1 - r^2)^3`` on a random sub-rectangle
    strictly inside the field (half-widths a fraction ``width`` of the spans).
    For every bump the value ``|int (u psi_t + f(u) psi_x + g psi)| / ||psi||_1``
    is computed with composite Gauss-Legendre quadrature whose panels follow
    the grid lines (bilinear fields, so the quadrature is exact for the
    interpolant) or a uniform ``panels``-split (exact fields), plus the
    declared break lines.
    """
    rng = np.random.default_rng(seed)
    t0, t1 = field.t_span
    x0, x1 = field.x_span
    Lt, Lx = t1 - t0, x1 - x0
    exact = field.exact is not None
    f = field.flux.f
    out = np.empty(test_count)
    for k in range(test_count):
        at = Lt * rng.uniform(*width)
        ax = Lx * rng.uniform(*width)
        tc = rng.uniform(t0 + at, t1 - at)
        xc = rng.uniform(x0 + ax, x1 - ax)
        tb = _axis_breakpoints(tc - at, tc + at, field.t_grid, exact, panels, ())
        xb = _axis_breakpoints(xc - ax, xc + ax, field.x_grid, exact, panels, field.all_breaks)
        T, wt = gauss_panels(tb, order)
        X, wx = gauss_panels(xb, order)
        st, sx = (T - tc) / at, (X - xc) / ax
        bt, bx = _bump(st), _bump(sx)
        dbt, dbx = _dbump(st) / at, _dbump(sx) / ax
        U = field(T[:, None], X[None, :])
        G = field.source(T[:, None], X[None, :])
        integrand = U * (dbt[:, None] * bx[None, :]) + f(U) * (bt[:, None] * dbx[None, :]) + G * (bt[:, None] * bx[None, :])
        val = wt @ integrand @ wx
        out[k] = abs(val) / (at * ax * _BUMP_MASS**2)
    return out


def weak_residual(field: SolutionField, test_count: int = 50, seed: int = 0, **kwargs) -> float:
    """Maximum normalized weak residual over the bump family (see :func:`weak_residuals`)."""
    return float(weak_residuals(field, test_count, seed, **kwargs).max())


# -- analytic library --------------------------------------------------------------


def _sgn_sqrt(t, x):
    return np.sign(x) * np.sqrt(np.abs(x))


def _sgn(t, x):
    return np.sign(x) * np.ones(np.broadcast(t, x).shape)


_DEFAULTS = {
    "example33": dict(t_span=(-1.0, 1.0), x_span=(-4.0, 4.0), nt=201, nx=8001),
    "linear_decay": dict(t_span=(0.0, 1.0), x_span=(-1.0, 1.0), nt=501, nx=1001),
    "uniform_source": dict(t_span=(0.0, 1.0), x_span=(-1.0, 1.0), nt=501, nx=1001),
    "constant": dict(t_span=(0.0, 1.0), x_span=(-1.0, 1.0), nt=101, nx=1001),
}
ANALYTIC_FIELDS = tuple(_DEFAULTS)


def _flux_for(coeffs, order, lo, hi, name):
    span = hi - lo
    return FluxModel.polynomial(coeffs, (lo - span - 1.0, hi + span + 1.0), order, name=name)


def analytic_library(
    name: str,
    *,
    nt: int | None = None,
    nx: int | None = None,
    t_span: tuple[float, float] | None = None,
    x_span: tuple[float, float] | None = None,
    c: float = 1.0,
    flux: FluxModel | None = None,
    interpolation: str = "exact",
) -> SolutionField:
    """Closed-form solutions sampled on a requested grid.

    ``example33``
        ``u = sgn(x) sqrt|x|`` with ``f(u) = u**2`` and ``g = sgn x``.
    ``linear_decay``
        ``u = x / (1 + t)``, ``f = u**2 / 2``, ``g = 0``.
    ``uniform_source``
        ``u = t``, ``f = u**2 / 2``, ``g = 1``.
    ``constant``
        ``u = c`` for any flux (Burgers by default), ``g = 0``.

    ``interpolation="bilinear"`` drops the closed form and keeps only the
    node values, which is what a sampled or imported field would carry.
    """
    if name not in _DEFAULTS:
        raise ValueError(f"unknown analytic field {name!r}; expected one of {ANALYTIC_FIELDS}")
    if interpolation not in ("exact", "bilinear"):
        raise ValueError("interpolation must be 'exact' or 'bilinear'")
    d = _DEFAULTS[name]
    t_span = tuple(map(float, t_span or d["t_span"]))
    x_span = tuple(map(float, x_span or d["x_span"]))
    t = np.linspace(*t_span, nt or d["nt"])
    x = np.linspace(*x_span, nx or d["nx"])
    T, X = np.meshgrid(t, x, indexing="ij")

    breaks: tuple[float, ...] = ()
    g_breaks: tuple[float, ...] = ()
    if name == "example33":
        exact = _sgn_sqrt
        g = _sgn
        breaks = g_breaks = (0.0,)
        lim = math.sqrt(max(abs(x_span[0]), abs(x_span[1])))
        fl = flux or _flux_for((0.0, 0.0, 1.0), 2, -lim, lim, "square")
        g_inf = 1.0
    elif name == "linear_decay":
        def exact(t, x):
            return x / (1.0 + t)
        g, g_inf = 0.0, 0.0
        if t_span[0] <= -1.0:
            raise ValueError("linear_decay needs t > -1")
        lim = max(abs(x_span[0]), abs(x_span[1])) / (1.0 + t_span[0])
        fl = flux or _flux_for((0.0, 0.0, 0.5), 2, -lim, lim, "burgers")
    elif name == "uniform_source":
        def exact(t, x):
            return t + 0.0 * x
        g, g_inf = 1.0, 1.0
        fl = flux or _flux_for((0.0, 0.0, 0.5), 2, t_span[0], t_span[1], "burgers")
    else:
        def exact(t, x, c=float(c)):
            return np.full(np.broadcast(t, x).shape, c)
        g, g_inf = 0.0, 0.0
        fl = flux or _flux_for((0.0, 0.0, 0.5), 2, c - 1.0, c + 1.0, "burgers")

    u = np.asarray(exact(T, X), dtype=float)
    return SolutionField(
        t, x, u, fl, g=g, breaks=breaks, g_breaks=g_breaks,
        exact=exact if interpolation == "exact" else None,
        g_inf=g_inf, name=name,
    )


# -- CSV ---------------------------------------------------------------------------


def write_field_csv(field: SolutionField, path) -> Path:
    """Write ``t,x,u,g`` rows, row-major by t then x."""
    path = Path(path)
    G = field.source_nodes()
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "x", "u", "g"])
        for i, t in enumerate(field.t_grid):
            for j, x in enumerate(field.x_grid):
                w.writerow([repr(float(t)), repr(float(x)), repr(float(field.u[i, j])), repr(float(G[i, j]))])
    return path


def _read_grid_csv(path, cols: tuple[str, str, str, str]):
    data = np.genfromtxt(path, delimiter=",", names=True, dtype=float)
    names = data.dtype.names
    if names is None or tuple(names) != cols:
        raise ValueError(f"{path}: expected header {','.join(cols)}, got {names}")
    a = np.unique(data[cols[0]])
    b = np.unique(data[cols[1]])
    if a.size * b.size != data.size:
        raise ValueError(f"{path}: rows do not form a full tensor grid")
    order = np.lexsort((data[cols[1]], data[cols[0]]))
    data = data[order]
    shape = (a.size, b.size)
    return a, b, data[cols[2]].reshape(shape), data[cols[3]].reshape(shape)


def read_field_csv(path, flux: FluxModel | None = None, name: str | None = None) -> SolutionField:
    """Read a field written by :func:`write_field_csv`; interpolation is bilinear."""
    t, x, u, g = _read_grid_csv(path, ("t", "x", "u", "g"))
    if flux is None:
        lo, hi = float(u.min()), float(u.max())
        flux = builtin_flux("burgers", (lo - (hi - lo) - 1.0, hi + (hi - lo) + 1.0))
    return SolutionField(t, x, u, flux, g=g, name=name or Path(path).stem)
