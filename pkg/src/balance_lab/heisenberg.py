"""First Heisenberg group, intrinsic graphs over ``W = {x = 0}`` and their differentiability.

Points are ``P = (x, y, t)`` with ``z = x + iy``. The product is

    P . Q = (x + x', y + y', t + t' - Im(z * conj(z')) / 2),

with ``Im(z conj(z')) = x' y - x y'``. This sign convention is fixed in
:data:`PAIRING_SIGN` and reproduces ``[X, Y] = T`` for
``X = d_x - y/2 d_t`` and ``Y = d_y + x/2 d_t``.

A graph surface is a function ``phi(y, t)`` on a rectangle of ``W``. It is
intrinsic Lipschitz exactly when ``phi_y + (phi**2 / 2)_t = g`` with ``g``
bounded, so ``y`` plays the evolution variable and ``t`` the state variable
of a Burgers-type balance law; :meth:`GraphSurface.as_field` performs that
swap.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .flux import builtin_flux
from .solver import SolutionField, _read_grid_csv, weak_residual

__all__ = [
    "PAIRING_SIGN",
    "HPoint",
    "group_mul",
    "group_inv",
    "dilate",
    "norm_inf",
    "dist_inf",
    "left_invariant_fields",
    "bracket_xy",
    "GraphSurface",
    "surface_library",
    "d_phi",
    "intrinsic_lip_constant",
    "quasi_triangle_constant",
    "graph_balance_residual",
    "RademacherTable",
    "rademacher_residual",
    "write_surface_csv",
    "read_surface_csv",
]

# t-part of P.Q is t + t' + PAIRING_SIGN * (x' y - x y') / 2
PAIRING_SIGN = -1.0


# -- group primitives, vectorized over a trailing axis of length 3 ---------------


def _xyz(P):
    P = np.asarray(P, dtype=float)
    return P[..., 0], P[..., 1], P[..., 2]


def group_mul(P, Q) -> np.ndarray:
    """Group product of arrays of points (last axis ``(x, y, t)``)."""
    x, y, t = _xyz(P)
    xp, yp, tp = _xyz(Q)
    return np.stack([x + xp, y + yp, t + tp + PAIRING_SIGN * 0.5 * (xp * y - x * yp)], axis=-1)


def group_inv(P) -> np.ndarray:
    return -np.asarray(P, dtype=float)


def dilate(P, r: float) -> np.ndarray:
    x, y, t = _xyz(P)
    return np.stack([r * x, r * y, r * r * t], axis=-1)


def norm_inf(P) -> np.ndarray:
    """Homogeneous norm ``max(|z|, |t|**(1/2))``."""
    x, y, t = _xyz(P)
    return np.maximum(np.hypot(x, y), np.sqrt(np.abs(t)))


def dist_inf(P, Q) -> np.ndarray:
    """Left-invariant distance ``||P^-1 . Q||``."""
    return norm_inf(group_mul(group_inv(P), Q))


def left_invariant_fields(P, h: float = 1e-6) -> np.ndarray:
    """Rows ``X(P), Y(P)``: derivatives of ``s -> P . (s e_x)`` and ``s -> P . (s e_y)`` at 0."""
    P = np.asarray(P, dtype=float)
    rows = []
    for e in (np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0])):
        rows.append((group_mul(P, h * e) - group_mul(P, -h * e)) / (2 * h))
    return np.stack(rows)


def bracket_xy(P, h: float = 1e-4) -> np.ndarray:
    """``[X, Y](P) = DY(P) X(P) - DX(P) Y(P)`` with Jacobians by central differences."""
    P = np.asarray(P, dtype=float)

    def jac(k):
        J = np.empty((3, 3))
        for j in range(3):
            e = np.zeros(3)
            e[j] = h
            J[:, j] = (left_invariant_fields(P + e)[k] - left_invariant_fields(P - e)[k]) / (2 * h)
        return J

    X, Y = left_invariant_fields(P)
    return jac(1) @ X - jac(0) @ Y


@dataclass(frozen=True)
class HPoint:
    """A point ``[x + iy, t]`` of the group."""

    x: float
    y: float
    t: float

    def __array__(self, dtype=None, copy=None):
        return np.array([self.x, self.y, self.t], dtype=dtype or float)

    @classmethod
    def of(cls, a) -> "HPoint":
        x, y, t = (float(v) for v in np.asarray(a, dtype=float))
        return cls(x, y, t)

    def __mul__(self, other: "HPoint") -> "HPoint":
        return HPoint.of(group_mul(np.asarray(self), np.asarray(other)))

    def inverse(self) -> "HPoint":
        return HPoint(-self.x, -self.y, -self.t)

    def dilate(self, r: float) -> "HPoint":
        return HPoint(r * self.x, r * self.y, r * r * self.t)

    def norm(self) -> float:
        return float(norm_inf(np.asarray(self)))

    def dist(self, other: "HPoint") -> float:
        return float(dist_inf(np.asarray(self), np.asarray(other)))


IDENTITY = HPoint(0.0, 0.0, 0.0)


# -- graph surfaces ------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GraphSurface:
    """``phi`` on a rectangle ``omega`` of ``W``, with nodes ``phi[i, j] = phi(y_i, t_j)``.

    ``g`` is the source of ``phi_y + (phi**2/2)_t = g`` (node values or a
    callable ``g(y, t)``); ``t_breaks`` lists ``t``-lines where ``phi`` or
    ``g`` is not smooth.
    """

    y_grid: np.ndarray
    t_grid: np.ndarray
    phi: np.ndarray
    g: np.ndarray | Callable = 0.0
    t_breaks: tuple[float, ...] = ()
    exact: Callable | None = None
    lip_const: float | None = None
    g_inf: float | None = None
    name: str = "surface"

    @cached_property
    def field(self) -> SolutionField:
        """The same data as a balance-law field: evolution variable ``y``, state variable ``t``."""
        phi = np.asarray(self.phi, dtype=float)
        lo, hi = float(phi.min()), float(phi.max())
        flux = builtin_flux("burgers", (lo - (hi - lo) - 1.0, hi + (hi - lo) + 1.0))
        return SolutionField(
            self.y_grid, self.t_grid, phi, flux, g=self.g, breaks=self.t_breaks,
            exact=self.exact, g_inf=self.g_inf, name=self.name,
        )

    def as_field(self) -> SolutionField:
        return self.field

    @classmethod
    def from_field(cls, field: SolutionField) -> "GraphSurface":
        """Read a Burgers-flux field as a surface (``t -> y``, ``x -> t``)."""
        if field.flux.coeffs is None or tuple(field.flux.coeffs[:3]) != (0.0, 0.0, 0.5) or len(field.flux.coeffs) > 3:
            raise ValueError("only fields with flux u**2/2 describe intrinsic graphs")
        return cls(field.t_grid, field.x_grid, field.u, field.g, field.all_breaks, field.exact,
                   g_inf=field.g_inf, name=field.name)

    def __call__(self, y, t) -> np.ndarray:
        return self.field(y, t)

    def source(self, y, t) -> np.ndarray:
        return self.field.source(y, t)

    @property
    def y_span(self):
        return self.field.t_span

    @property
    def t_span(self):
        return self.field.x_span

    def contains(self, y, t) -> np.ndarray:
        return self.field.contains(y, t)

    @property
    def diameter(self) -> float:
        (y0, y1), (t0, t1) = self.y_span, self.t_span
        return (y1 - y0) + math.sqrt(t1 - t0)

    def verify_lip_const(self, pairs: int = 5000, seed: int = 0) -> bool:
        if self.lip_const is None:
            raise ValueError("no Lipschitz constant declared")
        return intrinsic_lip_constant(self, pairs, 1e-3, seed) <= self.lip_const * (1 + 1e-12)


def _sqrt_profile(y, t):
    return np.sign(t) * np.sqrt(2.0 * np.abs(t)) + 0.0 * y


def _sgn_t(y, t):
    return np.sign(t) + 0.0 * y


def surface_library(
    name: str,
    *,
    ny: int = 401,
    nt: int = 401,
    y_span=(-1.0, 1.0),
    t_span=(-1.0, 1.0),
    w: float = 1.0,
) -> GraphSurface:
    """Closed-form intrinsic graphs.

    ``linear``  ``phi = w y`` with ``g = w``;
    ``sqrt``    ``phi = sgn(t) sqrt(2|t|)`` with ``g = sgn t``;
    ``zero``    ``phi = 0`` with ``g = 0``.
    """
    y = np.linspace(*y_span, ny)
    t = np.linspace(*t_span, nt)
    Y, T = np.meshgrid(y, t, indexing="ij")
    if name == "linear":
        def exact(yy, tt, w=float(w)):
            return w * yy + 0.0 * tt
        g, breaks, g_inf = float(w), (), abs(float(w))
    elif name == "sqrt":
        exact, g, breaks, g_inf = _sqrt_profile, _sgn_t, (0.0,), 1.0
    elif name == "zero":
        def exact(yy, tt):
            return 0.0 * yy + 0.0 * tt
        g, breaks, g_inf = 0.0, (), 0.0
    else:
        raise ValueError(f"unknown surface {name!r}; expected linear, sqrt or zero")
    return GraphSurface(y, t, exact(Y, T), g, breaks, exact, g_inf=g_inf, name=name)


def d_phi(surface: GraphSurface, A, B) -> np.ndarray:
    """Graph quasidistance ``|y - y'| + |t' - t - (phi(A) + phi(B)) (y' - y) / 2|**(1/2)``.

    ``A`` and ``B`` are ``(y, t)`` pairs or arrays with a trailing axis of length 2.
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    y, t = A[..., 0], A[..., 1]
    yp, tp = B[..., 0], B[..., 1]
    pa, pb = surface(y, t), surface(yp, tp)
    return _d_phi_values(y, t, pa, yp, tp, pb)


def _d_phi_values(y, t, pa, yp, tp, pb):
    return np.abs(y - yp) + np.sqrt(np.abs(tp - t - 0.5 * (pa + pb) * (yp - y)))


def _random_points(surface: GraphSurface, rng, n):
    (y0, y1), (t0, t1) = surface.y_span, surface.t_span
    return rng.uniform(y0, y1, n), rng.uniform(t0, t1, n)


def intrinsic_lip_constant(surface: GraphSurface, pair_count: int = 20000, min_sep: float = 1e-3, seed: int = 0) -> float:
    """Sampled ``sup |phi(A) - phi(B)| / d_phi(A, B)``.

    Half of the pairs are uniform in ``omega``. The other half put ``B`` on
    the "horizontal" line through ``A``, choosing ``t'`` by fixed-point
    iteration so that the square-root term of ``d_phi`` vanishes; that is
    where the quotient is largest for graphs close to ``W``-linear ones.
    Pairs with ``d_phi < min_sep * diameter`` are skipped.
    """
    rng = np.random.default_rng(seed)
    n1 = pair_count // 2
    n2 = pair_count - n1
    ya, ta = _random_points(surface, rng, n1)
    yb, tb = _random_points(surface, rng, n1)

    yc, tc = _random_points(surface, rng, n2)
    (y0, y1), (t0, t1) = surface.y_span, surface.t_span
    yd = np.clip(yc + rng.uniform(-0.25, 0.25, n2) * (y1 - y0), y0, y1)
    pc = surface(yc, tc)
    td = tc.copy()
    for _ in range(30):
        pd = surface(yd, np.clip(td, t0, t1))
        td = tc + 0.5 * (pc + pd) * (yd - yc)
    keep = (td >= t0) & (td <= t1)

    Ay = np.concatenate([ya, yc[keep]])
    At = np.concatenate([ta, tc[keep]])
    By = np.concatenate([yb, yd[keep]])
    Bt = np.concatenate([tb, td[keep]])
    pa, pb = surface(Ay, At), surface(By, Bt)
    d = _d_phi_values(Ay, At, pa, By, Bt, pb)
    ok = d >= min_sep * surface.diameter
    if not ok.any():
        return 0.0
    return float(np.max(np.abs(pa - pb)[ok] / d[ok]))


def quasi_triangle_constant(surface: GraphSurface, triple_count: int = 20000, seed: int = 0) -> float:
    """Empirical ``max d(A, C) / (d(A, B) + d(B, C))`` over seeded triples (reported, not asserted)."""
    rng = np.random.default_rng(seed)
    pts = [np.stack(_random_points(surface, rng, triple_count), axis=-1) for _ in range(3)]
    A, B, C = pts
    dac = d_phi(surface, A, C)
    den = d_phi(surface, A, B) + d_phi(surface, B, C)
    ok = den > 0
    return float(np.max(dac[ok] / den[ok]))


def graph_balance_residual(surface: GraphSurface, bump_count: int = 50, seed: int = 0, **kwargs) -> float:
    """Weak residual of ``phi_y + (phi**2/2)_t = g``, computed on the swapped field."""
    return weak_residual(surface.field, bump_count, seed, **kwargs)


# -- intrinsic differentiability -----------------------------------------------------


@dataclass(frozen=True)
class RademacherTable:
    point: tuple[float, float]
    w_hat: float
    scales: tuple[float, ...]
    residuals: np.ndarray
    counts: np.ndarray
    tol: float

    def row_passes(self) -> list[bool]:
        return [bool(r <= self.tol) for r in self.residuals]

    @property
    def passed(self) -> bool:
        """Residual at the smallest available scale is below ``tol``."""
        ok = ~np.isnan(self.residuals)
        if not ok.any():
            return False
        i = int(np.argmin(np.where(ok, self.scales, np.inf)))
        return bool(self.residuals[i] <= self.tol)

    def rows(self):
        for s, r, p in zip(self.scales, self.residuals, self.row_passes()):
            yield float(s), float(r), p


def _probe_points(surface: GraphSurface, A0, scales, n: int):
    y0, t0 = A0
    p0 = float(surface(y0, t0))
    ys, ts = [], []
    for s in scales:
        dy = np.linspace(-s, s, 2 * n + 1)
        eta = np.linspace(-2 * s * s, 2 * s * s, 2 * n + 1)
        DY, ETA = np.meshgrid(dy, eta, indexing="ij")
        ys.append((y0 + DY).ravel())
        ts.append((t0 + p0 * DY + ETA).ravel())
        # the t-axis through A0 at finer resolution
        tt = t0 + np.linspace(-s * s, s * s, 4 * n + 1)
        ys.append(np.full_like(tt, y0))
        ts.append(tt)
    return np.concatenate(ys), np.concatenate(ts)


def rademacher_residual(
    surface: GraphSurface,
    A0,
    scales: Sequence[float] = (0.2, 0.1, 0.05, 0.025),
    *,
    tol: float = 0.1,
    w_hat: float | None = None,
    probe: int = 40,
) -> RademacherTable:
    """``R(s) = max |phi(A) - phi(A0) - w_hat (y - y0)| / d_phi(A0, A)`` over ``0 < d_phi <= s``.

    ``w_hat`` defaults to ``g(A0)``; pass it explicitly to declare the
    Lebesgue value of a discontinuous source. Points ``A`` are the surface
    nodes for sampled surfaces; closed-form surfaces are probed on a sheared
    local grid adapted to each scale (the union over all scales is used for
    every ``s``, so ``R`` is monotone in ``s``).
    """
    y0, t0 = map(float, A0)
    if not bool(surface.contains(y0, t0)):
        raise ValueError("A0 outside the surface domain")
    w = float(surface.source(y0, t0)) if w_hat is None else float(w_hat)
    if surface.exact is not None:
        Y, T = _probe_points(surface, (y0, t0), scales, probe)
    else:
        Yg, Tg = np.meshgrid(surface.y_grid, surface.t_grid, indexing="ij")
        Y, T = Yg.ravel(), Tg.ravel()
    inside = surface.contains(Y, T)
    Y, T = Y[inside], T[inside]
    p0 = float(surface(y0, t0))
    P = surface(Y, T)
    d = _d_phi_values(y0, t0, p0, Y, T, P)
    num = np.abs(P - p0 - w * (Y - y0))
    res, cnt = [], []
    for s in scales:
        m = (d > 0) & (d <= s)
        cnt.append(int(m.sum()))
        res.append(float(np.max(num[m] / d[m])) if m.any() else math.nan)
    return RademacherTable((y0, t0), w, tuple(map(float, scales)), np.array(res), np.array(cnt), float(tol))


# -- CSV -------------------------------------------------------------------------------


def write_surface_csv(surface: GraphSurface, path) -> Path:
    """``y,t,phi,g`` rows, row-major by y then t."""
    path = Path(path)
    f = surface.field
    G = f.source_nodes()
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["y", "t", "phi", "g"])
        for i, y in enumerate(surface.y_grid):
            for j, t in enumerate(surface.t_grid):
                w.writerow([repr(float(y)), repr(float(t)), repr(float(f.u[i, j])), repr(float(G[i, j]))])
    return path


def read_surface_csv(path, name: str | None = None) -> GraphSurface:
    y, t, phi, g = _read_grid_csv(path, ("y", "t", "phi", "g"))
    return GraphSurface(y, t, phi, g, name=name or Path(path).stem)
