"""Tilted covering regions along characteristics and a covering Lebesgue-point test.

A region ``S(gamma, eps, sigma)`` with width coefficient ``rho`` is the set

    |t - sigma| <= eps,   |x - gamma(t)| <= rho * eps**l,

a rectangle sheared along the characteristic ``gamma`` through
``(sigma, x0)``. Its area is exactly ``4 rho eps**(l+1)``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .quadrature import slice_integrals, trapezoid
from .solver import Characteristic, SolutionField, trace_characteristics
from ._parallel import thread_count

__all__ = [
    "CoveringRegion",
    "RegionError",
    "LebesgueTable",
    "DEFAULT_RHOS",
    "DEFAULT_EPSILONS",
    "centre_curve",
    "make_region",
    "region_area",
    "average_over",
    "lebesgue_point_test",
]

DEFAULT_RHOS = (1.0, 0.5, 0.25, 0.125)
DEFAULT_EPSILONS = tuple(0.2 * 2.0**-k for k in range(6))


class RegionError(ValueError):
    """The centre characteristic could not be traced over the full time span."""


@dataclass(frozen=True, eq=False)
class CoveringRegion:
    gamma: Characteristic
    sigma: float
    eps: float
    rho: float
    ell: int

    @property
    def half_width(self) -> float:
        return self.rho * self.eps**self.ell

    @property
    def area(self) -> float:
        return 4.0 * self.rho * self.eps ** (self.ell + 1)

    @property
    def center(self) -> tuple[float, float]:
        return self.gamma.start

    def bounds(self, t) -> tuple[np.ndarray, np.ndarray]:
        c = self.gamma(t)
        w = self.half_width
        return c - w, c + w

    def contains(self, t, x, tol: float = 1e-12) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        x = np.asarray(x, dtype=float)
        inside_t = np.abs(t - self.sigma) <= self.eps * (1 + tol)
        tc = np.clip(t, self.sigma - self.eps, self.sigma + self.eps)
        return inside_t & (np.abs(x - self.gamma(tc)) <= self.half_width * (1 + tol) + tol)


def centre_curve(field: SolutionField, sigma: float, x0: float, eps: float, dt: float | None = None) -> Characteristic:
    """Characteristic through ``(sigma, x0)`` on ``[sigma - eps, sigma + eps]`` (backward and forward traces joined)."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    step = field.default_step() if dt is None else float(dt)
    n = max(4, int(math.ceil(eps / step)))
    step = eps / n
    if not bool(field.contains(sigma, x0)):
        raise RegionError("centre outside the field")
    t0, t1 = field.t_span
    if sigma - eps < t0 - 1e-12 or sigma + eps > t1 + 1e-12:
        raise RegionError(f"time span [{sigma - eps}, {sigma + eps}] leaves the field")
    back = trace_characteristics(field, sigma, [x0], sigma - eps, step)[0]
    fwd = trace_characteristics(field, sigma, [x0], sigma + eps, step)[0]
    if back.exited or fwd.exited:
        raise RegionError("centre characteristic leaves the field before sigma +/- eps")
    cat = lambda a, b: np.concatenate([a[:-1], b])  # noqa: E731
    return Characteristic(
        times=cat(back.times, fwd.times), positions=cat(back.positions, fwd.positions),
        values=cat(back.values, fwd.values), slopes=cat(back.slopes, fwd.slopes),
        step=step, start=(float(sigma), float(x0)),
    )


def make_region(
    field: SolutionField,
    sigma: float,
    x0: float,
    eps: float,
    rho: float,
    ell: int | None = None,
    dt: float | None = None,
    gamma: Characteristic | None = None,
) -> CoveringRegion:
    """Region of half-height ``eps`` and half-width ``rho * eps**ell`` around the characteristic through ``(sigma, x0)``.

    ``gamma`` reuses a curve from :func:`centre_curve` with the same centre and ``eps``.
    """
    if eps <= 0 or rho <= 0:
        raise ValueError("eps and rho must be positive")
    ell = field.flux.order if ell is None else int(ell)
    if gamma is None:
        gamma = centre_curve(field, sigma, x0, eps, dt)
    region = CoveringRegion(gamma, float(sigma), float(eps), float(rho), ell)
    lo, hi = region.bounds(gamma.times)
    if not np.all(field.contains(gamma.times, lo) & field.contains(gamma.times, hi)):
        raise RegionError("region leaves the field rectangle")
    return region


def _slices(region: CoveringRegion, n_slices: int):
    return np.linspace(region.sigma - region.eps, region.sigma + region.eps, n_slices + 1)


def region_area(region: CoveringRegion, n_slices: int = 64) -> float:
    """Area of the region by the same slice quadrature used for averages."""
    times = _slices(region, n_slices)
    lo, hi = region.bounds(times)
    F, _ = slice_integrals(lambda t, x: np.ones_like(x), times, lo, hi, 2)
    return trapezoid(F, times)


def average_over(
    q: Callable | SolutionField,
    region: CoveringRegion,
    c: float | None = None,
    *,
    breaks: Sequence[float] = (),
    n_slices: int = 64,
    n_x: int = 16,
) -> tuple[float, float | None]:
    """Mean of ``q`` over the region and, if ``c`` is given, the mean of ``|q - c|``.

    ``q`` is a vectorized callable ``q(t, x)`` or a field (its ``u``). Slices
    use composite Simpson in ``x`` split at ``breaks`` and the trapezoid
    rule in ``t``.
    """
    if isinstance(q, SolutionField):
        breaks = tuple(breaks) + q.all_breaks
    times = _slices(region, n_slices)
    lo, hi = region.bounds(times)
    area = region_area(region, n_slices)
    F, _ = slice_integrals(q, times, lo, hi, n_x, breaks)
    mean = trapezoid(F, times) / area
    if c is None:
        return mean, None
    D, _ = slice_integrals(lambda t, x: np.abs(q(t, x) - c), times, lo, hi, n_x, breaks)
    return mean, trapezoid(D, times) / area


@dataclass(frozen=True)
class LebesgueTable:
    """Mean deviations indexed by ``(rho, eps)``; NaN marks an absent cell."""

    rhos: tuple[float, ...]
    epss: tuple[float, ...]
    deviations: np.ndarray  # shape (len(rhos), len(epss))
    tol: float
    point: tuple[float, float]

    def column_passes(self) -> list[bool]:
        out = []
        for row in self.deviations:
            ok = ~np.isnan(row)
            if not ok.any():
                out.append(False)
                continue
            smallest = int(np.argmin(np.where(ok, np.asarray(self.epss), np.inf)))
            out.append(bool(row[smallest] <= self.tol))
        return out

    @property
    def passed(self) -> bool:
        return all(self.column_passes())

    def rows(self):
        passes = self.column_passes()
        for i, rho in enumerate(self.rhos):
            for j, eps in enumerate(self.epss):
                yield rho, eps, float(self.deviations[i, j]), passes[i]


def lebesgue_point_test(
    field: SolutionField,
    q: Callable | SolutionField,
    t: float,
    x: float,
    rhos: Sequence[float] = DEFAULT_RHOS,
    epss: Sequence[float] = DEFAULT_EPSILONS,
    *,
    tol: float = 1e-3,
    breaks: Sequence[float] = (),
    ell: int | None = None,
    reference: float | None = None,
) -> LebesgueTable:
    """Table of mean ``|q - q(t, x)|`` over regions centred at ``(t, x)``.

    A column (fixed ``rho``) passes when its value at the smallest available
    ``eps`` is below ``tol``. ``reference`` overrides ``q(t, x)``, which is
    how a declared Lebesgue value is supplied at a jump.
    """
    c = float(q(t, x)) if reference is None else float(reference)

    # the centre curve depends on eps only, so each column of eps is traced once
    def run(j_eps):
        j, eps = j_eps
        out = []
        try:
            gamma = centre_curve(field, t, x, eps)
        except RegionError:
            return out
        for i, rho in enumerate(rhos):
            try:
                region = make_region(field, t, x, eps, rho, ell, gamma=gamma)
            except RegionError:
                continue
            out.append((i, j, average_over(q, region, c, breaks=breaks)[1]))
        return out

    dev = np.full((len(rhos), len(epss)), np.nan)
    with ThreadPoolExecutor(max_workers=thread_count()) as pool:
        for cells in pool.map(run, enumerate(epss)):
            for i, j, v in cells:
                dev[i, j] = v
    return LebesgueTable(tuple(map(float, rhos)), tuple(map(float, epss)), dev, float(tol), (float(t), float(x)))
