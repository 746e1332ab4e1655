"""Flux functions and the calculus of finite-order nonlinearity.

A flux ``f`` is *nonlinear of order l on I with constant c* when

    |f(v + h) - f(v) - f'(v) h| >= c |h|**l      for all v, v + h in I.

The constant is computed here by brute-force grid scans, never from a
Taylor-type sufficient condition: lower-order terms can cancel (``u**3``
around ``v = -h/3``), and only the scan sees that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, NamedTuple, Sequence

import numpy as np
from numpy.polynomial import Polynomial
from scipy import optimize

__all__ = [
    "ABS_TOL",
    "REL_TOL",
    "FluxModel",
    "IntervalStats",
    "PointOrder",
    "SeparationReport",
    "DegenerateFluxError",
    "InflectionError",
    "UnsupportedOrderError",
    "builtin_flux",
    "nonlinearity_constant",
    "pointwise_nonlinearity_constant",
    "min_order_at_point",
    "inflection_zeros",
    "convexity_ratio_q",
    "check_fprime_separation",
]

ABS_TOL = 1e-9
REL_TOL = 1e-6

ScalarFn = Callable[[np.ndarray], np.ndarray]


class DegenerateFluxError(ValueError):
    """f'' vanishes identically on part of the interval (a linear piece)."""


class InflectionError(ValueError):
    """The requested interval contains a zero of f''."""


class UnsupportedOrderError(ValueError):
    """Derivatives beyond f'' were requested from a flux that does not provide them."""


def _interval(iv: Sequence[float]) -> tuple[float, float]:
    a, b = (float(v) for v in iv)
    if not a < b:
        raise ValueError(f"degenerate interval [{a}, {b}]")
    return a, b


@dataclass(frozen=True, eq=False)
class FluxModel:
    """A flux with its first two derivatives on a working interval.

    Use :meth:`polynomial` or :func:`builtin_flux` for exact derivatives of
    every order; otherwise supply ``f``, ``df`` and ``d2f`` yourself.
    """

    f: ScalarFn
    df: ScalarFn
    d2f: ScalarFn
    interval: tuple[float, float]
    order: int = 2
    c_ell: float | None = None
    coeffs: tuple[float, ...] | None = None
    name: str = "custom"
    _poly: Polynomial | None = field(default=None, repr=False)

    def __post_init__(self):
        if int(self.order) != self.order or self.order < 2:
            raise ValueError(f"nonlinearity order must be an integer >= 2, got {self.order}")
        object.__setattr__(self, "interval", _interval(self.interval))
        if self.c_ell is not None and self.c_ell < 0:
            raise ValueError("c_ell must be positive")

    @classmethod
    def polynomial(cls, coeffs: Sequence[float], interval, order: int = 2, name: str | None = None):
        """Flux ``sum(coeffs[k] * u**k)`` (ascending degree)."""
        coeffs = tuple(float(c) for c in coeffs)
        p = Polynomial(coeffs)
        dp, d2p = p.deriv(1), p.deriv(2)
        return cls(
            f=p, df=dp, d2f=d2p,
            interval=interval, order=order, coeffs=coeffs,
            name=name or "poly", _poly=p,
        )

    @property
    def is_polynomial(self) -> bool:
        return self._poly is not None

    def derivative(self, k: int) -> ScalarFn:
        """The k-th derivative as a callable (exact for polynomial fluxes)."""
        if k == 0:
            return self.f
        if k == 1:
            return self.df
        if k == 2:
            return self.d2f
        if self._poly is None:
            raise UnsupportedOrderError(f"derivative of order {k} needs a polynomial flux")
        return self._poly.deriv(k)

    def remainder(self, v, h) -> np.ndarray:
        """Signed first-order Taylor remainder ``f(v+h) - f(v) - f'(v) h``.

        For polynomials the remainder is summed from its exact expansion
        ``sum_k f^(k)(v) h^k / k!``, which avoids cancellation for small ``h``.
        """
        v = np.asarray(v, dtype=float)
        h = np.asarray(h, dtype=float)
        if self._poly is None:
            return self.f(v + h) - self.f(v) - self.df(v) * h
        deg = self._poly.degree()
        out = np.zeros(np.broadcast(v, h).shape)
        for k in range(deg, 1, -1):
            ck = self._poly.deriv(k)(v) / math.factorial(k)
            out = (out + ck) * h
        return out * h

    def with_nonlinearity_constant(self, n: int = 256) -> "FluxModel":
        """Copy with ``c_ell`` set from :func:`nonlinearity_constant` on the working interval."""
        c = nonlinearity_constant(self, self.order, self.interval, n)
        return replace(self, c_ell=c)

    def verify_constant(self, c: float | None = None, n: int = 128, tol: float = ABS_TOL) -> bool:
        """Check the defining inequality with constant ``c`` on an ``n x n`` grid of pairs."""
        c = self.c_ell if c is None else c
        if c is None:
            raise ValueError("no constant to verify")
        a, b = self.interval
        v = np.linspace(a, b, n)
        V, W = np.meshgrid(v, v, indexing="ij")
        h = W - V
        lhs = np.abs(self.remainder(V, h))
        return bool(np.all(lhs >= (c - tol) * np.abs(h) ** self.order - tol))


_BUILTINS = {
    "burgers": ((0.0, 0.0, 0.5), 2),
    "cubic": ((0.0, 0.0, 0.0, 1.0), 3),
    "quartic": ((0.0, 0.0, 0.0, 0.0, 1.0), 4),
}


def builtin_flux(name: str, interval=(-10.0, 10.0), order: int | None = None) -> FluxModel:
    """``burgers`` (u**2/2), ``cubic`` (u**3) or ``quartic`` (u**4)."""
    try:
        coeffs, default_order = _BUILTINS[name]
    except KeyError:
        raise ValueError(f"unknown builtin flux {name!r}; expected one of {sorted(_BUILTINS)}") from None
    return FluxModel.polynomial(coeffs, interval, order or default_order, name=name)


def _sub_interval(flux: FluxModel, iv) -> tuple[float, float]:
    a, b = _interval(flux.interval if iv is None else iv)
    lo, hi = flux.interval
    span = hi - lo
    if a < lo - 1e-12 * span or b > hi + 1e-12 * span:
        raise ValueError(f"interval [{a}, {b}] is not inside the flux interval [{lo}, {hi}]")
    return a, b


def _has_sign_change(num: np.ndarray, valid: np.ndarray) -> bool:
    """Sign change between neighbours along axis 0 (both entries valid)."""
    both = valid[:-1] & valid[1:]
    prod = num[:-1] * num[1:]
    return bool(np.any(both & (prod < 0)))


def nonlinearity_constant(flux: FluxModel, ell: int, interval=None, n: int = 256) -> float:
    """Infimum of ``|f(v+h) - f(v) - f'(v) h| / |h|**ell`` over a grid of pairs in ``interval``.

    The scanned pairs are all pairs of an ``n``-point uniform grid plus every
    grid point combined with ``n`` log-spaced ``|h|`` down to ``1e-6 |I|``.
    A sign change of the remainder along ``v`` at fixed ``h`` certifies a
    zero, and the result is then exactly ``0.0``. Otherwise the grid minimum is
    polished by a bounded scalar minimisation in ``v``.

    Examples
    --------
    >>> nonlinearity_constant(builtin_flux("burgers"), 2, (-1, 1))
    0.5
    """
    if ell < 2:
        raise ValueError(f"order must be >= 2, got {ell}")
    if n < 64:
        raise ValueError("grid size must be at least 64")
    a, b = _sub_interval(flux, interval)
    length = b - a
    v = np.linspace(a, b, n)

    # all pairs of the uniform grid; fixed h along the diagonals
    V, W = np.meshgrid(v, v, indexing="ij")
    H = W - V
    num = flux.remainder(V, H)
    off = ~np.eye(n, dtype=bool)
    if np.any(off & (num == 0.0)):
        return 0.0
    diag_prod = num[:-1, :-1] * num[1:, 1:]
    if np.any(off[:-1, :-1] & off[1:, 1:] & (diag_prod < 0)):
        return 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio_u = np.where(off, np.abs(num) / np.abs(H) ** ell, np.inf)
    best = float(ratio_u.min())
    i, j = np.unravel_index(int(ratio_u.argmin()), ratio_u.shape)
    best_v, best_h = v[i], H[i, j]

    # log-spaced |h| down to 1e-6 |I|, both signs
    hs = np.geomspace(1e-6 * length, length, n)
    hs = np.concatenate([-hs[::-1], hs])
    Vl = v[:, None]
    Hl = hs[None, :]
    target = Vl + Hl
    valid = (target >= a) & (target <= b)
    numl = flux.remainder(Vl, Hl)
    if np.any(valid & (numl == 0.0)) or _has_sign_change(numl, valid):
        return 0.0
    ratio_l = np.where(valid, np.abs(numl) / np.abs(Hl) ** ell, np.inf)
    if ratio_l.min() < best:
        best = float(ratio_l.min())
        i, j = np.unravel_index(int(ratio_l.argmin()), ratio_l.shape)
        best_v, best_h = v[i], hs[j]

    # polish in v at the minimising h
    dv = length / (n - 1)
    lo = max(a, a - best_h, best_v - dv)
    hi = min(b, b - best_h, best_v + dv)
    if hi > lo:
        res = optimize.minimize_scalar(
            lambda s: abs(float(flux.remainder(s, best_h))) / abs(best_h) ** ell,
            bounds=(lo, hi), method="bounded", options={"xatol": 1e-12 * length},
        )
        if res.success:
            best = min(best, float(res.fun))
    return best


def pointwise_nonlinearity_constant(flux: FluxModel, v: float, ell: int, radius: float, n: int = 512) -> float:
    """Pointwise version: infimum over ``0 < |h| <= radius`` (inside the flux interval) at fixed ``v``."""
    if ell < 2:
        raise ValueError(f"order must be >= 2, got {ell}")
    a, b = flux.interval
    hs = np.geomspace(1e-6 * radius, radius, n)
    hs = np.concatenate([-hs, hs])
    hs = hs[(v + hs >= a) & (v + hs <= b)]
    if hs.size == 0:
        raise ValueError("no admissible increments")
    return float((np.abs(flux.remainder(v, hs)) / np.abs(hs) ** ell).min())


class PointOrder(NamedTuple):
    """Order of the first non-vanishing derivative beyond the first.

    ``order`` is ``None`` when every derivative up to the requested maximum
    vanishes. ``approximate`` marks finite-difference derivatives.
    """

    order: int | None
    constant: float
    approximate: bool = False


def _fd_derivative(d2f: ScalarFn, v: float, k: int) -> float:
    # k-th derivative of f from central differences of f''
    m = k - 2
    step = np.finfo(float).eps ** (1.0 / 3.0) * max(1.0, abs(v))
    j = np.arange(m + 1)
    binom = np.array([math.comb(m, int(i)) for i in j], dtype=float)
    pts = v + (m / 2.0 - j) * step
    return float(np.sum((-1.0) ** j * binom * d2f(pts)) / step**m)


def min_order_at_point(
    flux: FluxModel,
    v: float,
    max_order: int | None = None,
    finite_difference: bool = False,
    tol: float = ABS_TOL,
) -> PointOrder:
    """Smallest ``k >= 2`` with ``f^(k)(v) != 0`` and the constant ``|f^(k)(v)| / k!``.

    >>> min_order_at_point(builtin_flux("cubic"), 0.0)
    PointOrder(order=3, constant=1.0, approximate=False)
    """
    if max_order is None:
        max_order = flux._poly.degree() if flux.is_polynomial else max(flux.order, 8)
    approximate = False
    for k in range(2, max_order + 1):
        if k == 2 or flux.is_polynomial:
            val = float(flux.derivative(k)(v))
            thresh = tol
        elif finite_difference:
            val = _fd_derivative(flux.d2f, v, k)
            approximate = True
            thresh = max(tol, 1e-4)
        else:
            raise UnsupportedOrderError(
                f"f''({v}) vanishes and the flux has no derivatives beyond the second; "
                "pass finite_difference=True for an approximate order"
            )
        if abs(val) > thresh:
            return PointOrder(k, abs(val) / math.factorial(k), approximate)
    return PointOrder(None, 0.0, approximate)


def inflection_zeros(flux: FluxModel, J=None, n: int = 1024) -> list[float]:
    """Zeros of ``f''`` on ``J``: scanned sign changes refined by bisection.

    Tangential zeros (``f''`` touching zero without a sign change, as for
    ``u**4`` at 0) are located by bounded minimisation of ``|f''|`` and are
    accurate to roughly the square root of the bisection tolerance.
    """
    if n < 128:
        raise ValueError("scan size must be at least 128")
    a, b = _interval(flux.interval if J is None else J)
    length = b - a
    xtol = 1e-12 * length
    x = np.linspace(a, b, n)
    s = np.asarray(flux.d2f(x), dtype=float) * np.ones_like(x)
    scale = max(1.0, float(np.abs(s).max()))
    flat = np.abs(s) <= ABS_TOL * scale
    run = np.convolve(flat.astype(int), np.ones(3, dtype=int), mode="valid")
    if np.any(run == 3):
        k = int(np.argmax(run == 3))
        raise DegenerateFluxError(f"f'' vanishes identically near [{x[k]:.6g}, {x[k + 2]:.6g}]")

    roots = [float(x[i]) for i in np.flatnonzero(s == 0.0)]
    for i in np.flatnonzero(s[:-1] * s[1:] < 0):
        roots.append(optimize.brentq(flux.d2f, x[i], x[i + 1], xtol=xtol, rtol=4 * np.finfo(float).eps))
    absd = np.abs(s)
    for i in range(1, n - 1):
        if s[i] == 0.0 or not (absd[i] <= absd[i - 1] and absd[i] <= absd[i + 1]):
            continue
        if s[i - 1] * s[i] < 0 or s[i] * s[i + 1] < 0:
            continue
        if absd[i] > 1e-2 * scale:
            continue
        res = optimize.minimize_scalar(
            lambda z: abs(float(flux.d2f(z))), bounds=(x[i - 1], x[i + 1]),
            method="bounded", options={"xatol": xtol},
        )
        if res.fun <= 1e-10 * scale:
            roots.append(float(res.x))
    roots.sort()
    out: list[float] = []
    for r in roots:
        if not out or r - out[-1] > 1e-9 * length:
            out.append(r)
    return out


@dataclass(frozen=True)
class IntervalStats:
    """Extrema of f'' on I and J, their ratio q, and the zeros of f'' on J."""

    min_f2: float
    max_f2: float
    q: float
    zeros: tuple[float, ...]
    interval: tuple[float, float]
    enlarged: tuple[float, float]


def convexity_ratio_q(flux: FluxModel, I, J=None, n: int = 512, absolute: bool = False) -> IntervalStats:
    """``q = min_I f'' / max_J f''`` for an interval ``I`` free of inflections.

    ``J`` defaults to ``I`` enlarged by half its length on each side. With
    ``absolute=True`` the ratio uses ``|f''|``, which covers concave pieces.
    """
    if n < 512:
        raise ValueError("at least 512 samples per interval")
    a, b = _interval(I)
    if J is None:
        half = 0.5 * (b - a)
        J = (a - half, b + half)
    ja, jb = _sub_interval(flux, J)
    if a < ja or b > jb:
        raise ValueError("I must be contained in J")
    sI = np.asarray(flux.d2f(np.linspace(a, b, n)), dtype=float) * np.ones(n)
    sJ = np.asarray(flux.d2f(np.linspace(ja, jb, n)), dtype=float) * np.ones(n)
    if absolute:
        ok = bool(np.all(sI > 0) or np.all(sI < 0))
        sI, sJ = np.abs(sI), np.abs(sJ)
    else:
        ok = bool(sI.min() > 0)
    if not ok:
        raise InflectionError(f"interval [{a}, {b}] crosses an inflection of the flux")
    min_f2, max_f2 = float(sI.min()), float(sJ.max())
    try:
        zeros = tuple(inflection_zeros(flux, (ja, jb)))
    except DegenerateFluxError:
        zeros = ()
    return IntervalStats(min_f2, max_f2, min_f2 / max_f2, zeros, (a, b), (ja, jb))


@dataclass(frozen=True)
class SeparationReport:
    """Worst margin of ``|f'(v) - f'(w)| - 2c|v - w|**(ell-1)`` and where it occurs."""

    margin: float
    v: float
    w: float
    pairs: int

    @property
    def ok(self) -> bool:
        return self.margin >= -ABS_TOL


def check_fprime_separation(flux: FluxModel, ell: int, c: float, I=None, n: int = 256) -> SeparationReport:
    """Scan all pairs of an ``n``-point grid of ``I`` for the derivative separation bound."""
    a, b = _sub_interval(flux, I)
    v = np.linspace(a, b, n)
    dfv = flux.df(v) * np.ones(n)
    diff = np.abs(dfv[:, None] - dfv[None, :])
    dist = np.abs(v[:, None] - v[None, :])
    margin = diff - 2.0 * c * dist ** (ell - 1)
    np.fill_diagonal(margin, np.inf)
    i, j = np.unravel_index(int(margin.argmin()), margin.shape)
    return SeparationReport(float(margin[i, j]), float(v[i]), float(v[j]), n * (n - 1))
