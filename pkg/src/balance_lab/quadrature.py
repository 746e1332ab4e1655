"""Composite quadrature rules shared by the estimate, covering and residual code.

Everything here works on batches: a family of 1-D intervals ``[lo_k, hi_k]``
(one per time slice) is integrated at once, split at a common set of break
points where the integrand is known to be non-smooth.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

__all__ = [
    "simpson_weights",
    "slice_integrals",
    "trapezoid",
    "trapezoid_error_bound",
    "gauss_panels",
]


def simpson_weights(m: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes on [0, 1] and weights of the composite Simpson rule with ``m`` panels.

    ``m`` must be even.
    """
    if m < 2 or m % 2:
        raise ValueError(f"Simpson rule needs an even panel count, got {m}")
    s = np.linspace(0.0, 1.0, m + 1)
    w = np.ones(m + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return s, w / (3.0 * m)


def _pieces(lo: np.ndarray, hi: np.ndarray, breaks: Sequence[float]):
    # Same number of pieces for every slice; pieces not hit by a break collapse to zero length.
    edges = [lo]
    for b in sorted(breaks):
        edges.append(np.clip(np.full_like(lo, b), lo, hi))
    edges.append(hi)
    return list(zip(edges[:-1], edges[1:]))


def slice_integrals(
    func: Callable[[np.ndarray, np.ndarray], np.ndarray],
    times: np.ndarray,
    lo: np.ndarray,
    hi: np.ndarray,
    m: int = 32,
    breaks: Sequence[float] = (),
) -> tuple[np.ndarray, np.ndarray]:
    """Integrate ``func(t_k, x)`` over ``x`` in ``[lo_k, hi_k]`` for every slice ``k``.

    Composite Simpson with ``m`` panels on each smooth piece. Returns the
    integrals and a per-slice error bound ``(b - a) / 12 * max |second difference|``,
    summed over pieces. That is the composite trapezoid bound written with
    scanned second differences, which also dominates the Simpson error.

    Parameters
    ----------
    func : callable
        Vectorized integrand ``func(t, x)``; ``t`` has shape ``(K, 1)`` and
        ``x`` shape ``(K, m + 1)``.
    times, lo, hi : array_like, shape (K,)
        Slice times and integration limits.
    m : int
        Even number of Simpson panels per piece.
    breaks : sequence of float
        Abscissae where ``func`` may be discontinuous or have a kink.
    """
    times = np.atleast_1d(np.asarray(times, dtype=float))
    lo = np.broadcast_to(np.asarray(lo, dtype=float), times.shape).copy()
    hi = np.broadcast_to(np.asarray(hi, dtype=float), times.shape).copy()
    s, w = simpson_weights(m)
    total = np.zeros_like(times)
    err = np.zeros_like(times)
    for a, b in _pieces(lo, hi, breaks):
        width = b - a
        if not np.any(width > 0):
            continue
        x = a[:, None] + width[:, None] * s[None, :]
        # one-sided limits at the piece ends, so jumps at break lines are integrated correctly
        x[:, 0] = np.where(width > 0, np.nextafter(a, b), a)
        x[:, -1] = np.where(width > 0, np.nextafter(b, a), b)
        vals = np.asarray(func(times[:, None], x), dtype=float)
        vals = np.broadcast_to(vals, x.shape)
        total += width * (vals @ w)
        d2 = np.abs(np.diff(vals, n=2, axis=1)).max(axis=1)
        err += width / 12.0 * d2
    return total, err


def trapezoid(values: np.ndarray, times: np.ndarray) -> float:
    return float(np.trapezoid(values, times))


def trapezoid_error_bound(values: np.ndarray, times: np.ndarray) -> float:
    """Composite trapezoid bound on a uniform grid from scanned second differences."""
    values = np.asarray(values, dtype=float)
    if values.size < 3:
        return 0.0
    span = float(times[-1] - times[0])
    return abs(span) / 12.0 * float(np.abs(np.diff(values, n=2)).max())


def gauss_panels(breakpoints: np.ndarray, order: int = 5) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre nodes and weights over consecutive breakpoints."""
    bp = np.unique(np.asarray(breakpoints, dtype=float))
    xi, wi = np.polynomial.legendre.leggauss(order)
    a, b = bp[:-1], bp[1:]
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    nodes = (mid[:, None] + half[:, None] * xi[None, :]).ravel()
    weights = (half[:, None] * wi[None, :]).ravel()
    return nodes, weights
