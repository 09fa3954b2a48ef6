"""Graded composite Gauss-Legendre quadrature on the unit interval.

Integrals over unbounded supports are mapped to (0, 1) by a quantile
substitution, which concentrates any singular or slowly decaying behaviour at
the two endpoints. The rule here treats the middle [1/4, 3/4] with ``2**level``
panels and each end with dyadic layers [2^-(k+1), 2^-k], added until the
geometric tail of the layer contributions is below tolerance. The whole
estimate is then refined one level at a time until two successive levels agree.

The integrand is called as ``fun(x, xc)`` with ``xc = 1 - x``; near the right
endpoint ``xc`` is formed directly rather than by subtraction, so integrands can
evaluate upper-tail quantities to full relative precision.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import DivergenceError, QuadratureError

__all__ = ["QuadResult", "integrate_unit", "integrate_interval"]

_ORDER = 64
_NODES, _WEIGHTS = leggauss(_ORDER)
_NODES = 0.5 * (_NODES + 1.0)  # on [0, 1]
_WEIGHTS = 0.5 * _WEIGHTS
_CHUNK = 8


class QuadResult(NamedTuple):
    value: float | np.ndarray
    error: float
    level: int
    layers: int


def _panel_points(lo, hi, m):
    """Nodes and weights for ``m`` equal panels on each [lo_i, hi_i]."""
    lo = np.atleast_1d(lo)[:, None, None]
    hi = np.atleast_1d(hi)[:, None, None]
    width = (hi - lo) / m
    j = np.arange(m)[None, :, None]
    pts = lo + width * (j + _NODES[None, None, :])
    wts = np.broadcast_to(width * _WEIGHTS[None, None, :], pts.shape)
    return pts.reshape(pts.shape[0], -1), wts.reshape(pts.shape[0], -1)


def _apply(fun, x, xc, w):
    """Sum of w * fun over the last axis for each row; handles vector-valued integrands."""
    rows, npts = x.shape
    vals = np.asarray(fun(x.ravel(), xc.ravel()), dtype=float)
    vals = vals.reshape(rows, npts, -1)
    if not np.all(np.isfinite(vals)):
        raise DivergenceError("integrand is not finite on the quadrature grid")
    return np.einsum("rp,rpk->rk", w, vals)


def _tail(fun, side, m, running, rtol, atol, max_layers):
    """Sum of dyadic layers at one end; returns (total, layers used)."""
    total = 0.0
    prev = None
    zeros = 0
    k = 2
    while True:
        if k - 2 >= max_layers:
            raise DivergenceError(
                f"{side} endpoint layers did not decay within {max_layers} levels",
                estimate=running + total, bound=np.max(np.abs(prev)) if prev is not None else None,
            )
        ks = np.arange(k, k + _CHUNK)
        lo, hi = 2.0 ** -(ks + 1.0), 2.0 ** -ks.astype(float)
        near, w = _panel_points(lo, hi, m)  # distance from the endpoint
        far = 1.0 - near
        contrib = _apply(fun, near, far, w) if side == "left" else _apply(fun, far, near, w)
        for c in contrib:
            total = total + c
            size = float(np.max(np.abs(c)))
            tol_eff = max(atol, rtol * float(np.max(np.abs(running + total))))
            if size == 0.0:
                zeros += 1
                if zeros >= 3:
                    return total, k
            else:
                zeros = 0
                if prev is not None and prev > 0:
                    r = size / prev
                    if r < 0.99 and size * r / (1 - r) <= 0.05 * tol_eff:
                        # geometric estimate of the unvisited layers
                        return total + c * r / (1 - r), k
            prev = size
            k += 1


def integrate_unit(fun, rtol=1e-10, atol=0.0, max_level=9, max_layers=1000) -> QuadResult:
    """Integrate ``fun(x, xc)`` over (0, 1).

    Parameters
    ----------
    fun : callable
        Vectorised integrand returning shape (n,) or (n, m) for n points.
    rtol, atol : float
        Two successive refinement levels must agree within
        ``max(atol, rtol * |I|)`` (componentwise max for vector integrands).
    max_level : int
        Cap on the interior refinement level.
    max_layers : int
        Cap on the number of dyadic layers at each endpoint.

    Returns
    -------
    QuadResult
        ``value`` is a float for scalar integrands, else an array.

    Raises
    ------
    DivergenceError
        If the endpoint layers do not decay or the integrand is not finite.
    QuadratureError
        If refinement does not stabilise by ``max_level``.
    """
    previous = None
    layers = 0
    for level in range(1, max_level + 1):
        m_mid = 2**level
        x, w = _panel_points(0.25, 0.75, m_mid)
        middle = _apply(fun, x, 1.0 - x, w)[0]
        m_tail = 2 ** (level - 1)
        left, kl = _tail(fun, "left", m_tail, middle, rtol, atol, max_layers)
        right, kr = _tail(fun, "right", m_tail, middle + left, rtol, atol, max_layers)
        estimate = middle + left + right
        layers = max(kl, kr)
        if previous is not None:
            diff = float(np.max(np.abs(estimate - previous)))
            scale = float(np.max(np.abs(estimate)))
            if diff <= max(atol, rtol * scale):
                value = estimate[0] if estimate.size == 1 else estimate
                return QuadResult(value, diff, level, layers)
        previous = estimate
    raise QuadratureError(
        f"quadrature did not stabilise by level {max_level}",
        estimate=previous if previous.size > 1 else previous[0],
        bound=diff,
    )


def integrate_interval(fun, lo, hi, **kwargs) -> QuadResult:
    """Integrate ``fun(t)`` over a finite [lo, hi] with the same graded rule."""
    width = hi - lo
    return integrate_unit(lambda x, xc: fun(lo + width * x) * width, **kwargs)
