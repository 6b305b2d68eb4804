"""Independent brute-force oracles shared across the test suite.

Everything here is deliberately written from first principles (plain
minimum-image arithmetic, O(n^2) scans, midpoint rasterisation) so it shares
no code path with the package implementations it checks.
"""

from __future__ import annotations

import math

import numpy as np


def lens_area_two_circles(d: float, r1: float, r2: float) -> float:
    """Standard intersection area of two circles with radii r1, r2 and centre
    separation d."""
    if d >= r1 + r2:
        return 0.0
    if d <= abs(r1 - r2):
        return math.pi * min(r1, r2) ** 2
    alpha = math.acos((d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1))
    beta = math.acos((d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2))
    root = math.sqrt(
        max((-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2), 0.0)
    )
    return r1 * r1 * alpha + r2 * r2 * beta - 0.5 * root


def lens_area_raster(d: float, r1: float, r2: float, cells: int = 1600) -> float:
    """Midpoint-grid rasterisation of the two-circle intersection; centres at
    (0, 0) and (d, 0)."""
    xmin = max(-r1, d - r2)
    xmax = min(r1, d + r2)
    ylim = min(r1, r2)
    if xmin >= xmax:
        return 0.0
    xs = np.linspace(xmin, xmax, cells + 1)
    ys = np.linspace(-ylim, ylim, cells + 1)
    hx = xs[1] - xs[0]
    hy = ys[1] - ys[0]
    cx = 0.5 * (xs[:-1] + xs[1:])
    cy = 0.5 * (ys[:-1] + ys[1:])
    in1 = cx[:, None] ** 2 + cy[None, :] ** 2 <= r1 * r1
    in2 = (cx[:, None] - d) ** 2 + cy[None, :] ** 2 <= r2 * r2
    return float(np.count_nonzero(in1 & in2)) * hx * hy


def _min_image(a: np.ndarray, b: np.ndarray, period: float) -> np.ndarray:
    d = np.abs(a - b)
    return np.minimum(d, period - d)


def brute_nn_within(x: np.ndarray, y: np.ndarray, width: float, height: float) -> np.ndarray:
    dx = _min_image(x[:, None], x[None, :], width)
    dy = _min_image(y[:, None], y[None, :], height)
    d2 = dx * dx + dy * dy
    np.fill_diagonal(d2, np.inf)
    return np.sqrt(d2.min(axis=1))


def brute_nn_cross(
    qx: np.ndarray,
    qy: np.ndarray,
    tx: np.ndarray,
    ty: np.ndarray,
    width: float,
    height: float,
) -> np.ndarray:
    dx = _min_image(qx[:, None], tx[None, :], width)
    dy = _min_image(qy[:, None], ty[None, :], height)
    return np.sqrt((dx * dx + dy * dy).min(axis=1))


def brute_mhc_mask(
    x: np.ndarray,
    y: np.ndarray,
    mark: np.ndarray,
    width: float,
    height: float,
    delta: float,
) -> np.ndarray:
    """Survivor mask of the type-II thinning computed by an O(n^2) scan with
    the same (mark, index) tie-break contract as the package."""
    n = len(x)
    keep = np.ones(n, dtype=bool)
    for i in range(n):
        dx = _min_image(x, x[i], width)
        dy = _min_image(y, y[i], height)
        within = dx * dx + dy * dy <= delta * delta
        within[i] = False
        if not np.any(within):
            continue
        mj = mark[within]
        jj = np.flatnonzero(within)
        if np.any((mj < mark[i]) | ((mj == mark[i]) & (jj < i))):
            keep[i] = False
    return keep
