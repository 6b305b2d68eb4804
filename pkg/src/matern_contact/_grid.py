"""Toroidal bucket-grid machinery shared by the thinning and the
nearest-neighbour search."""

from __future__ import annotations

import math
from itertools import product

import numpy as np


def toroidal_delta(a: np.ndarray, b: np.ndarray, period: float) -> np.ndarray:
    """Minimum-image coordinate separation on a circle of circumference ``period``."""
    d = np.abs(a - b)
    return np.minimum(d, period - d)


def _cell_index(coord: np.ndarray, period: float, n_cells: int) -> np.ndarray:
    idx = np.floor(coord * (n_cells / period)).astype(np.int64)
    return np.clip(idx, 0, n_cells - 1)


def _expand_ranges(
    order: np.ndarray, left: np.ndarray, count: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Expand per-query [left, left+count) ranges over a sort permutation into
    (query_position, target_index) pair arrays."""
    total = int(count.sum())
    if total == 0:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty
    q = np.repeat(np.arange(len(count), dtype=np.int64), count)
    starts = np.repeat(left, count)
    shift = np.repeat(np.cumsum(count) - count, count)
    t = order[starts + (np.arange(total, dtype=np.int64) - shift)]
    return q, t


def directed_neighbor_pairs(
    x: np.ndarray, y: np.ndarray, width: float, height: float, radius: float
) -> tuple[np.ndarray, np.ndarray]:
    """All ordered index pairs (i, j), i != j, with toroidal distance <= radius.

    Cell sides are at least ``radius`` so scanning the wrapped 3x3 cell block
    suffices; falls back to a dense scan when fewer than 3 cells fit per axis.
    """
    n = len(x)
    empty = np.empty(0, dtype=np.int64)
    if n < 2:
        return empty, empty
    nx = int(width / radius)
    ny = int(height / radius)
    if nx < 3 or ny < 3:
        qi = np.repeat(np.arange(n, dtype=np.int64), n)
        qj = np.tile(np.arange(n, dtype=np.int64), n)
        keep = qi != qj
        qi, qj = qi[keep], qj[keep]
        dx = toroidal_delta(x[qi], x[qj], width)
        dy = toroidal_delta(y[qi], y[qj], height)
        keep = dx * dx + dy * dy <= radius * radius
        return qi[keep], qj[keep]

    ix = _cell_index(x, width, nx)
    iy = _cell_index(y, height, ny)
    cell = ix * ny + iy
    order = np.argsort(cell, kind="stable")
    cell_sorted = cell[order]
    out_i: list[np.ndarray] = []
    out_j: list[np.ndarray] = []
    r2 = radius * radius
    for ox, oy in product((-1, 0, 1), repeat=2):
        ncell = ((ix + ox) % nx) * ny + ((iy + oy) % ny)
        left = np.searchsorted(cell_sorted, ncell, side="left")
        right = np.searchsorted(cell_sorted, ncell, side="right")
        qi, qj = _expand_ranges(order, left, right - left)
        keep = qi != qj
        qi, qj = qi[keep], qj[keep]
        if qi.size == 0:
            continue
        dx = toroidal_delta(x[qi], x[qj], width)
        dy = toroidal_delta(y[qi], y[qj], height)
        keep = dx * dx + dy * dy <= r2
        out_i.append(qi[keep])
        out_j.append(qj[keep])
    if not out_i:
        return empty, empty
    return np.concatenate(out_i), np.concatenate(out_j)


def _brute_minimum(
    qx: np.ndarray,
    qy: np.ndarray,
    tx: np.ndarray,
    ty: np.ndarray,
    width: float,
    height: float,
    self_index: np.ndarray | None,
) -> np.ndarray:
    dx = toroidal_delta(qx[:, None], tx[None, :], width)
    dy = toroidal_delta(qy[:, None], ty[None, :], height)
    d2 = dx * dx + dy * dy
    if self_index is not None:
        d2[np.arange(len(qx)), self_index] = np.inf
    return d2.min(axis=1)


def toroidal_nearest(
    qx: np.ndarray,
    qy: np.ndarray,
    tx: np.ndarray,
    ty: np.ndarray,
    width: float,
    height: float,
    self_index: np.ndarray | None = None,
) -> np.ndarray:
    """Exact toroidal nearest-neighbour distance from each query point to the
    target set, via an expanding wrapped cell-ring search.

    ``self_index`` maps each query to the target index holding the same
    physical point (within-pattern search); that pairing is skipped. A found
    candidate is only accepted once it is at most the ring's minimum possible
    distance, so the result equals a brute-force scan exactly.
    """
    nq = len(qx)
    m = len(tx)
    if m == 0 or nq == 0:
        return np.empty(0 if m else nq)
    # cell side near the expected nearest-neighbour distance of the target set
    spacing = 0.5 * math.sqrt(width * height / m)
    nx = max(1, int(width / spacing))
    ny = max(1, int(height / spacing))
    if nx < 3 or ny < 3:
        return np.sqrt(_brute_minimum(qx, qy, tx, ty, width, height, self_index))

    hx = width / nx
    hy = height / ny
    h_min = min(hx, hy)
    tix = _cell_index(tx, width, nx)
    tiy = _cell_index(ty, height, ny)
    tcell = tix * ny + tiy
    order = np.argsort(tcell, kind="stable")
    tcell_sorted = tcell[order]
    qix = _cell_index(qx, width, nx)
    qiy = _cell_index(qy, height, ny)

    best = np.full(nq, np.inf)
    active = np.arange(nq, dtype=np.int64)
    k = 1
    while active.size:
        if 2 * k + 1 >= nx or 2 * k + 1 >= ny:
            # remaining queries scan every target
            best[active] = np.minimum(
                best[active],
                _brute_minimum(
                    qx[active],
                    qy[active],
                    tx,
                    ty,
                    width,
                    height,
                    None if self_index is None else self_index[active],
                ),
            )
            break
        if k == 1:
            offsets = list(product((-1, 0, 1), repeat=2))
        else:
            offsets = [
                (ox, oy)
                for ox in range(-k, k + 1)
                for oy in range(-k, k + 1)
                if max(abs(ox), abs(oy)) == k
            ]
        ax = qix[active]
        ay = qiy[active]
        a_self = None if self_index is None else self_index[active]
        a_best = best[active]
        for ox, oy in offsets:
            ncell = ((ax + ox) % nx) * ny + ((ay + oy) % ny)
            left = np.searchsorted(tcell_sorted, ncell, side="left")
            right = np.searchsorted(tcell_sorted, ncell, side="right")
            qpos, tidx = _expand_ranges(order, left, right - left)
            if qpos.size == 0:
                continue
            dx = toroidal_delta(qx[active[qpos]], tx[tidx], width)
            dy = toroidal_delta(qy[active[qpos]], ty[tidx], height)
            d2 = dx * dx + dy * dy
            if a_self is not None:
                d2[tidx == a_self[qpos]] = np.inf
            np.minimum.at(a_best, qpos, d2)
        best[active] = a_best
        confirmed = a_best <= (k * h_min) ** 2
        active = active[~confirmed]
        k += 1
    return np.sqrt(best)
