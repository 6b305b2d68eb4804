"""Closed-form areas of planar two-disk intersections (lenses).

Every conditional retention probability in this package reduces to the area
cut out of a competition disk by a void region, so two lens shapes carry all
of the geometry: the equal-radius lens between two hard-core disks, and the
mixed-radius lens between a void ball of radius r and a competition disk of
radius delta whose centre sits on the void ball's boundary.
"""

from __future__ import annotations

import numpy as np

__all__ = ["DomainError", "lens_symmetric", "lens_asymmetric"]

FloatOrArray = float | np.ndarray

# arccos arguments may overshoot +/-1 by a few ulp at branch boundaries;
# anything beyond this slack is a genuine domain violation, not roundoff.
_ACOS_SLACK = 4.0 * np.finfo(float).eps


class DomainError(ValueError):
    """Raised for non-finite or non-positive geometric inputs."""


def _validated(name: str, value: FloatOrArray) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.size and (not np.all(np.isfinite(arr)) or not np.all(arr > 0.0)):
        raise DomainError(f"{name} must be finite and positive, got {value!r}")
    return np.atleast_1d(arr)


def _check_unit_range(x: np.ndarray) -> np.ndarray:
    excess = np.abs(x) - 1.0
    if x.size and np.max(excess) > _ACOS_SLACK:
        raise DomainError(
            f"inverse-trig argument outside [-1, 1] by {float(np.max(excess)):.3e}"
        )
    return np.clip(x, -1.0, 1.0)


def _arccos_clamped(x: np.ndarray) -> np.ndarray:
    return np.arccos(_check_unit_range(x))


def _arcsin_clamped(x: np.ndarray) -> np.ndarray:
    return np.arcsin(_check_unit_range(x))


def lens_symmetric(r: FloatOrArray, delta: FloatOrArray) -> FloatOrArray:
    """Intersection area of two disks of radius ``delta`` with centres ``r`` apart.

    Exactly zero once the disks separate (r > 2*delta); tends to the full disk
    area pi*delta**2 as r -> 0.
    """
    scalar = np.ndim(r) == 0 and np.ndim(delta) == 0
    r_arr, d_arr = np.broadcast_arrays(_validated("r", r), _validated("delta", delta))
    area = np.zeros(r_arr.shape)
    m = r_arr <= 2.0 * d_arr
    rm = r_arr[m]
    dm = d_arr[m]
    # factored root (2d - r)(2d + r) = 4 d**2 - r**2 avoids cancellation at the
    # vanishing-lens boundary
    root = np.sqrt(np.maximum((2.0 * dm - rm) * (2.0 * dm + rm), 0.0))
    area[m] = 2.0 * dm**2 * _arccos_clamped(rm / (2.0 * dm)) - 0.5 * rm * root
    return float(area[0]) if scalar else area


def lens_asymmetric(r: FloatOrArray, delta: FloatOrArray) -> FloatOrArray:
    """Intersection area of a disk of radius ``r`` and a disk of radius ``delta``
    whose centre lies on the first disk's boundary (centres ``r`` apart).

    Equals the full pi*r**2 while the radius-r disk is contained
    (r < delta/2) and approaches half the delta-disk, pi*delta**2/2, as
    r grows and the big boundary straightens through the small disk's centre.
    """
    scalar = np.ndim(r) == 0 and np.ndim(delta) == 0
    r_arr, d_arr = np.broadcast_arrays(_validated("r", r), _validated("delta", delta))
    area = np.empty(r_arr.shape)
    small = r_arr < 0.5 * d_arr
    area[small] = np.pi * r_arr[small] ** 2
    m = ~small
    rm = r_arr[m]
    dm = d_arr[m]
    # arccos(1 - d**2/(2 r**2)) == 2 arcsin(d/(2 r)); the arcsin form stays
    # well-conditioned when r >> delta
    root = np.sqrt(np.maximum((2.0 * rm - dm) * (2.0 * rm + dm), 0.0))
    area[m] = (
        2.0 * rm**2 * _arcsin_clamped(dm / (2.0 * rm))
        + dm**2 * _arccos_clamped(dm / (2.0 * rm))
        - 0.5 * dm * root
    )
    return float(area[0]) if scalar else area
