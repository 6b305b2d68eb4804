"""Conditional retention probabilities under Matern type-II thinning and the
contact-distance CDF machinery built on top of them.

The closed forms all follow one pattern: a point survives thinning when it
carries the smallest mark inside its competition region, so survival
probabilities are uniform-mark averages of exp(-intensity * exposed area),
with the exposed areas supplied by :mod:`.geometry`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import integrate

from .geometry import FloatOrArray, lens_asymmetric, lens_symmetric

__all__ = [
    "CdfCurve",
    "ContactCase",
    "ProcessParams",
    "QuadratureError",
    "ResolutionError",
    "RetentionFunction",
    "contact_cdf",
    "default_r_grid",
    "expm1_ratio",
    "extend_curve",
    "mhc_intensity",
    "mhc_retention",
    "pair_retention",
    "pair_retention_quadrature",
    "retention_cmhc_to_mhc",
    "retention_mhc_to_mhc",
    "retention_ppp_to_mhc",
    "void_probability_discretized",
]

TWO_PI = 2.0 * math.pi

# Below this the two-term series for (1 - exp(-x))/x is already exact to
# double precision; expm1 covers everything above.
_SERIES_CUTOFF = 1e-12


class QuadratureError(ArithmeticError):
    """Numerical integration failed to reach the requested tolerance."""


class ResolutionError(ValueError):
    """Annulus discretisation too coarse for the requested radius."""


@dataclass(frozen=True)
class ProcessParams:
    """Parent Poisson intensity and hard-core distance.

    ``delta = 0`` degenerates to a plain Poisson process (no thinning).
    """

    lambda_p: float
    delta: float

    def __post_init__(self) -> None:
        lam = float(self.lambda_p)
        delta = float(self.delta)
        if not (math.isfinite(lam) and lam > 0.0):
            raise ValueError(f"lambda_p must be finite and > 0, got {self.lambda_p!r}")
        if not (math.isfinite(delta) and delta >= 0.0):
            raise ValueError(f"delta must be finite and >= 0, got {self.delta!r}")
        object.__setattr__(self, "lambda_p", lam)
        object.__setattr__(self, "delta", delta)

    @property
    def ball_area(self) -> float:
        """Area of the hard-core disk, pi * delta**2."""
        return math.pi * self.delta**2


class ContactCase(str, Enum):
    """Source -> target process pair of a contact-distance experiment."""

    MHC_TO_MHC = "mhc-mhc"
    PPP_TO_MHC = "ppp-mhc"
    CMHC_TO_MHC = "cmhc-mhc"
    PPP_TO_PPP = "ppp-ppp"


def expm1_ratio(x: FloatOrArray) -> FloatOrArray:
    """Stable evaluation of (1 - exp(-x)) / x, the uniform-mark average of
    exp(-x*t) over t in [0, 1]. Returns 1 at x = 0."""
    scalar = np.ndim(x) == 0
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    small = np.abs(arr) < _SERIES_CUTOFF
    safe = np.where(small, 1.0, arr)
    out = np.where(small, 1.0 - 0.5 * arr, -np.expm1(-safe) / safe)
    return float(out[0]) if scalar else out


def mhc_retention(params: ProcessParams) -> float:
    """Probability that a parent point survives the type-II thinning,
    (1 - exp(-lambda_p * pi * delta**2)) / (lambda_p * pi * delta**2)."""
    if params.delta == 0.0:
        return 1.0
    return float(expm1_ratio(params.lambda_p * params.ball_area))


def mhc_intensity(params: ProcessParams) -> float:
    """Intensity of the thinned hard-core process,
    (1 - exp(-lambda_p * pi * delta**2)) / (pi * delta**2)."""
    return params.lambda_p * mhc_retention(params)


def _pair_retention_active(r: np.ndarray, params: ProcessParams) -> np.ndarray:
    """Joint survival probability for r strictly above the hard-core distance."""
    lam = params.lambda_p
    ball = params.ball_area
    l1 = lens_symmetric(r, params.delta)
    l2 = lens_asymmetric(r, params.delta)
    if __debug__:
        # all four denominators are provably positive on r > delta
        floor = 1e-14 * ball * ball
        assert np.all((ball - l2) * ball > floor)
        assert np.all((ball - l2) * (2.0 * ball - l2) > floor)
        assert np.all((ball - l1) * ball > floor)
        assert np.all((ball + l1 - l2) * ball > floor)
    a = lam * ball  # reference-point exposure
    b = lam * (ball - l2)  # candidate exposure when its mark is the lower one
    c = lam * (ball + l1 - l2)  # candidate exposure when its mark is the higher one
    d = lam * (ball - l1)  # reference exposure outside the shared lens
    low = (expm1_ratio(a) - expm1_ratio(a + b)) / b
    high = (expm1_ratio(c) - expm1_ratio(c + d)) / d
    return low + high


def pair_retention(r: FloatOrArray, params: ProcessParams) -> FloatOrArray:
    """Probability that a candidate point at distance ``r`` and the reference
    point both survive thinning, given the annulus between the hard-core disk
    and the candidate is void of parent points. Exactly 0 for r <= delta."""
    scalar = np.ndim(r) == 0
    r_arr = np.atleast_1d(np.asarray(r, dtype=float))
    if params.delta == 0.0:
        out = (r_arr > 0.0).astype(float)
    else:
        out = np.zeros(r_arr.shape)
        active = r_arr > params.delta
        if np.any(active):
            out[active] = _pair_retention_active(r_arr[active], params)
    return float(out[0]) if scalar else out


def pair_retention_quadrature(
    r: float, params: ProcessParams, abs_tol: float = 1e-10
) -> float:
    """``pair_retention`` evaluated by nested 2-D quadrature of the raw mark
    integrals; serves as the independent cross-check for the closed form.

    Raises:
        QuadratureError: if the integrator's error estimate exceeds ``abs_tol``.
    """
    r = float(r)
    if params.delta == 0.0:
        return 1.0 if r > 0.0 else 0.0
    if r <= params.delta:
        return 0.0
    lam = params.lambda_p
    ball = params.ball_area
    l1 = float(lens_symmetric(r, params.delta))
    l2 = float(lens_asymmetric(r, params.delta))
    a = lam * ball
    b = lam * (ball - l2)
    c = lam * (ball + l1 - l2)
    d = lam * (ball - l1)
    # candidate mark below the reference mark
    low, err_low = integrate.dblquad(
        lambda t, t_o: math.exp(-a * t_o - b * t),
        0.0,
        1.0,
        0.0,
        lambda t_o: t_o,
        epsabs=0.25 * abs_tol,
        epsrel=1e-11,
    )
    # candidate mark above the reference mark
    high, err_high = integrate.dblquad(
        lambda t_o, t: math.exp(-c * t - d * t_o),
        0.0,
        1.0,
        0.0,
        lambda t: t,
        epsabs=0.25 * abs_tol,
        epsrel=1e-11,
    )
    if err_low + err_high > abs_tol:
        raise QuadratureError(
            f"mark-integral error estimate {err_low + err_high:.3e} exceeds "
            f"{abs_tol:.3e} at r={r}, params={params}"
        )
    return low + high


def retention_mhc_to_mhc(r: FloatOrArray, params: ProcessParams) -> FloatOrArray:
    """Conditional retention probability of a candidate at distance ``r`` when
    the reference point itself belongs to the thinned process. Zero on the
    hard-core range r <= delta."""
    if params.delta == 0.0:
        return _ones_like(r)
    return pair_retention(r, params) / mhc_retention(params)


def retention_ppp_to_mhc(r: FloatOrArray, params: ProcessParams) -> FloatOrArray:
    """Conditional retention probability of a candidate at distance ``r`` from
    an independent observer whose ball of radius ``r`` is void of parent
    points. Tends to the unconditional retention probability as r -> 0."""
    if params.delta == 0.0:
        return _ones_like(r)
    scalar = np.ndim(r) == 0
    r_arr = np.atleast_1d(np.asarray(r, dtype=float))
    l2 = np.zeros(r_arr.shape)
    pos = r_arr > 0.0
    if np.any(pos):
        l2[pos] = lens_asymmetric(r_arr[pos], params.delta)
    out = expm1_ratio(params.lambda_p * (params.ball_area - l2))
    out = np.atleast_1d(out)
    return float(out[0]) if scalar else out


def retention_cmhc_to_mhc(r: FloatOrArray, params: ProcessParams) -> FloatOrArray:
    """Retention probability seen from a removed (complementary) point,
    approximated by treating the observer as an independent probe of the
    surviving process; validated against simulation only."""
    return retention_ppp_to_mhc(r, params)


def _ones_like(r: FloatOrArray) -> FloatOrArray:
    if np.ndim(r) == 0:
        return 1.0
    return np.ones(np.shape(r))


@dataclass(frozen=True)
class RetentionFunction:
    """Case-dispatched conditional retention probability profile eta(r)."""

    case: ContactCase
    params: ProcessParams

    @property
    def lower_support(self) -> float:
        """Radius below which the contact distance has zero probability."""
        if self.case is ContactCase.MHC_TO_MHC:
            return self.params.delta
        return 0.0

    @property
    def target_intensity(self) -> float:
        """Intensity of the process the contact distance is measured to."""
        if self.case is ContactCase.PPP_TO_PPP:
            return self.params.lambda_p
        return mhc_intensity(self.params)

    def __call__(self, r: FloatOrArray) -> FloatOrArray:
        if self.case is ContactCase.PPP_TO_PPP:
            return _ones_like(r)
        if self.case is ContactCase.MHC_TO_MHC:
            return retention_mhc_to_mhc(r, self.params)
        if self.case is ContactCase.PPP_TO_MHC:
            return retention_ppp_to_mhc(r, self.params)
        return retention_cmhc_to_mhc(r, self.params)


@dataclass(frozen=True)
class CdfCurve:
    """Sampled analytic contact-distance CDF with quadrature error estimates.

    ``hazard`` holds the accumulated integral I(R) with F = 1 - exp(-I);
    ``abs_error`` is the propagated error estimate on F itself.
    """

    case: ContactCase
    params: ProcessParams
    radii: np.ndarray
    values: np.ndarray
    abs_error: np.ndarray
    hazard: np.ndarray
    hazard_error: np.ndarray
    abs_tol: float

    @property
    def lower_support(self) -> float:
        return RetentionFunction(self.case, self.params).lower_support

    def evaluate(self, x: FloatOrArray) -> FloatOrArray:
        """Monotone (linear) interpolation of F on the curve's grid; 0 below it."""
        scalar = np.ndim(x) == 0
        arr = np.atleast_1d(np.asarray(x, dtype=float))
        if arr.size and np.max(arr) > self.radii[-1]:
            raise ValueError(
                f"evaluation point {float(np.max(arr))!r} beyond curve range "
                f"{float(self.radii[-1])!r}; extend the curve first"
            )
        out = np.interp(arr, self.radii, self.values, left=0.0)
        return float(out[0]) if scalar else out


def _make_curve(
    case: ContactCase,
    params: ProcessParams,
    radii: np.ndarray,
    hazard: np.ndarray,
    hazard_error: np.ndarray,
    abs_tol: float,
) -> CdfCurve:
    values = -np.expm1(-hazard)
    abs_error = np.exp(-hazard) * hazard_error
    return CdfCurve(
        case=case,
        params=params,
        radii=radii,
        values=values,
        abs_error=abs_error,
        hazard=hazard,
        hazard_error=hazard_error,
        abs_tol=abs_tol,
    )


_NODES_COARSE, _WEIGHTS_COARSE = leggauss(10)
_NODES_FINE, _WEIGHTS_FINE = leggauss(21)
_MAX_BISECTIONS = 48


def _gauss_pair(fn, lo: float, hi: float) -> tuple[float, float]:
    """Fine-rule panel value plus an error estimate from a coarser rule."""
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    fine = half * float(_WEIGHTS_FINE @ fn(mid + half * _NODES_FINE))
    coarse = half * float(_WEIGHTS_COARSE @ fn(mid + half * _NODES_COARSE))
    return fine, abs(fine - coarse)


def _integrate_panel(fn, lo: float, hi: float, tol: float) -> tuple[float, float]:
    """Adaptively bisected panel integral with accumulated error estimate."""
    total = 0.0
    total_err = 0.0
    stack = [(lo, hi, tol, 0)]
    while stack:
        a, b, t, depth = stack.pop()
        value, err = _gauss_pair(fn, a, b)
        if err <= t:
            total += value
            total_err += err
            continue
        if depth >= _MAX_BISECTIONS or (b - a) <= 64.0 * np.spacing(max(abs(a), abs(b))):
            raise QuadratureError(
                f"adaptive quadrature stalled on panel [{a!r}, {b!r}] "
                f"(error estimate {err:.3e} > tolerance {t:.3e})"
            )
        m = 0.5 * (a + b)
        stack.append((a, m, 0.5 * t, depth + 1))
        stack.append((m, b, 0.5 * t, depth + 1))
    return total, total_err


def _lens_breakpoints(params: ProcessParams, lo: float, hi: float) -> list[float]:
    """Radii where the lens areas switch branch; panels must not straddle them."""
    if params.delta == 0.0:
        return []
    d = params.delta
    return sorted(c for c in (0.5 * d, d, 2.0 * d) if lo < c < hi)


def _accumulate_hazard(
    eta: RetentionFunction, start: float, targets: np.ndarray, abs_tol: float
) -> tuple[np.ndarray, np.ndarray]:
    """Cumulative integral of 2*pi*r*lambda_p*eta(r) from ``start`` to each
    ascending target radius."""
    lam = eta.params.lambda_p

    def integrand(r: np.ndarray) -> np.ndarray:
        return TWO_PI * lam * r * np.asarray(eta(r), dtype=float)

    breakpoints = _lens_breakpoints(eta.params, start, float(targets[-1]))
    tol_segment = abs_tol / max(1, len(targets) + len(breakpoints))
    hazard = np.zeros(len(targets))
    herr = np.zeros(len(targets))
    acc = 0.0
    acc_err = 0.0
    prev = start
    pending = list(breakpoints)
    for i, target in enumerate(targets):
        t = float(target)
        while pending and pending[0] < t:
            cut = pending.pop(0)
            if cut > prev:
                v, e = _integrate_panel(integrand, prev, cut, tol_segment)
                acc += v
                acc_err += e
            prev = cut
        if t > prev:
            v, e = _integrate_panel(integrand, prev, t, tol_segment)
            acc += v
            acc_err += e
            prev = t
        hazard[i] = acc
        herr[i] = acc_err
    return hazard, herr


def contact_cdf(
    eta: RetentionFunction, r_grid: FloatOrArray, abs_tol: float = 1e-9
) -> CdfCurve:
    """Contact-distance CDF F(R) = 1 - exp(-integral(2*pi*r*lambda_p*eta(r)))
    accumulated over an ascending radius grid.

    Integration starts at the case's lower support (the hard-core distance
    when both endpoints live in the thinned process, zero otherwise), so the
    returned curve is monotone by construction.
    """
    grid = np.asarray(r_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("r_grid must be a non-empty 1-D array")
    if not np.all(np.isfinite(grid)) or np.any(grid < 0.0):
        raise ValueError("r_grid must be finite and non-negative")
    if np.any(np.diff(grid) <= 0.0):
        raise ValueError("r_grid must be strictly ascending")
    if not (math.isfinite(abs_tol) and abs_tol > 0.0):
        raise ValueError(f"abs_tol must be > 0, got {abs_tol!r}")

    s = eta.lower_support
    hazard = np.zeros(grid.shape)
    herr = np.zeros(grid.shape)
    above = grid > s
    if np.any(above):
        hazard[above], herr[above] = _accumulate_hazard(eta, s, grid[above], abs_tol)
    return _make_curve(eta.case, eta.params, grid.copy(), hazard, herr, abs_tol)


def extend_curve(curve: CdfCurve, r_max: float) -> CdfCurve:
    """Continue a curve's accumulated integral out to ``r_max`` (no-op when the
    curve already spans it)."""
    r_max = float(r_max)
    last = float(curve.radii[-1])
    if r_max <= last:
        return curve
    steps = np.diff(curve.radii)
    positive = steps[steps > 0.0]
    step = float(np.median(positive)) if positive.size else (r_max - last) / 8.0
    n_new = max(2, int(math.ceil((r_max - last) / step)) + 1)
    extra = np.linspace(last, r_max, n_new)[1:]
    eta = RetentionFunction(curve.case, curve.params)
    hz, he = _accumulate_hazard(eta, last, extra, curve.abs_tol)
    return _make_curve(
        curve.case,
        curve.params,
        np.concatenate([curve.radii, extra]),
        np.concatenate([curve.hazard, curve.hazard[-1] + hz]),
        np.concatenate([curve.hazard_error, curve.hazard_error[-1] + he]),
        curve.abs_tol,
    )


def default_r_grid(
    case: ContactCase, params: ProcessParams, points: int = 200, span: float = 4.0
) -> np.ndarray:
    """Uniform radius grid from the lower support out to ``span`` mean target
    spacings, covering the visually interesting range of the CDF."""
    if points < 2:
        raise ValueError(f"points must be >= 2, got {points}")
    eta = RetentionFunction(case, params)
    s = eta.lower_support
    return np.linspace(s, s + span / math.sqrt(eta.target_intensity), points)


def void_probability_discretized(
    eta: RetentionFunction, radius: float, n_annuli: int
) -> float:
    """First-order annulus-product approximation of the void probability
    1 - F(radius): the product over ``n_annuli`` annuli of
    (1 - 2*pi*r_n*lambda_p*eta(r_n)*dr) with r_n the left endpoint of each
    annulus. Converges to exp(-I(radius)) as the annulus count grows.

    Raises:
        ResolutionError: if any factor is negative before clamping (the
            discretisation is too coarse for this radius and intensity).
    """
    if n_annuli < 2:
        raise ValueError(f"n_annuli must be >= 2, got {n_annuli}")
    radius = float(radius)
    s = eta.lower_support
    if radius < s:
        raise ValueError(f"radius {radius!r} below lower support {s!r}")
    if radius == s:
        return 1.0
    dr = (radius - s) / n_annuli
    r = s + dr * np.arange(n_annuli)
    factors = 1.0 - TWO_PI * eta.params.lambda_p * r * np.asarray(eta(r), float) * dr
    if np.any(factors < 0.0):
        raise ResolutionError(
            f"annulus factor below zero at n_annuli={n_annuli}, radius={radius}; "
            "increase the annulus count"
        )
    np.clip(factors, 0.0, 1.0, out=factors)
    return float(np.prod(factors))
