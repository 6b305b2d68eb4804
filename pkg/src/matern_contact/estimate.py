"""Empirical nearest-neighbour distances, step CDFs, and the analytic versus
Monte-Carlo comparison pipeline.

Nearest-neighbour samples from one realisation are spatially correlated, so
the sup distance reported here is a descriptive statistic checked against
fixed thresholds, never a formal hypothesis test.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ._grid import toroidal_nearest
from .analytic import (
    CdfCurve,
    ContactCase,
    ProcessParams,
    RetentionFunction,
    contact_cdf,
    extend_curve,
)
from .simulate import MarkedPattern, PointLabel, Window, sample_ppp, thin_mhc_type2

__all__ = [
    "ComparisonReport",
    "EmpiricalDistribution",
    "ExperimentConfig",
    "InsufficientDataError",
    "SEED_SCHEME",
    "empirical_cdf",
    "ks_sup_distance",
    "nn_distances_cross",
    "nn_distances_within",
    "run_experiment",
]

# every replication draws its streams from SeedSequence((seed, replication, parent))
SEED_SCHEME = "SeedSequence((seed, replication, parent_index))"


class InsufficientDataError(ValueError):
    """Too few points to extract the requested distances."""


@dataclass(frozen=True)
class EmpiricalDistribution:
    """Sorted distance samples with right-continuous step-CDF evaluation."""

    samples: np.ndarray

    @property
    def n(self) -> int:
        return len(self.samples)

    def cdf(self, x: float | np.ndarray) -> float | np.ndarray:
        """F_hat(x) = (#samples <= x) / n."""
        out = np.searchsorted(self.samples, x, side="right") / self.n
        return float(out) if np.ndim(x) == 0 else out

    def cdf_left(self, x: float | np.ndarray) -> float | np.ndarray:
        """Left limit F_hat(x-) = (#samples < x) / n."""
        out = np.searchsorted(self.samples, x, side="left") / self.n
        return float(out) if np.ndim(x) == 0 else out


def empirical_cdf(samples) -> EmpiricalDistribution:
    """Sorted copy of the samples wrapped for step-function evaluation."""
    arr = np.sort(np.asarray(samples, dtype=float))
    if arr.size == 0:
        raise InsufficientDataError("no samples")
    if not np.all(np.isfinite(arr)):
        raise ValueError("samples must be finite")
    return EmpiricalDistribution(arr)


def nn_distances_within(pattern: MarkedPattern, label: PointLabel) -> np.ndarray:
    """Toroidal distance from each ``label`` point to its nearest other point
    carrying the same label."""
    idx = pattern.indices_of(label)
    if len(idx) < 2:
        raise InsufficientDataError(
            f"need >= 2 points labelled {PointLabel(label).name}, have {len(idx)}"
        )
    x = pattern.x[idx]
    y = pattern.y[idx]
    return toroidal_nearest(
        x,
        y,
        x,
        y,
        pattern.window.width,
        pattern.window.height,
        self_index=np.arange(len(idx), dtype=np.int64),
    )


def nn_distances_cross(
    source: MarkedPattern,
    source_label: PointLabel,
    target: MarkedPattern,
    target_label: PointLabel,
) -> np.ndarray:
    """Toroidal distance from each source-labelled point to the nearest
    target-labelled point. Both patterns must live on the same window; with
    disjoint labels on a shared pattern no self-pairing can occur."""
    if source.window != target.window:
        raise ValueError("source and target patterns live on different windows")
    s_idx = source.indices_of(source_label)
    t_idx = target.indices_of(target_label)
    if len(s_idx) == 0:
        raise InsufficientDataError("source has no points with the requested label")
    if len(t_idx) == 0:
        raise InsufficientDataError("target has no points with the requested label")
    return toroidal_nearest(
        source.x[s_idx],
        source.y[s_idx],
        target.x[t_idx],
        target.y[t_idx],
        source.window.width,
        source.window.height,
    )


def ks_sup_distance(emp: EmpiricalDistribution, curve: CdfCurve) -> float:
    """Two-sided sup distance between the step CDF and an analytic curve,
    evaluated at every sample point (both the jump top and its left limit).

    The analytic curve is extended when samples overrun its grid; a curve that
    starts above its own lower support cannot pin F = 0 below its grid, so
    samples underrunning such a curve raise a range error.
    """
    x = emp.samples
    if float(x[0]) < float(curve.radii[0]) and float(curve.radii[0]) > curve.lower_support:
        raise ValueError(
            f"analytic curve starts at {float(curve.radii[0])!r}, above sample "
            f"minimum {float(x[0])!r}"
        )
    if float(x[-1]) > float(curve.radii[-1]):
        curve = extend_curve(curve, float(x[-1]))
    f = np.interp(x, curve.radii, curve.values, left=0.0)
    n = emp.n
    step_hi = np.searchsorted(x, x, side="right") / n
    step_lo = np.searchsorted(x, x, side="left") / n
    return float(np.maximum(np.abs(step_hi - f), np.abs(step_lo - f)).max())


@dataclass(frozen=True)
class ExperimentConfig:
    """Full recipe for one comparison experiment (one case, one delta)."""

    case: ContactCase
    params: ProcessParams
    window: Window = Window(100.0, 100.0)
    replications: int = 20
    seed: int = 1
    r_min: float | None = None
    r_max: float | None = None
    r_points: int = 200
    abs_tol: float = 1e-9

    def __post_init__(self) -> None:
        if self.replications < 1:
            raise ValueError(f"replications must be >= 1, got {self.replications}")
        if self.r_points < 2:
            raise ValueError(f"r_points must be >= 2, got {self.r_points}")
        if not (math.isfinite(self.abs_tol) and self.abs_tol > 0.0):
            raise ValueError(f"abs_tol must be > 0, got {self.abs_tol!r}")

    def r_grid(self) -> np.ndarray:
        eta = RetentionFunction(self.case, self.params)
        lo = eta.lower_support if self.r_min is None else float(self.r_min)
        if self.r_max is None:
            hi = lo + 4.0 / math.sqrt(eta.target_intensity)
        else:
            hi = float(self.r_max)
        if hi <= lo:
            raise ValueError(f"empty radius range [{lo!r}, {hi!r}]")
        return np.linspace(lo, hi, self.r_points)

    def to_dict(self) -> dict:
        return {
            "case": self.case.value,
            "lambda_p": self.params.lambda_p,
            "delta": self.params.delta,
            "window": [self.window.width, self.window.height],
            "replications": self.replications,
            "seed": self.seed,
            "r_grid": {"min": self.r_min, "max": self.r_max, "points": self.r_points},
            "abs_tol": self.abs_tol,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        grid = data.get("r_grid", {})
        window = data.get("window", [100.0, 100.0])
        return cls(
            case=ContactCase(data["case"]),
            params=ProcessParams(data["lambda_p"], data["delta"]),
            window=Window(window[0], window[1]),
            replications=int(data.get("replications", 20)),
            seed=int(data.get("seed", 1)),
            r_min=grid.get("min"),
            r_max=grid.get("max"),
            r_points=int(grid.get("points", 200)),
            abs_tol=float(data.get("abs_tol", 1e-9)),
        )


PatternSink = Callable[[int, str, MarkedPattern], None]


def _replication_distances(
    config: ExperimentConfig, rep: int
) -> tuple[np.ndarray, list[tuple[str, MarkedPattern]]]:
    case = config.case
    params = config.params
    window = config.window
    if case is ContactCase.PPP_TO_PPP:
        pat = sample_ppp(params.lambda_p, window, (config.seed, rep, 0))
        return nn_distances_within(pat, PointLabel.PARENT), [("pattern", pat)]
    if case is ContactCase.MHC_TO_MHC:
        pat = thin_mhc_type2(
            sample_ppp(params.lambda_p, window, (config.seed, rep, 0)), params.delta
        )
        return nn_distances_within(pat, PointLabel.MHC), [("pattern", pat)]
    if case is ContactCase.PPP_TO_MHC:
        source = sample_ppp(params.lambda_p, window, (config.seed, rep, 0))
        target = thin_mhc_type2(
            sample_ppp(params.lambda_p, window, (config.seed, rep, 1)), params.delta
        )
        distances = nn_distances_cross(
            source, PointLabel.PARENT, target, PointLabel.MHC
        )
        return distances, [("source", source), ("target", target)]
    pat = thin_mhc_type2(
        sample_ppp(params.lambda_p, window, (config.seed, rep, 0)), params.delta
    )
    distances = nn_distances_cross(pat, PointLabel.CMHC, pat, PointLabel.MHC)
    return distances, [("pattern", pat)]


@dataclass
class ComparisonReport:
    """Analytic curve, pooled empirical distances, and their sup distance for
    one experiment. ``runtime_seconds`` is informational and excluded from the
    serialised form so identical (config, seed) runs serialise identically."""

    config: ExperimentConfig
    analytic: CdfCurve
    empirical: EmpiricalDistribution
    sup_distance: float
    runtime_seconds: float
    seed_scheme: str = SEED_SCHEME

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "seed_scheme": self.seed_scheme,
            "sup_distance": self.sup_distance,
            "empirical": {
                "pooled_samples": self.empirical.n,
                "replications": self.config.replications,
                "min": float(self.empirical.samples[0]),
                "max": float(self.empirical.samples[-1]),
                "F_hat": [float(v) for v in self.empirical.cdf(self.analytic.radii)],
            },
            "analytic": {
                "radii": [float(v) for v in self.analytic.radii],
                "F": [float(v) for v in self.analytic.values],
                "abs_error": [float(v) for v in self.analytic.abs_error],
            },
        }


def run_experiment(
    config: ExperimentConfig, on_pattern: PatternSink | None = None
) -> ComparisonReport:
    """Generate the patterns each case calls for, pool nearest-neighbour
    distances across replications, and compare against the analytic curve.

    ``on_pattern`` receives every generated pattern (replication index, role,
    pattern) — used for optional pattern dumps.
    """
    start = time.perf_counter()
    chunks: list[np.ndarray] = []
    for rep in range(config.replications):
        try:
            distances, patterns = _replication_distances(config, rep)
        except Exception as exc:
            raise RuntimeError(f"replication {rep} failed: {exc}") from exc
        if on_pattern is not None:
            for role, pattern in patterns:
                on_pattern(rep, role, pattern)
        chunks.append(distances)
    emp = empirical_cdf(np.concatenate(chunks))
    eta = RetentionFunction(config.case, config.params)
    curve = contact_cdf(eta, config.r_grid(), config.abs_tol)
    sup = ks_sup_distance(emp, curve)
    return ComparisonReport(
        config=config,
        analytic=curve,
        empirical=emp,
        sup_distance=sup,
        runtime_seconds=time.perf_counter() - start,
    )
