"""Region-of-interest definitions over best-beam overlay patterns.

Five region laws, all built from non-strict thresholds on the free-space
overlay G and the blocked overlay G_b (peak values taken over valid points):

    R1: G >= max(G) - d1
    R2: R1 or G_b >= max(G_b) - d2
    R3: R1 or G_b >= max(G) - d3
    R4: R1 or G_b >= d4          (absolute EIRP floor)
    R5: G >= d5 or G_b >= d5     (either-pattern absolute floor)

R1 depends only on the free pattern; R2-R4 extend an R1 core, so each
contains R1 by construction. The matched baseline for R5 keeps only the
free-pattern half of its rule.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DataError
from .grid import AngularGrid, Pattern, WeightField, fraction_of_sphere


@dataclass(frozen=True)
class RoIMask:
    """Boolean region on a grid, tagged with the law that produced it."""

    grid: AngularGrid
    mask: np.ndarray
    kind: str
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        m = np.asarray(self.mask, dtype=bool)
        if m.shape != self.grid.shape:
            raise DataError("mask shape must match the grid")
        m = m & self.grid.valid
        m.setflags(write=False)
        object.__setattr__(self, "mask", m)

    def coverage(self, weights: WeightField) -> float:
        return fraction_of_sphere(self, weights)

    def union(self, other: "RoIMask", kind: str, params: dict) -> "RoIMask":
        if self.grid != other.grid:
            raise DataError("regions must share one grid")
        return RoIMask(grid=self.grid, mask=self.mask | other.mask,
                       kind=kind, params=params)


def _check_pair(free: Pattern, blocked: Pattern) -> None:
    if free.grid != blocked.grid:
        raise DataError("free and blocked patterns must share one grid")


def _check_delta(value: float, name: str) -> None:
    # relative widths only; absolute floors (delta4/delta5) may be negative
    if value < 0:
        raise ConfigError(f"{name} must be >= 0 dB")


def roi_r1(free: Pattern, delta1: float) -> RoIMask:
    """Within delta1 dB of the free-space overlay peak."""
    _check_delta(delta1, "delta1")
    thr = free.max_value() - delta1
    return RoIMask(grid=free.grid, mask=free.values >= thr, kind="R1",
                   params={"delta1": delta1, "threshold_dbm": thr})


def roi_r2(free: Pattern, blocked: Pattern, delta1: float,
           delta2: float) -> RoIMask:
    """R1, extended by points near the blocked overlay's own peak."""
    _check_pair(free, blocked)
    _check_delta(delta2, "delta2")
    thr = blocked.max_value() - delta2
    extra = RoIMask(grid=free.grid, mask=blocked.values >= thr, kind="R2")
    return roi_r1(free, delta1).union(
        extra, "R2", {"delta1": delta1, "delta2": delta2,
                      "blocked_threshold_dbm": thr})


def roi_r3(free: Pattern, blocked: Pattern, delta1: float,
           delta3: float) -> RoIMask:
    """R1, extended by blocked points near the free-space peak."""
    _check_pair(free, blocked)
    _check_delta(delta3, "delta3")
    thr = free.max_value() - delta3
    extra = RoIMask(grid=free.grid, mask=blocked.values >= thr, kind="R3")
    return roi_r1(free, delta1).union(
        extra, "R3", {"delta1": delta1, "delta3": delta3,
                      "blocked_threshold_dbm": thr})


def roi_r4(free: Pattern, blocked: Pattern, delta1: float,
           delta4: float) -> RoIMask:
    """R1, extended by blocked points above an absolute EIRP floor."""
    _check_pair(free, blocked)
    extra = RoIMask(grid=free.grid, mask=blocked.values >= delta4, kind="R4")
    return roi_r1(free, delta1).union(
        extra, "R4", {"delta1": delta1, "delta4": delta4})


def roi_r5(free: Pattern, blocked: Pattern, delta5: float) -> RoIMask:
    """Points where either overlay clears an absolute EIRP floor."""
    _check_pair(free, blocked)
    mask = (free.values >= delta5) | (blocked.values >= delta5)
    return RoIMask(grid=free.grid, mask=mask, kind="R5",
                   params={"delta5": delta5})


def matched_r1_for_r5(free: Pattern, delta5: float) -> RoIMask:
    """Free-pattern-only baseline with the same absolute floor as R5.

    An empty baseline (floor above the free-space peak) is legal: coverage
    is then 0% and relative improvement is undefined. The ``empty`` flag in
    ``params`` marks that case for report emitters.
    """
    raw = np.asarray(free.values >= delta5) & free.grid.valid
    return RoIMask(grid=free.grid, mask=raw, kind="R1",
                   params={"delta5": delta5,
                           "delta1": free.max_value() - delta5,
                           "empty": not bool(raw.any())})


@dataclass(frozen=True)
class RoIImprovement:
    """Coverage gained by an enhanced region over its baseline."""

    base_pct: float
    enhanced_pct: float
    abs_pct: float
    rel_pct: float | None


def improvement_from_percent(base_pct: float,
                             enhanced_pct: float) -> RoIImprovement:
    """Improvement metrics from two already-computed coverages."""
    abs_pct = enhanced_pct - base_pct
    rel = 100.0 * abs_pct / base_pct if base_pct > 0 else None
    return RoIImprovement(base_pct=base_pct, enhanced_pct=enhanced_pct,
                          abs_pct=abs_pct, rel_pct=rel)


def roi_improvement(base: RoIMask, enhanced: RoIMask,
                    weights: WeightField) -> RoIImprovement:
    """Absolute and relative sphere coverage gained by ``enhanced``."""
    if base.grid != enhanced.grid or base.grid != weights.grid:
        raise DataError("regions and weights must share one grid")
    return improvement_from_percent(base.coverage(weights),
                                    enhanced.coverage(weights))


def write_roi_csv(mask: RoIMask, path) -> None:
    """Dump a region as one `phi,theta,in_roi` row per grid point."""
    grid = mask.grid
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["phi", "theta", "in_roi"])
        for i, theta in enumerate(grid.theta):
            for j, phi in enumerate(grid.phi):
                writer.writerow([repr(float(phi)), repr(float(theta)),
                                 int(mask.mask[i, j])])
