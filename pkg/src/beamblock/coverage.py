"""Best-beam overlay, weighted CDFs, coverage and percentile statistics.

All spherical percentages use solid-angle weights over valid points only.
Percentiles follow the top-p convention used throughout the analysis: the
p-th percentile value is the level exceeded (non-strictly) over at least
p percent of the weighted sphere.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DataError
from .grid import AngularGrid, Pattern, PatternSet, WeightField

PERCENTILE_CONVENTION = ("top-p: percentile_value(cdf, p) is the largest "
                         "sample value v with weighted mass(value >= v) "
                         ">= p/100")


@dataclass(frozen=True)
class OverlayPattern:
    """Per-point best beam: max EIRP across the codebook.

    ``best_beam`` holds the index of the winning pattern (lowest index wins
    ties) and -1 at invalid points.
    """

    pattern: Pattern
    best_beam: np.ndarray

    @property
    def grid(self) -> AngularGrid:
        return self.pattern.grid


def overlay_best_beam(pset: PatternSet) -> OverlayPattern:
    """Pointwise maximum over beams, with the winning beam index."""
    stack = np.stack([p.values for p in pset])
    filled = np.where(np.isnan(stack), -np.inf, stack)
    best = np.argmax(filled, axis=0)
    values = np.take_along_axis(stack, best[None, ...], axis=0)[0]
    best = np.where(pset.grid.valid, best, -1)
    pattern = Pattern.from_values(pset.grid, values, kind=pset[0].kind)
    return OverlayPattern(pattern=pattern, best_beam=best)


@dataclass(frozen=True)
class WeightedCDF:
    """Weighted empirical distribution of a dB field.

    ``values`` ascending; ``cum_weights[i]`` is the total mass at or below
    ``values[i]`` and ends at 1.
    """

    values: np.ndarray
    cum_weights: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        c = np.asarray(self.cum_weights, dtype=float)
        if v.ndim != 1 or v.shape != c.shape or v.size == 0:
            raise DataError("values and cum_weights must be matching 1-D")
        if np.any(np.diff(v) < 0):
            raise DataError("values must be ascending")
        if abs(float(c[-1]) - 1.0) > 1e-9:
            raise DataError("cumulative weights must end at 1")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "cum_weights", c)

    def cdf_at(self, x: float) -> float:
        """Weighted mass of samples <= x."""
        i = int(np.searchsorted(self.values, x, side="right"))
        return float(self.cum_weights[i - 1]) if i else 0.0

    def tail_at(self, x: float) -> float:
        """Weighted mass of samples >= x."""
        i = int(np.searchsorted(self.values, x, side="left"))
        return 1.0 - (float(self.cum_weights[i - 1]) if i else 0.0)


def weighted_cdf(pattern: Pattern, weights: WeightField,
                 mask=None) -> WeightedCDF:
    """Distribution of ``pattern`` over the valid sphere.

    With ``mask`` (boolean array or an object with one), the distribution is
    restricted to the masked points and renormalized within them.
    """
    if pattern.grid != weights.grid:
        raise DataError("pattern and weights must share one grid")
    sel = pattern.grid.valid.copy()
    if mask is not None:
        m = np.asarray(getattr(mask, "mask", mask), dtype=bool)
        if m.shape != sel.shape:
            raise DataError("mask shape must match the grid")
        sel &= m
    v = pattern.values[sel]
    w = weights.weights[sel]
    total = w.sum()
    if v.size == 0 or total <= 0:
        raise DataError("selection contains no weighted valid points")
    order = np.argsort(v, kind="stable")
    v = v[order]
    c = np.cumsum(w[order]) / total
    return WeightedCDF(values=v, cum_weights=c)


def coverage_above(pattern: Pattern, weights: WeightField,
                   threshold: float) -> float:
    """Percent of the valid sphere with value >= threshold (non-strict)."""
    if pattern.grid != weights.grid:
        raise DataError("pattern and weights must share one grid")
    hit = pattern.values >= threshold
    return 100.0 * float(weights.weights[hit & pattern.grid.valid].sum())


def percentile_value(cdf: WeightedCDF, p: float) -> float:
    """Value exceeded over at least p percent of the weighted samples.

    The largest sample value v with mass(>= v) >= p/100; p = 100 returns
    the minimum sample, p = 0 the maximum.
    """
    if not 0.0 <= p <= 100.0:
        raise ConfigError("percentile must lie in [0, 100]")
    prev = np.concatenate(([0.0], cdf.cum_weights[:-1]))
    target = 1.0 - p / 100.0
    idx = int(np.searchsorted(prev, target + 1e-12, side="right")) - 1
    return float(cdf.values[max(idx, 0)])


def percentile_loss(free: WeightedCDF, blocked: WeightedCDF,
                    p: float) -> float:
    """Drop of the p-th percentile value from free to blocked, in dB."""
    return percentile_value(free, p) - percentile_value(blocked, p)


@dataclass(frozen=True)
class CoverageLost:
    """Coverage above a threshold, before and after blockage."""

    threshold: float
    free_pct: float
    blocked_pct: float
    abs_lost_pct: float
    rel_lost_pct: float | None


def lost_percentages(free_pct: float,
                     blocked_pct: float) -> tuple[float, float | None]:
    """Absolute and relative coverage lost between two percentages."""
    abs_lost = free_pct - blocked_pct
    rel = 100.0 * abs_lost / free_pct if free_pct > 0 else None
    return abs_lost, rel


def coverage_lost(free: Pattern, blocked: Pattern, weights: WeightField,
                  threshold: float) -> CoverageLost:
    """Absolute and relative sphere coverage lost at a threshold."""
    f = coverage_above(free, weights, threshold)
    b = coverage_above(blocked, weights, threshold)
    abs_lost, rel = lost_percentages(f, b)
    return CoverageLost(threshold=threshold, free_pct=f, blocked_pct=b,
                        abs_lost_pct=abs_lost, rel_lost_pct=rel)
