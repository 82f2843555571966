"""Simple blockage models and head-to-head comparison against measurement.

Three model families predict a blocked overlay from a free-space one:

    constant_loss:  subtract one number everywhere
    flat_region:    subtract one number inside a sharp angular region
    measured_mask:  subtract a per-point loss field

Presets carry the customary literature numbers: mean hand loss 15.3 dB,
mean body loss 8.5 dB, and a 30 dB flat in-region loss.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .coverage import WeightedCDF, percentile_value, weighted_cdf
from .errors import ConfigError, DataError
from .grid import Pattern, WeightField
from .roi import RoIMask
from .synth import BlockageMask, MaskRegion

# Percentiles at which model deltas are scored against the free overlay.
DELTA_PERCENTILES = (90.0, 80.0, 50.0, 20.0)

# Resolution of reported CDF cross-over levels, in dB.
CROSSOVER_RESOLUTION_DB = 0.1

PRESET_LOSSES_DB = {
    "prior-hand-15.3": 15.3,
    "prior-body-8.5": 8.5,
    "3gpp-flat-30": 30.0,
}


@dataclass(frozen=True)
class BlockageModel:
    """One predictive model; build via the constructor helpers below."""

    kind: str
    loss_db: float | None = None
    region: MaskRegion | None = None
    loss_pattern: Pattern | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in ("constant_loss", "flat_region", "measured_mask"):
            raise ConfigError(f"unknown model kind: {self.kind!r}")


def constant_loss(loss_db: float) -> BlockageModel:
    if not np.isfinite(loss_db):
        raise ConfigError("loss_db must be finite")
    return BlockageModel(kind="constant_loss", loss_db=float(loss_db))


def flat_region(region: MaskRegion, loss_db: float) -> BlockageModel:
    if not np.isfinite(loss_db):
        raise ConfigError("loss_db must be finite")
    if region.edge_taper_deg != 0.0:
        raise ConfigError("flat_region models use sharp regions (taper 0)")
    return BlockageModel(kind="flat_region", loss_db=float(loss_db),
                         region=region)


def measured_mask(loss: Pattern) -> BlockageModel:
    if loss.kind != "loss":
        raise ConfigError("measured_mask needs a loss-kind pattern")
    return BlockageModel(kind="measured_mask", loss_pattern=loss)


def model_preset(name: str, region: MaskRegion | None = None) -> BlockageModel:
    """Build a preset by name; region presets need the region supplied."""
    if name not in PRESET_LOSSES_DB:
        raise ConfigError(f"unknown model preset: {name!r}")
    loss = PRESET_LOSSES_DB[name]
    if name == "3gpp-flat-30":
        if region is None:
            raise ConfigError("preset '3gpp-flat-30' needs a region")
        return flat_region(region, loss)
    return constant_loss(loss)


def apply_model(free: Pattern, model: BlockageModel) -> Pattern:
    """Predicted blocked pattern from a free-space overlay."""
    if model.kind == "constant_loss":
        return free.shifted(model.loss_db)
    if model.kind == "flat_region":
        grid = free.grid
        r = model.region
        if not (grid.theta[0] <= r.theta_lo and r.theta_hi <= grid.theta[-1]):
            raise DataError("model region lies outside the grid")
        delta = BlockageMask(regions=(MaskRegion(
            phi_lo=r.phi_lo, phi_hi=r.phi_hi, theta_lo=r.theta_lo,
            theta_hi=r.theta_hi, delta_db=model.loss_db,
            edge_taper_deg=0.0),)).delta_field(grid)
        return Pattern.from_values(grid, free.values - delta, kind=free.kind)
    if model.loss_pattern.grid != free.grid:
        raise DataError("measured mask and pattern must share one grid")
    return Pattern.from_values(free.grid,
                               free.values - model.loss_pattern.values,
                               kind=free.kind)


@dataclass(frozen=True)
class CandidateResult:
    """One candidate's percentile deltas versus the free overlay."""

    name: str
    deltas_db: dict
    cdf: WeightedCDF = field(compare=False, repr=False, default=None)


@dataclass(frozen=True)
class CrossOver:
    """Level where two candidate CDFs swap order."""

    name_a: str
    name_b: str
    value_dbm: float


@dataclass(frozen=True)
class ComparisonReport:
    candidates: tuple[CandidateResult, ...]
    crossovers: tuple[CrossOver, ...]
    percentiles: tuple[float, ...] = DELTA_PERCENTILES


def _cdf_crossovers(a: WeightedCDF, b: WeightedCDF) -> list[float]:
    """Levels where sign(F_a - F_b) flips, on the merged sample set."""
    xs = np.union1d(a.values, b.values)
    diff = np.array([a.cdf_at(x) - b.cdf_at(x) for x in xs])
    sign = np.sign(np.where(np.abs(diff) <= 1e-12, 0.0, diff))
    out = []
    last = 0.0
    last_x = None
    for x, s in zip(xs, sign):
        if s != 0.0:
            if last != 0.0 and s != last:
                mid = (last_x + x) / 2.0
                level = round(mid / CROSSOVER_RESOLUTION_DB) \
                    * CROSSOVER_RESOLUTION_DB
                out.append(round(level, 1))
            last = s
            last_x = x
        elif last != 0.0:
            last_x = x
    return out


def compare_models(free: Pattern, candidates: dict, roi: RoIMask,
                   weights: WeightField,
                   percentiles=DELTA_PERCENTILES) -> ComparisonReport:
    """Score candidate blocked overlays against the free one over ``roi``.

    ``candidates`` maps names to blocked Patterns or BlockageModels (models
    are applied to ``free`` first); an iterable of (name, candidate) pairs
    works too. Deltas are free minus candidate at each percentile of the
    region-restricted weighted CDFs; cross-overs are detected between every
    candidate pair.
    """
    if not isinstance(candidates, dict):
        candidates = dict(candidates)
    if not candidates:
        raise DataError("at least one candidate is required")
    free_cdf = weighted_cdf(free, weights, mask=roi)
    results = []
    for name, cand in candidates.items():
        pattern = apply_model(free, cand) if isinstance(cand, BlockageModel) \
            else cand
        cdf = weighted_cdf(pattern, weights, mask=roi)
        deltas = {float(p): percentile_value(free_cdf, p)
                  - percentile_value(cdf, p) for p in percentiles}
        results.append(CandidateResult(name=name, deltas_db=deltas, cdf=cdf))
    crossovers = []
    for ra, rb in itertools.combinations(results, 2):
        for level in _cdf_crossovers(ra.cdf, rb.cdf):
            crossovers.append(CrossOver(name_a=ra.name, name_b=rb.name,
                                        value_dbm=level))
    return ComparisonReport(candidates=tuple(results),
                            crossovers=tuple(crossovers),
                            percentiles=tuple(float(p) for p in percentiles))
