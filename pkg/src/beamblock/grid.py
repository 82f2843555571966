"""Spherical sampling grid, solid-angle weights, and pattern containers.

Angles are in degrees throughout: phi is azimuth in [0, 360), theta is
elevation from zenith in (0, 180). A grid is the cross product of the two
axes; arrays are indexed [i_theta, i_phi]. Points can be marked invalid
(e.g. an elevation band a positioner cannot reach) and every statistic in
this package then ignores them on both sides of the ratio.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DataError

# Sentinel floor for pattern values in dB; anything below clamps to this.
FLOOR_DB = -200.0

# Tolerance for checking that grid steps are uniform, in degrees.
_STEP_TOL = 1e-9


def _as_readonly(arr: np.ndarray) -> np.ndarray:
    out = np.asarray(arr)
    out.setflags(write=False)
    return out


def _check_axis(values: np.ndarray, name: str, lo: float, hi: float,
                lo_open: bool, hi_open: bool) -> None:
    if values.ndim != 1 or values.size == 0:
        raise ConfigError(f"{name} axis must be a non-empty 1-D array")
    if np.any(np.diff(values) <= 0):
        raise ConfigError(f"{name} axis must be strictly ascending")
    v0, v1 = float(values[0]), float(values[-1])
    if (v0 < lo or (lo_open and v0 == lo)) or (v1 > hi or (hi_open and v1 == hi)):
        raise ConfigError(f"{name} axis must lie in the valid angle range")
    if values.size >= 3:
        steps = np.diff(values)
        if np.any(np.abs(steps - steps[0]) > _STEP_TOL):
            raise ConfigError(f"{name} axis steps must be uniform")


@dataclass(frozen=True)
class AngularGrid:
    """Uniform (phi, theta) lattice with a shared validity mask."""

    phi: np.ndarray
    theta: np.ndarray
    valid: np.ndarray

    def __post_init__(self):
        phi = _as_readonly(np.asarray(self.phi, dtype=float))
        theta = _as_readonly(np.asarray(self.theta, dtype=float))
        _check_axis(phi, "phi", 0.0, 360.0, lo_open=False, hi_open=True)
        _check_axis(theta, "theta", 0.0, 180.0, lo_open=True, hi_open=True)
        valid = _as_readonly(np.asarray(self.valid, dtype=bool))
        if valid.shape != (theta.size, phi.size):
            raise ConfigError("valid mask shape must be (n_theta, n_phi)")
        if not valid.any():
            raise ConfigError("grid must contain at least one valid point")
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "valid", valid)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.theta.size, self.phi.size)

    @property
    def phi_step(self) -> float:
        return float(self.phi[1] - self.phi[0]) if self.phi.size > 1 else 360.0

    @property
    def theta_step(self) -> float:
        return float(self.theta[1] - self.theta[0]) if self.theta.size > 1 else 180.0

    def __eq__(self, other) -> bool:
        if not isinstance(other, AngularGrid):
            return NotImplemented
        return (np.array_equal(self.phi, other.phi)
                and np.array_equal(self.theta, other.theta)
                and np.array_equal(self.valid, other.valid))

    def __hash__(self):  # frozen dataclass would try to hash arrays
        return hash((self.phi.tobytes(), self.theta.tobytes(),
                     self.valid.tobytes()))

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """Broadcast (theta, phi) matrices of shape ``self.shape``."""
        return np.meshgrid(self.theta, self.phi, indexing="ij")


def make_grid(phi_step: float, theta_min: float, theta_max: float,
              theta_step: float | None = None) -> AngularGrid:
    """Build the full-azimuth measurement lattice.

    Parameters
    ----------
    phi_step : float
        Azimuth step in degrees; must divide 360 evenly.
    theta_min, theta_max : float
        First and last elevation sample in degrees, 0 < theta < 180.
    theta_step : float, optional
        Elevation step; defaults to ``phi_step``. ``theta_max - theta_min``
        must be an integer number of steps.

    Returns
    -------
    AngularGrid
        All points valid. Mark bands invalid by constructing a new grid
        with an edited mask (see ``with_invalid_band``).
    """
    if not 0.0 < phi_step <= 90.0:
        raise ConfigError("phi_step must be in (0, 90] degrees")
    tstep = phi_step if theta_step is None else theta_step
    if tstep <= 0:
        raise ConfigError("theta_step must be positive")
    n_phi = int(round(360.0 / phi_step))
    if n_phi < 1 or abs(n_phi * phi_step - 360.0) > _STEP_TOL:
        raise ConfigError("phi_step must divide 360 degrees evenly")
    if not 0.0 < theta_min < theta_max < 180.0:
        raise ConfigError("theta range must satisfy 0 < min < max < 180")
    n_theta = int(round((theta_max - theta_min) / tstep)) + 1
    if abs((n_theta - 1) * tstep - (theta_max - theta_min)) > 1e-6:
        raise ConfigError("theta range must be an integer number of steps")
    phi = phi_step * np.arange(n_phi)
    theta = theta_min + tstep * np.arange(n_theta)
    valid = np.ones((n_theta, n_phi), dtype=bool)
    return AngularGrid(phi=phi, theta=theta, valid=valid)


def with_invalid_band(grid: AngularGrid, theta_lo: float,
                      theta_hi: float) -> AngularGrid:
    """Copy of ``grid`` with theta in [theta_lo, theta_hi] marked invalid."""
    band = (grid.theta >= theta_lo) & (grid.theta <= theta_hi)
    valid = grid.valid & ~band[:, None]
    return AngularGrid(phi=grid.phi, theta=grid.theta, valid=valid)


@dataclass(frozen=True)
class WeightField:
    """Per-point solid-angle weights; zero at invalid points, sum of 1."""

    grid: AngularGrid
    weights: np.ndarray

    def __post_init__(self):
        w = _as_readonly(np.asarray(self.weights, dtype=float))
        if w.shape != self.grid.shape:
            raise ConfigError("weights shape must match the grid")
        if np.any(w < 0) or np.any(w[~self.grid.valid] != 0):
            raise ConfigError("weights must be >= 0 and zero at invalid points")
        total = float(w.sum())
        if abs(total - 1.0) > 1e-9:
            raise ConfigError("weights must sum to 1")
        object.__setattr__(self, "weights", w)


def solid_angle_weights(grid: AngularGrid) -> WeightField:
    """sin(theta) area weights on the lattice, normalized over valid points.

    Uniform steps make the cell area proportional to sin(theta) alone; the
    phi and theta step sizes cancel in the normalization.
    """
    w = np.sin(np.deg2rad(grid.theta))[:, None] * np.ones(grid.shape)
    w = np.where(grid.valid, w, 0.0)
    w = w / w.sum()
    return WeightField(grid=grid, weights=w)


def uniform_weights(grid: AngularGrid) -> WeightField:
    """Equal mass at every valid point (unweighted statistics)."""
    w = np.where(grid.valid, 1.0, 0.0)
    return WeightField(grid=grid, weights=w / w.sum())


def fraction_of_sphere(mask, weights: WeightField) -> float:
    """Percentage of the valid sphere covered by ``mask``.

    ``mask`` is a boolean array on the grid, or any object with a ``mask``
    attribute holding one (a region-of-interest mask, for instance).
    Invalid points count in neither numerator nor denominator; the weights
    already carry that convention.
    """
    m = np.asarray(getattr(mask, "mask", mask), dtype=bool)
    if m.shape != weights.grid.shape:
        raise DataError("mask shape must match the weight grid")
    return 100.0 * float(weights.weights[m].sum())


@dataclass(frozen=True)
class Pattern:
    """A scalar dB field on a grid: EIRP (dBm) or blockage loss (dB).

    Values are NaN at invalid points. Anything below ``FLOOR_DB`` has been
    clamped, with ``floored`` recording that it happened.
    """

    grid: AngularGrid
    values: np.ndarray
    kind: str = "eirp"
    floored: bool = field(default=False, compare=False)

    def __post_init__(self):
        v = _as_readonly(np.asarray(self.values, dtype=float))
        if v.shape != self.grid.shape:
            raise ConfigError("values shape must match the grid")
        if self.kind not in ("eirp", "loss"):
            raise ConfigError("pattern kind must be 'eirp' or 'loss'")
        object.__setattr__(self, "values", v)

    @classmethod
    def from_values(cls, grid: AngularGrid, values: np.ndarray,
                    kind: str = "eirp") -> "Pattern":
        """Clamp to the floor, blank invalid points, and wrap."""
        v = np.array(values, dtype=float)
        if v.shape != grid.shape:
            raise ConfigError("values shape must match the grid")
        v[~grid.valid] = np.nan
        low = v < FLOOR_DB
        floored = bool(np.any(low))
        if floored:
            v[low] = FLOOR_DB
        if np.any(~np.isfinite(v) & grid.valid):
            raise DataError("non-finite value at a valid grid point")
        return cls(grid=grid, values=v, kind=kind, floored=floored)

    def valid_values(self) -> np.ndarray:
        """Flat array of values at valid points."""
        return self.values[self.grid.valid]

    def max_value(self) -> float:
        return float(np.nanmax(self.values[self.grid.valid]))

    def shifted(self, delta_db: float) -> "Pattern":
        """Same field with ``delta_db`` subtracted everywhere."""
        return Pattern.from_values(self.grid, self.values - delta_db,
                                   kind=self.kind)


@dataclass(frozen=True)
class PatternSet:
    """One pattern per codebook beam, all on the same grid."""

    patterns: tuple[Pattern, ...]

    def __post_init__(self):
        if not self.patterns:
            raise ConfigError("a pattern set needs at least one beam")
        g = self.patterns[0].grid
        for p in self.patterns[1:]:
            if p.grid != g:
                raise DataError("all beam patterns must share one grid")
        object.__setattr__(self, "patterns", tuple(self.patterns))

    @property
    def grid(self) -> AngularGrid:
        return self.patterns[0].grid

    def __len__(self) -> int:
        return len(self.patterns)

    def __iter__(self):
        return iter(self.patterns)

    def __getitem__(self, i: int) -> Pattern:
        return self.patterns[i]
