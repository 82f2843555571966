"""Synthetic phased-array pattern generator and blockage masks.

A uniform linear array sits with its boresight on the equator of the
measurement sphere (theta = 90, phi = boresight_phi) and its element axis
tangent to the equator. With dphi = wrap(phi - boresight_phi), the angle
psi off boresight and the direction cosine u along the array axis are

    cos(psi) = sin(theta) * cos(dphi)
    u        = sin(theta) * sin(dphi)

so no Cartesian conversion is needed anywhere. Element models are
one-parameter idealizations: a patch with cos^q power rolloff (front
hemisphere only) and a dipole with cos^2 amplitude rolloff toward the
array axis. EIRP(dir) = tx_power + element_gain(dir) + array_factor(dir).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .grid import FLOOR_DB, AngularGrid, Pattern, PatternSet

# Patch element power-rolloff exponent; q = 1 gives the ~90 deg element
# half-power beamwidth the synthetic codebooks are calibrated around.
PATCH_Q = 1.0

_ELEMENT_KINDS = ("patch", "dipole", "isotropic")


@dataclass(frozen=True)
class ArrayConfig:
    """Uniform linear array description."""

    n_elements: int = 4
    spacing: float = 0.5          # element pitch in wavelengths
    element_kind: str = "patch"
    phase_bits: int = 3           # 0 means ideal (unquantized) phases
    tx_power_dbm: float = -30.0
    element_peak_gain_dbi: float = 5.0
    boresight_phi: float = 180.0

    def __post_init__(self):
        if self.n_elements < 1:
            raise ConfigError("n_elements must be >= 1")
        if not self.spacing > 0:
            raise ConfigError("spacing must be positive (wavelengths)")
        if self.element_kind not in _ELEMENT_KINDS:
            raise ConfigError(f"element_kind must be one of {_ELEMENT_KINDS}")
        if not 0 <= self.phase_bits <= 8:
            raise ConfigError("phase_bits must lie in [0, 8]")
        if not 0.0 <= self.boresight_phi < 360.0:
            raise ConfigError("boresight_phi must lie in [0, 360)")


@dataclass(frozen=True)
class BeamSpec:
    """One codebook entry: scan angle off boresight, optional taper."""

    scan_deg: float = 0.0
    amplitude_taper: tuple[float, ...] | None = None

    def __post_init__(self):
        if not -90.0 < self.scan_deg < 90.0:
            raise ConfigError("scan_deg must lie in (-90, 90)")
        if self.amplitude_taper is not None:
            t = tuple(float(x) for x in self.amplitude_taper)
            if any(not 0.0 <= x <= 1.0 for x in t):
                raise ConfigError("amplitude taper entries must be in [0, 1]")
            object.__setattr__(self, "amplitude_taper", t)

    @property
    def label(self) -> str:
        sign = "+" if self.scan_deg >= 0 else "-"
        return f"scan{sign}{abs(self.scan_deg):g}"


def quantize_phases_deg(phases_deg: np.ndarray, bits: int) -> np.ndarray:
    """Snap phases to the 360/2^bits lattice, ties toward the lower phase."""
    if bits == 0:
        return np.asarray(phases_deg, dtype=float) % 360.0
    step = 360.0 / (1 << bits)
    ph = np.asarray(phases_deg, dtype=float) % 360.0
    idx = np.ceil(ph / step - 0.5)
    return (idx * step) % 360.0


def steering_weights(config: ArrayConfig, beam: BeamSpec) -> np.ndarray:
    """Complex element weights steering toward ``beam.scan_deg``."""
    n = config.n_elements
    if beam.amplitude_taper is None:
        taper = np.ones(n)
    else:
        taper = np.asarray(beam.amplitude_taper, dtype=float)
        if taper.size != n:
            raise ConfigError("amplitude taper length must match n_elements")
    k = np.arange(n)
    phases = (-360.0 * config.spacing * k
              * np.sin(np.deg2rad(beam.scan_deg)))
    phases = quantize_phases_deg(phases, config.phase_bits)
    return taper * np.exp(1j * np.deg2rad(phases))


def _array_factor_db_from_u(config: ArrayConfig, weights: np.ndarray,
                            u) -> np.ndarray:
    w = np.asarray(weights)
    if w.shape != (config.n_elements,):
        raise ConfigError("weights length must match n_elements")
    if np.any(np.abs(w) > 1.0 + 1e-9):
        raise ConfigError("weight magnitudes must be <= 1")
    u = np.asarray(u, dtype=float)
    k = np.arange(config.n_elements)
    phase = 2.0 * np.pi * config.spacing * u[..., None] * k
    total = np.abs((w * np.exp(1j * phase)).sum(axis=-1))
    with np.errstate(divide="ignore"):
        return 20.0 * np.log10(total)


def array_factor_db(config: ArrayConfig, weights: np.ndarray,
                    angle_off_boresight) -> np.ndarray:
    """Array factor in dB on the scan plane, angle in degrees.

    Exact nulls clamp to the floor sentinel instead of -inf.
    """
    u = np.sin(np.deg2rad(np.asarray(angle_off_boresight, dtype=float)))
    return np.maximum(_array_factor_db_from_u(config, weights, u), FLOOR_DB)


def _direction_cosines(config: ArrayConfig, phi_deg, theta_deg):
    dphi = (np.asarray(phi_deg, dtype=float)
            - config.boresight_phi + 180.0) % 360.0 - 180.0
    dphi_r = np.deg2rad(dphi)
    sin_t = np.sin(np.deg2rad(np.asarray(theta_deg, dtype=float)))
    cos_psi = sin_t * np.cos(dphi_r)
    u = sin_t * np.sin(dphi_r)
    return cos_psi, u


def element_gain_db(config: ArrayConfig, phi_deg, theta_deg) -> np.ndarray:
    """Element power gain in dBi at broadcastable (phi, theta) arrays."""
    cos_psi, u = _direction_cosines(config, phi_deg, theta_deg)
    peak = config.element_peak_gain_dbi
    with np.errstate(divide="ignore", invalid="ignore"):
        if config.element_kind == "patch":
            g = peak + 20.0 * PATCH_Q * np.log10(np.where(cos_psi > 0,
                                                          cos_psi, np.nan))
            g = np.where(cos_psi > 0, g, -np.inf)
        elif config.element_kind == "dipole":
            roll = 1.0 - u * u
            g = peak + 20.0 * np.log10(np.where(roll > 0, roll, np.nan))
            g = np.where(roll > 0, g, -np.inf)
        else:
            g = np.broadcast_to(float(peak), np.broadcast_shapes(
                np.shape(cos_psi), np.shape(u))).copy()
    return g


def eirp_at(config: ArrayConfig, weights: np.ndarray, phi_deg,
            theta_deg) -> np.ndarray:
    """EIRP in dBm at arbitrary angles, without the floor clamp."""
    _, u = _direction_cosines(config, phi_deg, theta_deg)
    af = _array_factor_db_from_u(config, weights, u)
    elem = element_gain_db(config, phi_deg, theta_deg)
    return config.tx_power_dbm + elem + af


def synth_pattern_set(config: ArrayConfig, beams: list[BeamSpec],
                      grid: AngularGrid) -> PatternSet:
    """EIRP pattern per codebook beam on ``grid``, floor-clamped."""
    if not beams:
        raise ConfigError("at least one beam is required")
    tt, pp = grid.mesh()
    patterns = []
    for beam in beams:
        w = steering_weights(config, beam)
        patterns.append(Pattern.from_values(grid, eirp_at(config, w, pp, tt),
                                            kind="eirp"))
    return PatternSet(patterns=tuple(patterns))


@dataclass(frozen=True)
class MaskRegion:
    """Rectangular (phi, theta) patch of extra loss or reflection gain.

    ``delta_db`` > 0 attenuates, < 0 models a reflection that adds power.
    ``edge_taper_deg`` is the width of a raised-cosine ramp straddling each
    border (membership is exactly 0.5 on the border); 0 means sharp edges
    with non-strict boundaries.
    """

    phi_lo: float
    phi_hi: float
    theta_lo: float
    theta_hi: float
    delta_db: float
    edge_taper_deg: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.phi_lo < 360.0 or not 0.0 < self.phi_hi <= 360.0:
            raise ConfigError("phi bounds must lie in [0, 360]")
        if self.phi_lo == self.phi_hi:
            raise ConfigError("phi_lo and phi_hi must differ")
        if not 0.0 < self.theta_lo <= self.theta_hi < 180.0:
            raise ConfigError("theta bounds must satisfy 0 < lo <= hi < 180")
        if not np.isfinite(self.delta_db):
            raise ConfigError("delta_db must be finite")
        if self.edge_taper_deg < 0:
            raise ConfigError("edge_taper_deg must be >= 0")


def _axis_membership(inner: np.ndarray, taper: float) -> np.ndarray:
    """Raised-cosine membership from signed distance inside the border."""
    if taper == 0.0:
        return (inner >= 0.0).astype(float)
    half = taper / 2.0
    ramp = 0.5 * (1.0 - np.cos(np.pi * (inner + half) / taper))
    return np.where(inner <= -half, 0.0, np.where(inner >= half, 1.0, ramp))


def _region_membership(region: MaskRegion, grid: AngularGrid) -> np.ndarray:
    # phi interval may wrap: measure distance from the interval center.
    lo, hi = region.phi_lo, region.phi_hi
    width = (hi - lo) % 360.0 if hi <= lo else hi - lo
    if hi == 360.0 and lo == 0.0:
        width = 360.0
    center = (lo + width / 2.0) % 360.0
    dist = np.abs((grid.phi - center + 180.0) % 360.0 - 180.0)
    m_phi = _axis_membership(width / 2.0 - dist, region.edge_taper_deg)
    t_center = (region.theta_lo + region.theta_hi) / 2.0
    t_half = (region.theta_hi - region.theta_lo) / 2.0
    m_theta = _axis_membership(t_half - np.abs(grid.theta - t_center),
                               region.edge_taper_deg)
    return m_theta[:, None] * m_phi[None, :]


@dataclass(frozen=True)
class BlockageMask:
    """Ordered list of regions; later regions override where they overlap."""

    regions: tuple[MaskRegion, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "regions", tuple(self.regions))

    def delta_field(self, grid: AngularGrid) -> np.ndarray:
        """Per-point dB delta to subtract from a free-space pattern."""
        field = np.zeros(grid.shape)
        for region in self.regions:
            m = _region_membership(region, grid)
            field = (1.0 - m) * field + m * region.delta_db
        return field


def apply_blockage_mask(free: PatternSet, mask: BlockageMask) -> PatternSet:
    """Subtract the mask's delta field from every beam pattern."""
    delta = mask.delta_field(free.grid)
    blocked = tuple(Pattern.from_values(p.grid, p.values - delta, kind=p.kind)
                    for p in free)
    return PatternSet(patterns=blocked)
