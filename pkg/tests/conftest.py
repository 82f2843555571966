"""Shared fixtures and small helpers for the test suite."""

import numpy as np
import pytest

from beamblock.grid import AngularGrid, Pattern, PatternSet, make_grid
from beamblock.synth import ArrayConfig, BeamSpec, synth_pattern_set


def dyadic(rng, shape, lo=-60.0, hi=10.0):
    """Random values on a 2^-10 lattice so add/subtract round-trips exactly."""
    steps = rng.integers(int(lo * 1024), int(hi * 1024), size=shape)
    return steps.astype(float) / 1024.0


def pattern_on(grid: AngularGrid, values, kind="eirp") -> Pattern:
    return Pattern.from_values(grid, np.asarray(values, dtype=float), kind=kind)


@pytest.fixture(scope="session")
def full_grid():
    return make_grid(5.0, 5.0, 175.0)


@pytest.fixture(scope="session")
def tiny_grid():
    # 3 rows x 4 columns, coarse but valid everywhere
    return make_grid(90.0, 45.0, 135.0)


@pytest.fixture(scope="session")
def patch_config():
    return ArrayConfig(n_elements=4, spacing=0.5, element_kind="patch",
                       phase_bits=3, tx_power_dbm=-30.0,
                       element_peak_gain_dbi=5.0, boresight_phi=180.0)


@pytest.fixture(scope="session")
def patch_beams():
    return [BeamSpec(scan_deg=0.0), BeamSpec(scan_deg=30.0),
            BeamSpec(scan_deg=-30.0)]


@pytest.fixture(scope="session")
def patch_set(full_grid, patch_config, patch_beams) -> PatternSet:
    return synth_pattern_set(patch_config, patch_beams, full_grid)


@pytest.fixture(scope="session")
def dipole_config():
    return ArrayConfig(n_elements=2, spacing=0.5, element_kind="dipole",
                       phase_bits=3, tx_power_dbm=-30.0,
                       element_peak_gain_dbi=5.0, boresight_phi=180.0)


@pytest.fixture(scope="session")
def dipole_set(full_grid, dipole_config) -> PatternSet:
    beams = [BeamSpec(scan_deg=0.0), BeamSpec(scan_deg=45.0),
             BeamSpec(scan_deg=-45.0)]
    return synth_pattern_set(dipole_config, beams, full_grid)
