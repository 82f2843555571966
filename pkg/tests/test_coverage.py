"""Best-beam overlays, weighted CDFs, percentiles, and coverage loss."""

from fractions import Fraction

import numpy as np
import pytest

from beamblock.coverage import (CoverageLost, OverlayPattern, WeightedCDF,
                                coverage_above, coverage_lost,
                                lost_percentages, overlay_best_beam,
                                percentile_loss, percentile_value,
                                weighted_cdf)
from beamblock.errors import ConfigError, DataError
from beamblock.grid import (AngularGrid, Pattern, PatternSet, make_grid,
                            solid_angle_weights, uniform_weights,
                            with_invalid_band)

PROBE_PERCENTILES = (90.0, 80.0, 50.0, 33.3, 20.0, 10.0)


def _two_point_grid():
    return AngularGrid(phi=np.array([0.0, 180.0]), theta=np.array([90.0]),
                       valid=np.ones((1, 2), dtype=bool))


def _pattern(grid, values):
    return Pattern.from_values(grid, np.asarray(values, dtype=float),
                               kind="eirp")


def oracle_percentile(values, weights, p):
    """Largest sample with exact rational tail mass >= p/100."""
    total = sum(weights)
    target = Fraction(p).limit_denominator(10 ** 6) / 100
    best = None
    for v in sorted(set(values)):
        tail = Fraction(sum(w for x, w in zip(values, weights) if x >= v),
                        total)
        if tail >= target:
            best = v
    return best


class TestOverlay:
    def test_single_beam_identity(self, tiny_grid):
        pat = _pattern(tiny_grid, np.arange(8.0).reshape(2, 4))
        over = overlay_best_beam(PatternSet(patterns=[pat]))
        assert np.array_equal(over.pattern.values, pat.values)
        assert (over.best_beam == 0).all()

    def test_pointwise_max_and_index(self, tiny_grid):
        lo = _pattern(tiny_grid, np.zeros((2, 4)))
        hi = _pattern(tiny_grid, np.full((2, 4), 3.0))
        over = overlay_best_beam(PatternSet(patterns=[lo, hi]))
        assert np.allclose(over.pattern.values, 3.0)
        assert (over.best_beam == 1).all()

    def test_ties_pick_lowest_index(self, tiny_grid):
        a = _pattern(tiny_grid, np.ones((2, 4)))
        b = _pattern(tiny_grid, np.ones((2, 4)))
        over = overlay_best_beam(PatternSet(patterns=[a, b]))
        assert (over.best_beam == 0).all()

    def test_matches_bruteforce_max(self, patch_set, full_grid):
        over = overlay_best_beam(patch_set)
        stack = np.stack([p.values for p in patch_set.patterns])
        rng = np.random.default_rng(5)
        for _ in range(20):
            i = rng.integers(0, full_grid.theta.size)
            j = rng.integers(0, full_grid.phi.size)
            assert over.pattern.values[i, j] == stack[:, i, j].max()

    def test_invalid_points_flagged(self):
        grid = with_invalid_band(make_grid(5.0, 5.0, 175.0), 5.0, 10.0)
        pat = Pattern.from_values(grid, np.zeros(grid.valid.shape),
                                  kind="eirp")
        over = overlay_best_beam(PatternSet(patterns=[pat]))
        assert (over.best_beam[:2] == -1).all()
        assert (over.best_beam[2:] == 0).all()


class TestWeightedCDF:
    def test_two_equal_points(self):
        grid = _two_point_grid()
        cdf = weighted_cdf(_pattern(grid, [[-30.0, -40.0]]),
                           solid_angle_weights(grid))
        assert cdf.cdf_at(-40.0) == pytest.approx(0.5)
        assert cdf.cdf_at(-35.0) == pytest.approx(0.5)
        assert cdf.cdf_at(-30.0) == pytest.approx(1.0)
        assert cdf.cdf_at(-41.0) == 0.0

    def test_constant_is_unit_step(self, tiny_grid):
        cdf = weighted_cdf(_pattern(tiny_grid, np.full((2, 4), -25.0)),
                           solid_angle_weights(tiny_grid))
        assert cdf.cdf_at(-25.0) == pytest.approx(1.0)
        assert cdf.cdf_at(-25.0 - 1e-9) == 0.0

    def test_sine_weighted_three_points(self):
        # two equator points and one at 30 deg: weights 0.4 / 0.4 / 0.2
        valid = np.array([[True, False], [True, True]])
        grid = AngularGrid(phi=np.array([0.0, 180.0]),
                           theta=np.array([30.0, 90.0]), valid=valid)
        values = np.array([[-30.0, 0.0], [-10.0, -20.0]])
        cdf = weighted_cdf(_pattern(grid, values), solid_angle_weights(grid))
        assert cdf.cdf_at(-30.0) == pytest.approx(0.2)
        assert cdf.cdf_at(-20.0) == pytest.approx(0.6)
        assert cdf.cdf_at(-10.0) == pytest.approx(1.0)

    def test_monotone_and_normalized(self, patch_set, full_grid):
        cdf = weighted_cdf(patch_set.patterns[0],
                           solid_angle_weights(full_grid))
        assert np.all(np.diff(cdf.values) >= 0)
        assert np.all(np.diff(cdf.cum_weights) >= 0)
        assert abs(cdf.cum_weights[-1] - 1.0) < 1e-9

    def test_mask_renormalizes(self, full_grid, patch_set):
        weights = solid_angle_weights(full_grid)
        mask = full_grid.theta[:, None] < 90.0
        mask = np.broadcast_to(mask, full_grid.valid.shape)
        cdf = weighted_cdf(patch_set.patterns[0], weights, mask=mask)
        assert abs(cdf.cum_weights[-1] - 1.0) < 1e-9

    def test_grid_mismatch_rejected(self, tiny_grid, full_grid):
        pat = _pattern(tiny_grid, np.zeros((2, 4)))
        with pytest.raises(DataError):
            weighted_cdf(pat, solid_angle_weights(full_grid))


class TestCoverageAbove:
    def test_constant_all_or_nothing(self, tiny_grid):
        weights = solid_angle_weights(tiny_grid)
        pat = _pattern(tiny_grid, np.full((2, 4), -30.0))
        assert coverage_above(pat, weights, -35.0) == pytest.approx(100.0)
        assert coverage_above(pat, weights, -20.0) == 0.0

    def test_threshold_is_non_strict(self, tiny_grid):
        weights = solid_angle_weights(tiny_grid)
        pat = _pattern(tiny_grid, np.full((2, 4), -35.0))
        assert coverage_above(pat, weights, -35.0) == pytest.approx(100.0)

    def test_half_split(self):
        grid = _two_point_grid()
        pat = _pattern(grid, [[-20.0, -50.0]])
        cov = coverage_above(pat, solid_angle_weights(grid), -30.0)
        assert cov == pytest.approx(50.0)

    def test_complements_cdf(self, patch_set, full_grid):
        weights = solid_angle_weights(full_grid)
        pat = patch_set.patterns[0]
        cdf = weighted_cdf(pat, weights)
        for t in (-80.0, -60.0, -45.0, -30.0):
            cov = coverage_above(pat, weights, t)
            assert cov == pytest.approx(100.0 * cdf.tail_at(t), abs=1e-9)


class TestPercentiles:
    def test_unit_step(self, tiny_grid):
        cdf = weighted_cdf(_pattern(tiny_grid, np.full((2, 4), -30.0)),
                           solid_angle_weights(tiny_grid))
        assert percentile_value(cdf, 50.0) == -30.0
        assert percentile_value(cdf, 100.0) == -30.0

    def test_two_point_split(self):
        grid = _two_point_grid()
        cdf = weighted_cdf(_pattern(grid, [[-30.0, -40.0]]),
                           solid_angle_weights(grid))
        assert percentile_value(cdf, 90.0) == -40.0
        assert percentile_value(cdf, 20.0) == -30.0
        assert percentile_value(cdf, 50.0) == -30.0

    def test_out_of_range_rejected(self, tiny_grid):
        cdf = weighted_cdf(_pattern(tiny_grid, np.zeros((2, 4))),
                           solid_angle_weights(tiny_grid))
        with pytest.raises(ConfigError):
            percentile_value(cdf, 101.0)
        with pytest.raises(ConfigError):
            percentile_value(cdf, -1.0)

    def test_galois_connection(self, patch_set, full_grid):
        """Coverage at the p-th percentile value is at least p."""
        weights = solid_angle_weights(full_grid)
        pat = patch_set.patterns[0]
        cdf = weighted_cdf(pat, weights)
        for p in PROBE_PERCENTILES:
            v = percentile_value(cdf, p)
            assert coverage_above(pat, weights, v) >= p - 1e-9

    def test_matches_fraction_oracle(self, tiny_grid):
        rng = np.random.default_rng(17)
        weights = uniform_weights(tiny_grid)
        for _ in range(50):
            vals = rng.integers(-50, -10, size=(2, 4)).astype(float)
            cdf = weighted_cdf(_pattern(tiny_grid, vals), weights)
            for p in PROBE_PERCENTILES:
                want = oracle_percentile(list(vals.ravel()), [1] * 8, p)
                assert percentile_value(cdf, p) == want

    def test_percentile_loss_constant_shift(self, full_grid):
        # far from the floor so the 30 dB shift cannot saturate
        rng = np.random.default_rng(29)
        weights = solid_angle_weights(full_grid)
        vals = rng.integers(-70 * 1024, 0, size=full_grid.valid.shape)
        free = _pattern(full_grid, vals / 1024.0)
        blocked = free.shifted(30.0)
        f_cdf = weighted_cdf(free, weights)
        b_cdf = weighted_cdf(blocked, weights)
        for p in PROBE_PERCENTILES:
            assert percentile_loss(f_cdf, b_cdf, p) == 30.0

    def test_shift_equivariance(self, full_grid):
        rng = np.random.default_rng(23)
        weights = solid_angle_weights(full_grid)
        vals = rng.uniform(-70.0, 0.0, size=full_grid.valid.shape)
        pat = _pattern(full_grid, vals)
        for c in (7.25, -3.5, 12.0):
            shifted = _pattern(full_grid, vals + c)
            a = weighted_cdf(pat, weights)
            b = weighted_cdf(shifted, weights)
            for p in PROBE_PERCENTILES:
                assert percentile_value(b, p) == pytest.approx(
                    percentile_value(a, p) + c, abs=1e-9)
            for t in (-60.0, -40.0, -20.0):
                assert coverage_above(shifted, weights, t + c) \
                    == pytest.approx(coverage_above(pat, weights, t),
                                     abs=1e-9)


class TestCoverageLost:
    def test_no_blockage_loses_nothing(self, tiny_grid):
        weights = solid_angle_weights(tiny_grid)
        pat = _pattern(tiny_grid, np.full((2, 4), -30.0))
        lost = coverage_lost(pat, pat, weights, -35.0)
        assert lost.abs_lost_pct == 0.0
        assert lost.rel_lost_pct == 0.0

    def test_fixture_values(self):
        abs_lost, rel_lost = lost_percentages(23.3, 3.4)
        assert abs_lost == pytest.approx(19.9, abs=1e-9)
        assert rel_lost == pytest.approx(85.4, abs=0.05)
        abs_lost, rel_lost = lost_percentages(23.3, 13.1)
        assert abs_lost == pytest.approx(10.2, abs=1e-9)
        assert rel_lost == pytest.approx(43.8, abs=0.05)

    def test_zero_free_coverage_gives_none(self, tiny_grid):
        weights = solid_angle_weights(tiny_grid)
        pat = _pattern(tiny_grid, np.full((2, 4), -90.0))
        lost = coverage_lost(pat, pat.shifted(10.0), weights, -35.0)
        assert lost.free_pct == 0.0
        assert lost.rel_lost_pct is None

    def test_dataclass_fields(self, tiny_grid):
        weights = solid_angle_weights(tiny_grid)
        free = _pattern(tiny_grid, np.full((2, 4), -30.0))
        lost = coverage_lost(free, free.shifted(10.0), weights, -35.0)
        assert isinstance(lost, CoverageLost)
        assert lost.threshold == -35.0
        assert lost.free_pct == pytest.approx(100.0)
        assert lost.blocked_pct == 0.0
        assert lost.abs_lost_pct == pytest.approx(100.0)
        assert lost.rel_lost_pct == pytest.approx(100.0)
