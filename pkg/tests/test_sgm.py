import numpy as np
import pytest
from scipy import ndimage

from lfdepth.census import CostVolume, build_cost_volume, census_transform
from lfdepth.core import DepthMap, DisparityRange
from lfdepth.sgm import (
    aggregate,
    _sweep,
    lr_check,
    subpixel_refine,
    winner_takes_all,
)

FULL_8 = tuple(
    (i, j) for j in (-1, 0, 1) for i in (-1, 0, 1) if (i, j) != (0, 0)
)


def _volume(cost, d1=1, d2=1, length=24):
    cost = np.asarray(cost, np.int32)
    return CostVolume(cost, DisparityRange(d1, d2), length)


class TestAggregate:
    def test_zero_volume_stays_zero(self):
        vol = _volume(np.zeros((4, 5, 3), np.int32))
        agg = aggregate(vol, p1=2, p2=5)
        assert np.all(agg.cost == 0)

    def test_single_pixel_sums_raw_cost(self):
        vol = _volume(np.array([[[3, 1, 7]]], np.int32))
        agg = aggregate(vol, p1=2, p2=5, num_paths=8)
        assert np.array_equal(agg.cost, 8 * vol.cost)
        agg4 = aggregate(vol, p1=2, p2=5, num_paths=4)
        assert np.array_equal(agg4.cost, 4 * vol.cost)

    def test_hand_unrolled_1x3_two_horizontal_paths(self):
        # raw costs per pixel (2 hypotheses), P1=1, P2=3.  Unrolling the
        # recurrence by hand (min-subtraction included):
        #   left->right: [[1,4],[3,1],[3,5]]
        #   right->left: [[2,4],[3,1],[2,5]]
        cost = np.array([[[1, 4], [3, 0], [2, 5]]], np.int32)
        lr = _sweep(cost, 0, 1, 1, 3)
        rl = _sweep(cost, 0, -1, 1, 3)
        assert np.array_equal(lr, [[[1, 4], [3, 1], [3, 5]]])
        assert np.array_equal(rl, [[[2, 4], [3, 1], [2, 5]]])
        total = lr + rl
        assert np.array_equal(total, [[[3, 8], [6, 2], [5, 10]]])

    def test_constant_shift_leaves_winner_unchanged(self):
        rng = np.random.default_rng(0)
        cost = rng.integers(0, 20, (6, 7, 5)).astype(np.int32)
        base = winner_takes_all(aggregate(_volume(cost, 2, 2), 3, 9))
        shifted = winner_takes_all(aggregate(_volume(cost + 11, 2, 2), 3, 9))
        assert np.array_equal(base.values, shifted.values)

    def test_zero_penalties_degenerate_to_raw_argmin(self):
        rng = np.random.default_rng(1)
        cost = rng.integers(0, 20, (5, 6, 4)).astype(np.int32)
        agg = aggregate(_volume(cost, 1, 2), 0, 0)
        assert np.array_equal(agg.cost, 8 * cost)
        picked = winner_takes_all(agg)
        raw_pick = np.argmin(cost, axis=-1) - 1
        assert np.array_equal(picked.values, raw_pick.astype(np.float32))


class TestWinnerTakesAll:
    def test_unique_minimum(self):
        agg = aggregate(_volume(np.array([[[5, 1, 3]]], np.int32)), 1, 2)
        assert winner_takes_all(agg).values[0, 0] == 0.0

    def test_tie_breaks_to_lowest_level(self):
        agg = aggregate(_volume(np.array([[[2, 2, 7]]], np.int32)), 1, 2)
        assert winner_takes_all(agg).values[0, 0] == -1.0

    def test_all_invalid_column_flagged(self):
        cost = np.zeros((1, 2, 3), np.int32)
        cost[0, 1, :] = 25  # invalid cost for a 24-bit pattern
        agg = aggregate(_volume(cost), 1, 2)
        result = winner_takes_all(agg)
        assert result.valid[0, 0]
        assert not result.valid[0, 1]


class TestSubpixel:
    def _refined(self, triple, d1=1, d2=1):
        cost = np.array([[list(triple)]], np.int32)
        vol = _volume(cost, d1, d2)
        agg = aggregate(vol, 1, 2, num_paths=8)
        init = winner_takes_all(agg)
        return init, subpixel_refine(agg, init)

    def test_symmetric_parabola_keeps_integer(self):
        init, sub = self._refined((4, 2, 4))
        assert init.values[0, 0] == 0.0
        assert sub.values[0, 0] == 0.0

    def test_vertex_offset_one_sixth(self):
        # parabola through (-1, 6), (0, 2), (1, 4): vertex at +1/6
        init, sub = self._refined((6, 2, 4))
        assert init.values[0, 0] == 0.0
        assert sub.values[0, 0] == pytest.approx(1.0 / 6.0)

    def test_boundary_winner_unchanged(self):
        init, sub = self._refined((5, 3, 1))  # winner at d = +d2_max
        assert init.values[0, 0] == 1.0
        assert sub.values[0, 0] == 1.0

    def test_flat_cost_zero_offset(self):
        init, sub = self._refined((2, 2, 2))
        assert sub.values[0, 0] == init.values[0, 0]

    def test_offset_bounded_by_half(self):
        rng = np.random.default_rng(4)
        cost = rng.integers(0, 24, (8, 9, 7)).astype(np.int32)
        agg = aggregate(_volume(cost, 3, 3), 5, 11)
        init = winner_takes_all(agg)
        sub = subpixel_refine(agg, init)
        assert np.all(np.abs(sub.values - init.values) <= 0.5)


class TestLrCheck:
    def test_identical_zero_maps_fully_reliable(self):
        m = DepthMap.full((4, 6), 0.0)
        assert np.all(lr_check(m, m, phi=3.0))

    def test_fronto_parallel_plane_consistent(self):
        # both views of a plane at constant shift 5 agree after the
        # correspondence-aware lookup; only the last 5 columns fall outside
        left = DepthMap.full((3, 12), 5.0)
        right = DepthMap.full((3, 12), 5.0)
        mask = lr_check(left, right, phi=3.0)
        assert np.all(mask[:, :7])
        assert not mask[:, 8:].any()

    def test_large_disagreement_rejected(self):
        left = DepthMap.full((2, 4), 0.0)
        right = DepthMap.full((2, 4), 10.0)
        assert not lr_check(left, right, phi=3.0).any()

    def test_literal_mode_compares_same_pixel(self):
        left = DepthMap.full((2, 8), 4.0)
        right = DepthMap.full((2, 8), 4.0)
        assert np.all(lr_check(left, right, phi=1.0, literal=True))

    def test_invalid_pixels_unreliable(self):
        left = DepthMap.full((2, 4), 0.0)
        left.valid[0, 0] = False
        right = DepthMap.full((2, 4), 0.0)
        mask = lr_check(left, right, phi=3.0)
        assert not mask[0, 0]
        assert mask[1, 1]

    def test_vertical_axis_lookup(self):
        top = DepthMap.full((10, 2), 3.0)
        bottom = DepthMap.full((10, 2), 3.0)
        mask = lr_check(top, bottom, phi=1.0, axis="vertical")
        assert np.all(mask[:7])
        assert not mask[7:].any()


def _smooth_texture(rng, height, width):
    img = rng.standard_normal((height, width))
    img = ndimage.gaussian_filter(img, 2.5)
    img -= img.min()
    img /= img.max()
    return np.rint(img * 255).astype(np.uint8)


@pytest.mark.parametrize("shift", [-3, 0, 2, 4])
def test_integer_shift_pair_recovered(shift):
    # rectified pair cut from one texture with a known integer offset
    rng = np.random.default_rng(42 + shift)
    height, width, pad = 40, 60, 8
    big = _smooth_texture(rng, height, width + 2 * pad)
    i1 = big[:, pad : pad + width]
    i2 = big[:, pad - shift : pad - shift + width]
    c1 = census_transform(i1, FULL_8)
    c2 = census_transform(i2, FULL_8)
    vol = build_cost_volume(c1, c2, DisparityRange(5, 5))
    agg = aggregate(vol, p1=21, p2=45)
    init = winner_takes_all(agg)
    sub = subpixel_refine(agg, init)
    margin = abs(shift) + 2
    interior = init.values[margin:-margin, margin:-margin]
    assert np.mean(interior == shift) >= 0.95
    assert np.all(np.abs(sub.values - init.values) <= 0.5)
