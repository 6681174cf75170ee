"""Semi-global cost aggregation and disparity extraction.

Raw census costs are aggregated along 4 or 8 one-dimensional paths with the
usual small/large discontinuity penalties, then a per-pixel winner-takes-all
pick is refined to sub-pixel precision by parabolic interpolation and
cross-checked against the opposite matching direction.

The per-path recurrence subtracts the predecessor's minimum each step.  This
keeps values bounded and leaves the per-pixel argmin unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .census import CostVolume
from .core import ConfigError, DepthMap

# unit steps (dv, du); the first four are the axis-aligned paths
DIRECTIONS_8 = (
    (0, 1),
    (0, -1),
    (1, 0),
    (-1, 0),
    (1, 1),
    (1, -1),
    (-1, 1),
    (-1, -1),
)

_BIG = np.int32(1) << 28  # stands in for a missing d +/- 1 neighbour


@dataclass
class AggregatedVolume:
    """Path-summed costs, keeping a handle on the raw volume for validity."""

    cost: np.ndarray  # int32 (H, W, K)
    source: CostVolume
    num_paths: int

    @property
    def drange(self):
        return self.source.drange


def _step(prev: np.ndarray, cur: np.ndarray, p1: int, p2: int) -> np.ndarray:
    """One recurrence step along a path, vectorized over a pixel front.

    ``prev``/``cur`` are (M, K) slices of path costs and raw costs.
    """
    floor = prev.min(axis=-1, keepdims=True)
    up = np.empty_like(prev)
    up[..., 1:] = prev[..., :-1]
    up[..., 0] = _BIG
    down = np.empty_like(prev)
    down[..., :-1] = prev[..., 1:]
    down[..., -1] = _BIG
    cand = np.minimum(prev, floor + p2)
    np.minimum(cand, up + p1, out=cand)
    np.minimum(cand, down + p1, out=cand)
    return cur + cand - floor


def _sweep(cost: np.ndarray, dv: int, du: int, p1: int, p2: int) -> np.ndarray:
    """Aggregate along one direction; path starts carry the raw cost."""
    height, width, _ = cost.shape
    out = np.empty_like(cost)
    if dv == 0:
        xs = range(width) if du > 0 else range(width - 1, -1, -1)
        first = True
        for x in xs:
            if first:
                out[:, x] = cost[:, x]
                first = False
            else:
                out[:, x] = _step(out[:, x - du], cost[:, x], p1, p2)
    elif du == 0:
        ys = range(height) if dv > 0 else range(height - 1, -1, -1)
        first = True
        for y in ys:
            if first:
                out[y] = cost[y]
                first = False
            else:
                out[y] = _step(out[y - dv], cost[y], p1, p2)
    else:
        ys = range(height) if dv > 0 else range(height - 1, -1, -1)
        first = True
        for y in ys:
            if first:
                out[y] = cost[y]
                first = False
            elif du > 0:
                out[y, 0] = cost[y, 0]
                out[y, 1:] = _step(out[y - dv, :-1], cost[y, 1:], p1, p2)
            else:
                out[y, -1] = cost[y, -1]
                out[y, :-1] = _step(out[y - dv, 1:], cost[y, :-1], p1, p2)
    return out


def aggregate(volume: CostVolume, p1: int, p2: int, num_paths: int = 8) -> AggregatedVolume:
    """Sum the per-path aggregated costs over all traversal directions."""
    if p1 < 0 or p2 < p1:
        raise ConfigError("penalties must satisfy 0 <= p1 <= p2")
    if num_paths not in (4, 8):
        raise ConfigError("num_paths must be 4 or 8")
    cost = volume.cost.astype(np.int32, copy=False)
    total = np.zeros_like(cost)
    for dv, du in DIRECTIONS_8[:num_paths]:
        total += _sweep(cost, dv, du, p1, p2)
    return AggregatedVolume(total, volume, num_paths)


def winner_takes_all(agg: AggregatedVolume) -> DepthMap:
    """Per-pixel disparity of minimal summed cost (ties -> lowest level).

    Pixels whose winning hypothesis was an invalid match in the raw volume
    are flagged invalid.
    """
    level = np.argmin(agg.cost, axis=-1)
    raw_at_winner = np.take_along_axis(
        agg.source.cost, level[..., None], axis=-1
    )[..., 0]
    valid = raw_at_winner <= agg.source.census_length
    values = agg.drange.level_to_disparity(level).astype(np.float32)
    return DepthMap(values, valid)


def subpixel_refine(agg: AggregatedVolume, init: DepthMap) -> DepthMap:
    """Shift each winner to the vertex of the parabola through its
    neighbouring summed costs; the offset is clamped to [-0.5, 0.5] and
    winners at the ends of the hypothesis range keep their integer value.
    """
    levels = agg.cost.shape[2]
    level = agg.drange.disparity_to_level(np.rint(init.values).astype(np.int64))
    interior = init.valid & (level > 0) & (level < levels - 1)
    li = np.clip(level, 1, levels - 2)
    rows, cols = np.indices(level.shape)
    a = agg.cost[rows, cols, li - 1].astype(np.float64)
    b = agg.cost[rows, cols, li].astype(np.float64)
    c = agg.cost[rows, cols, li + 1].astype(np.float64)
    denom = a - 2.0 * b + c  # >= 0 at a cost minimum; 0 means flat
    with np.errstate(divide="ignore", invalid="ignore"):
        offset = np.where(denom != 0.0, (a - c) / (2.0 * denom), 0.0)
    offset = np.clip(offset, -0.5, 0.5)
    values = np.where(interior, init.values + offset, init.values)
    return DepthMap(values.astype(np.float32), init.valid.copy())


def lr_check(
    d_left: DepthMap,
    d_right: DepthMap,
    phi: float,
    axis: str = "horizontal",
    literal: bool = False,
) -> np.ndarray:
    """Boolean reliability mask for the reference-view map.

    Default mode looks up the opposite map at the matched coordinate
    (``p + round(d_left(p))`` along the matching axis) and accepts when the
    two estimates differ by less than ``phi``.  ``literal=True`` compares
    both maps at the same pixel instead.  Out-of-bounds lookups and invalid
    values are unreliable.
    """
    if d_left.shape != d_right.shape:
        raise ValueError("maps must have the same dimensions")
    if axis not in ("horizontal", "vertical"):
        raise ConfigError(f"unknown axis {axis!r}")
    if literal:
        ok = d_left.valid & d_right.valid
        return ok & (np.abs(d_left.values - d_right.values) < phi)

    height, width = d_left.shape
    offset = np.rint(d_left.values).astype(np.int64)
    rows, cols = np.indices((height, width))
    if axis == "horizontal":
        look_r, look_c = rows, cols + offset
        inb = (look_c >= 0) & (look_c < width)
    else:
        look_r, look_c = rows + offset, cols
        inb = (look_r >= 0) & (look_r < height)
    look_r = np.clip(look_r, 0, height - 1)
    look_c = np.clip(look_c, 0, width - 1)
    other = d_right.values[look_r, look_c]
    other_ok = d_right.valid[look_r, look_c]
    ok = d_left.valid & inb & other_ok
    return ok & (np.abs(d_left.values - other) < phi)
