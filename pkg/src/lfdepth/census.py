"""Sparse census transform and Hamming-distance cost volumes.

Each pixel is encoded as a bit string of brightness comparisons against a
configurable set of window offsets; matching cost between two views is the
Hamming distance between their bit strings at shifted positions.  Bit
strings are packed into uint64 words (one bit per pattern offset), so the
pattern may hold at most 64 offsets.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ConfigError, DisparityRange


@dataclass(frozen=True)
class CensusImage:
    """Packed census bit strings with a window-margin validity mask."""

    bits: np.ndarray          # uint64 (H, W)
    margin_valid: np.ndarray  # bool (H, W)
    length: int               # number of pattern offsets

    @property
    def shape(self) -> tuple[int, int]:
        return self.bits.shape


def census_transform(img: np.ndarray, pattern) -> CensusImage:
    """Census-transform a grayscale image over the given offset pattern.

    Bit ``k`` of a pixel's string is 1 iff the pixel is strictly brighter
    than its neighbour at ``pattern[k] = (i, j)``, sampled at
    ``(u + i, v + j)``.  Pixels closer to the border than the largest offset
    magnitude are marked ``margin_valid=False`` and carry all-zero strings.
    """
    pattern = tuple((int(i), int(j)) for i, j in pattern)
    if len(pattern) == 0:
        raise ConfigError("census pattern must not be empty")
    if len(pattern) > 64:
        raise ConfigError("census pattern exceeds 64 offsets")
    img = np.asarray(img)
    if img.ndim != 2:
        raise ConfigError("census transform expects a 2-D grayscale image")
    height, width = img.shape
    bits = np.zeros((height, width), np.uint64)
    for k, (i, j) in enumerate(pattern):
        # neighbour[v, u] = img[v + j, u + i]; wrapped entries land only in
        # the margin, which is zeroed below.
        neighbour = np.roll(img, (-j, -i), axis=(0, 1))
        bits |= (img > neighbour).astype(np.uint64) << np.uint64(k)
    radius = max(max(abs(i), abs(j)) for i, j in pattern)
    margin_valid = np.zeros((height, width), bool)
    if height > 2 * radius and width > 2 * radius:
        if radius:
            margin_valid[radius:-radius, radius:-radius] = True
        else:
            margin_valid[:] = True
    bits[~margin_valid] = 0
    return CensusImage(bits, margin_valid, len(pattern))


def hamming(a, b):
    """Number of differing bits between equal-shape packed bit strings."""
    a = np.asarray(a, dtype=np.uint64)
    b = np.asarray(b, dtype=np.uint64)
    if a.shape != b.shape:
        raise ValueError("bit strings must have the same shape")
    return np.bitwise_count(np.bitwise_xor(a, b)).astype(np.int32)


@dataclass
class CostVolume:
    """Per-pixel, per-hypothesis matching cost.

    ``cost[v, u, k]`` holds the Hamming distance for hypothesis level ``k``
    (disparity ``k - d1_max``); out-of-bounds or margin matches hold
    ``invalid_cost = census_length + 1``, strictly worse than any real
    mismatch but finite for aggregation.
    """

    cost: np.ndarray  # int32 (H, W, K)
    drange: DisparityRange
    census_length: int

    @property
    def invalid_cost(self) -> int:
        return self.census_length + 1

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.cost.shape

    def invalid_mask(self) -> np.ndarray:
        return self.cost > self.census_length


def build_cost_volume(
    c1: CensusImage,
    c2: CensusImage,
    drange: DisparityRange,
    axis: str = "horizontal",
    direction_sign: int = 1,
) -> CostVolume:
    """Hamming cost volume between two census images.

    For each level ``k`` the reference pixel ``c1[v, u]`` is compared with
    ``c2`` at ``u + direction_sign * d`` (horizontal axis) or
    ``v + direction_sign * d`` (vertical axis), ``d = k - d1_max``.  Matches
    that leave the image, land on a margin pixel, or originate from a margin
    pixel get the invalid cost.
    """
    if c1.shape != c2.shape:
        raise ValueError("census images must have the same dimensions")
    if c1.length != c2.length:
        raise ValueError("census images must use the same pattern length")
    if axis not in ("horizontal", "vertical"):
        raise ConfigError(f"unknown axis {axis!r}")
    if direction_sign not in (1, -1):
        raise ConfigError("direction_sign must be +1 or -1")

    height, width = c1.shape
    levels = drange.num_levels
    invalid = c1.length + 1
    cost = np.full((height, width, levels), invalid, np.int32)

    extent = width if axis == "horizontal" else height
    for k in range(levels):
        offset = direction_sign * drange.level_to_disparity(k)
        lo = max(0, -offset)
        hi = min(extent, extent - offset)
        if lo >= hi:
            continue
        if axis == "horizontal":
            ref = (slice(None), slice(lo, hi))
            tgt = (slice(None), slice(lo + offset, hi + offset))
        else:
            ref = (slice(lo, hi), slice(None))
            tgt = (slice(lo + offset, hi + offset), slice(None))
        dist = np.bitwise_count(
            np.bitwise_xor(c1.bits[ref], c2.bits[tgt])
        ).astype(np.int32)
        usable = c1.margin_valid[ref] & c2.margin_valid[tgt]
        cost[ref[0], ref[1], k] = np.where(usable, dist, invalid)
    return CostVolume(cost, drange, c1.length)
