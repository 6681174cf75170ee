"""Fusing stereo depth maps into center-view line-fit borders.

The sub-pixel stereo maps of the extreme views are forward-warped to the
center view, averaged into a synthetic depth map, combined with the
consistency masks (and optionally an edge mask of the center view), and
normalized into per-pixel low/high hypothesis borders for the line fit.
A border pixel left at zero requests a full hypothesis scan.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .core import (
    ConfigError,
    DepthMap,
    DisparityRange,
    center_angular_index,
    to_grayscale,
)


@dataclass
class SyntheticDepth:
    """Center-view averaged depth with per-pixel contributor counts."""

    depth: DepthMap
    source_count: np.ndarray  # int16 (H, W)


@dataclass
class BorderMap:
    """Per-pixel hypothesis borders for the line fit.

    ``b_low``/``b_high`` are inclusive hypothesis indices in ``[0, n_hyp]``;
    ``d_brd`` holds the rounded normalized prior index (0 = full scan) and
    ``k_brd`` the normalization coefficient that produced it.
    """

    b_low: np.ndarray   # int32 (H, W)
    b_high: np.ndarray  # int32 (H, W)
    d_brd: np.ndarray   # int32 (H, W)
    k_brd: float
    n_hyp: int

    @property
    def shape(self) -> tuple[int, int]:
        return self.b_low.shape

    def hypothesis_counts(self) -> np.ndarray:
        return self.b_high.astype(np.int64) - self.b_low + 1

    def bordered_fraction(self) -> float:
        return float(np.mean(self.d_brd != 0))


def _warp_arrays(
    dmap: DepthMap, source_view: tuple[int, int], n: int, m: int, payloads=()
):
    """Forward-warp a map (and aligned payload arrays) to the center view.

    Each valid pixel moves by ``d * (s_hat - s) / (n - 1)`` horizontally and
    ``d * (t_hat - t) / (m - 1)`` vertically, rounded to the nearest pixel.
    Colliding sources resolve to the largest disparity (nearest surface);
    unhit target pixels stay invalid.
    """
    s, t = source_view
    if not (1 <= s <= n and 1 <= t <= m):
        raise ConfigError(f"source view ({s}, {t}) outside {n} x {m} grid")
    s_hat = center_angular_index(n)
    t_hat = center_angular_index(m)
    height, width = dmap.shape
    rows, cols = np.indices((height, width))
    du = dmap.values * ((s_hat - s) / (n - 1)) if n > 1 else 0.0
    dv = dmap.values * ((t_hat - t) / (m - 1)) if m > 1 else 0.0
    tu = np.rint(cols + du).astype(np.int64)
    tv = np.rint(rows + dv).astype(np.int64)
    keep = dmap.valid & (tu >= 0) & (tu < width) & (tv >= 0) & (tv < height)

    src_vals = dmap.values[keep]
    # scatter in ascending disparity order so the largest lands last
    order = np.argsort(src_vals, kind="stable")
    flat = tv[keep][order] * width + tu[keep][order]
    vals = src_vals[order]

    out_vals = np.zeros(height * width, np.float32)
    out_valid = np.zeros(height * width, bool)
    out_vals[flat] = vals
    out_valid[flat] = True
    warped = DepthMap(out_vals.reshape(height, width),
                      out_valid.reshape(height, width))
    warped_payloads = []
    for payload in payloads:
        p_src = np.asarray(payload)[keep][order]
        p_out = np.zeros(height * width, p_src.dtype)
        p_out[flat] = p_src
        warped_payloads.append(p_out.reshape(height, width))
    return warped, warped_payloads


def warp_to_center(
    dmap: DepthMap, source_view: tuple[int, int], n: int, m: int
) -> DepthMap:
    """Forward-warp a full-baseline depth map into center-view coordinates."""
    warped, _ = _warp_arrays(dmap, source_view, n, m)
    return warped


def synthesize(warped) -> SyntheticDepth:
    """Per-pixel mean of the valid contributors of the warped maps."""
    warped = list(warped)
    if not warped:
        raise ConfigError("synthesize needs at least one warped map")
    shape = warped[0].shape
    total = np.zeros(shape, np.float64)
    count = np.zeros(shape, np.int16)
    for dmap in warped:
        if dmap.shape != shape:
            raise ValueError("warped maps must share dimensions")
        total[dmap.valid] += dmap.values[dmap.valid]
        count[dmap.valid] += 1
    valid = count > 0
    values = np.zeros(shape, np.float32)
    values[valid] = (total[valid] / count[valid]).astype(np.float32)
    return SyntheticDepth(DepthMap(values, valid), count)


def combine_confidence(
    cmt_lr: np.ndarray,
    cmt_tb: np.ndarray | None = None,
    literal: bool = False,
) -> np.ndarray:
    """Combined reliability mask in center-view coordinates.

    Without a top-bottom mask the horizontal mask passes through.  With one,
    the default requires both checks to pass; ``literal=True`` instead marks
    pixels where the two masks agree (including agreeing failures).
    """
    cmt_lr = np.asarray(cmt_lr, bool)
    if cmt_tb is None:
        return cmt_lr.copy()
    cmt_tb = np.asarray(cmt_tb, bool)
    if cmt_tb.shape != cmt_lr.shape:
        raise ValueError("confidence masks must share dimensions")
    if literal:
        return cmt_lr == cmt_tb
    return cmt_lr & cmt_tb


def edge_mask(
    center: np.ndarray, median_kernel: int = 3, threshold: float = 48.0
) -> np.ndarray:
    """Edges of the center view: Sobel magnitude, median filtered, thresholded."""
    gray = to_grayscale(center).astype(np.float64)
    gx = ndimage.sobel(gray, axis=1, mode="nearest")
    gy = ndimage.sobel(gray, axis=0, mode="nearest")
    magnitude = np.hypot(gx, gy)
    smoothed = ndimage.median_filter(magnitude, size=median_kernel)
    return smoothed > threshold


def compute_borders(
    syn: SyntheticDepth,
    conf: np.ndarray,
    edges: np.ndarray | None,
    drange: DisparityRange,
    n_hyp: int,
    border_lambda: int,
) -> BorderMap:
    """Normalize the synthetic prior into per-pixel hypothesis borders.

    ``d_brd = (d_syn + d1_max) * k_brd`` (rounded) where the prior is
    reliable and off-edge, zero otherwise; zero requests a full scan and any
    other value a window of ``border_lambda`` indices around it, clamped to
    ``[0, n_hyp]``.
    """
    if n_hyp < 1:
        raise ConfigError("hypothesis count must be at least 1")
    if border_lambda < 0:
        raise ConfigError("border_lambda must be non-negative")
    depth = syn.depth
    conf = np.asarray(conf, bool)
    if conf.shape != depth.shape:
        raise ValueError("confidence mask must match the synthetic map")
    if edges is None:
        edges = np.zeros(depth.shape, bool)
    edges = np.asarray(edges, bool)

    k_brd = n_hyp / drange.span
    eligible = conf & ~edges & depth.valid
    normalized = np.where(
        eligible, (depth.values + drange.d1_max) * k_brd, 0.0
    )
    d_brd = np.clip(np.rint(normalized), 0, n_hyp).astype(np.int32)

    full = d_brd == 0
    b_low = np.where(full, 0, np.maximum(d_brd - border_lambda, 0)).astype(np.int32)
    b_high = np.where(full, n_hyp, np.minimum(d_brd + border_lambda, n_hyp)).astype(np.int32)
    return BorderMap(b_low, b_high, d_brd, k_brd, n_hyp)


def full_borders(shape: tuple[int, int], n_hyp: int) -> BorderMap:
    """Borders requesting a full hypothesis scan at every pixel."""
    zeros = np.zeros(shape, np.int32)
    return BorderMap(
        zeros.copy(),
        np.full(shape, n_hyp, np.int32),
        zeros,
        k_brd=float("nan"),
        n_hyp=n_hyp,
    )
