"""Kernel-density line fitting across all light-field views.

For a center-view pixel and a depth hypothesis, every view is sampled where
that hypothesis predicts the pixel to appear; the density score sums a
truncated quadratic (Epanechnikov) kernel of the color differences against
the center pixel.  The hypothesis with the highest density wins.  Borders
from the stereo prior restrict which hypotheses are evaluated per pixel.

Scores are kept in a small per-worker buffer that is overwritten from pixel
to pixel, so the auxiliary footprint of the search is proportional to the
hypothesis count and independent of image size.  Workspace allocations are
logged so tests can assert that bound.

Sign note: a hypothesis is stored as a full-baseline matching shift ``D``
(the shift of the match between the first and last view of the center row);
the point's image walks across views with slope ``-D / (n - 1)`` pixels per
view step, which is the value fed to the sampler.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .core import (
    ConfigError,
    DepthMap,
    DisparityRange,
    LightField,
    PipelineConfig,
)
from .fusion import BorderMap

_WORKSPACE_LOG: list[dict] = []


def reset_workspace_log() -> None:
    _WORKSPACE_LOG.clear()


def workspace_log() -> list[dict]:
    return list(_WORKSPACE_LOG)


class ScoreWorkspace:
    """Reusable per-worker density-score buffer (one slot per hypothesis)."""

    def __init__(self, n_hyp: int):
        self.scores = np.empty(n_hyp + 1, np.float32)
        _WORKSPACE_LOG.append(
            {"n_hyp": int(n_hyp), "elements": int(self.scores.size)}
        )


@dataclass(frozen=True)
class HypothesisGrid:
    """Uniform hypothesis sampling of the disparity range.

    ``n_hyp`` intervals cover the full-baseline range, so indices run from 0
    (disparity ``-d1_max``) to ``n_hyp`` (``+d2_max``) inclusive.  The
    per-view-step spacing is the nominal line-sampling step adjusted so the
    range divides evenly.
    """

    drange: DisparityRange
    views_per_dim: int
    n_hyp: int
    step_full: float

    @classmethod
    def from_range(
        cls, drange: DisparityRange, views_per_dim: int, tau: float
    ) -> "HypothesisGrid":
        if views_per_dim < 2:
            raise ConfigError("hypothesis grid needs at least 2 views per row")
        if tau <= 0:
            raise ConfigError("step coefficient tau must be positive")
        n_hyp = max(1, math.ceil(drange.span / tau - 1e-9))
        return cls(drange, views_per_dim, n_hyp, drange.span / n_hyp)

    @property
    def step_per_view(self) -> float:
        """Hypothesis spacing in per-view-step disparity units."""
        return self.step_full / (self.views_per_dim - 1)

    @property
    def k_brd(self) -> float:
        return self.n_hyp / self.drange.span

    def disparities(self) -> np.ndarray:
        """Full-baseline disparity of every hypothesis index."""
        k = np.arange(self.n_hyp + 1, dtype=np.float64)
        return (k * self.step_full - self.drange.d1_max).astype(np.float32)

    def disparity(self, k: int) -> float:
        return float(k) * self.step_full - self.drange.d1_max

    def sampling_slopes(self) -> np.ndarray:
        """Per-view-step walking slope of every hypothesis (see module note)."""
        return (-self.disparities() / (self.views_per_dim - 1)).astype(np.float32)


class FieldSampler:
    """Precomputed bilinear sampling over all views of a light field."""

    def __init__(self, lf: LightField, h: float):
        if h <= 0:
            raise ConfigError("kernel bandwidth h must be positive")
        m, n = lf.m, lf.n
        self.height, self.width = lf.height, lf.width
        self.flat = np.ascontiguousarray(
            lf.views.reshape(m * n * self.height * self.width, 3)
        )
        s_hat, t_hat = lf.center
        s_idx, t_idx = np.meshgrid(np.arange(1, n + 1), np.arange(1, m + 1))
        self.s_off = (s_hat - s_idx).ravel().astype(np.float32)
        self.t_off = (t_hat - t_idx).ravel().astype(np.float32)
        self.base = (np.arange(m * n) * self.height * self.width).astype(np.int64)
        self.center_image = lf.center_view()
        self.num_views = m * n
        self.inv_h2 = np.float32(1.0 / (h * h))

    def scores(self, u: int, v: int, slopes: np.ndarray) -> np.ndarray:
        """Density score of each per-view-step slope at center pixel (u, v).

        Samples each view at ``(u + (s_hat - s) * slope,
        v + (t_hat - t) * slope)`` with bilinear interpolation; samples
        outside the image contribute nothing.
        """
        slopes = np.asarray(slopes, np.float32).reshape(-1, 1)
        su = u + slopes * self.s_off  # (K, V)
        sv = v + slopes * self.t_off
        inb = (su >= 0) & (su <= self.width - 1) & (sv >= 0) & (sv <= self.height - 1)

        x0 = np.floor(su)
        y0 = np.floor(sv)
        fx = (su - x0)[..., None]
        fy = (sv - y0)[..., None]
        x0i = np.clip(x0.astype(np.int64), 0, self.width - 1)
        y0i = np.clip(y0.astype(np.int64), 0, self.height - 1)
        x1i = np.minimum(x0i + 1, self.width - 1)
        y1i = np.minimum(y0i + 1, self.height - 1)

        base = self.base[None, :]
        g00 = self.flat[base + y0i * self.width + x0i]
        g01 = self.flat[base + y0i * self.width + x1i]
        g10 = self.flat[base + y1i * self.width + x0i]
        g11 = self.flat[base + y1i * self.width + x1i]
        top = g00 + fx * (g01 - g00)
        bottom = g10 + fx * (g11 - g10)
        sample = top + fy * (bottom - top)  # (K, V, 3)

        diff = sample - self.center_image[v, u]
        l = np.einsum("kvc,kvc->kv", diff, diff) * self.inv_h2
        kernel = np.maximum(np.float32(0.0), np.float32(1.0) - l)
        kernel[~inb] = 0.0
        return kernel.sum(axis=1, dtype=np.float32)


def density_score(lf: LightField, u: int, v: int, d: float, h: float) -> float:
    """Density of one per-view-step disparity hypothesis at pixel (u, v)."""
    sampler = FieldSampler(lf, h)
    return float(sampler.scores(u, v, np.array([d], np.float32))[0])


def fit_pixel(
    lf: LightField,
    u: int,
    v: int,
    borders: tuple[int, int],
    grid: HypothesisGrid,
    h: float,
) -> float:
    """Best full-baseline disparity within the border window at one pixel."""
    b_low, b_high = borders
    if b_low > b_high:
        raise ValueError("border window is empty (b_low > b_high)")
    if b_low < 0 or b_high > grid.n_hyp:
        raise ValueError("borders outside the hypothesis grid")
    sampler = FieldSampler(lf, h)
    slopes = grid.sampling_slopes()[b_low : b_high + 1]
    scores = sampler.scores(u, v, slopes)
    return grid.disparity(b_low + int(np.argmax(scores)))


@dataclass
class LineFitStats:
    hypothesis_evals: int
    workers: int


def _fit_rows(
    sampler: FieldSampler,
    borders: BorderMap,
    disparities: np.ndarray,
    slopes: np.ndarray,
    rows: range,
    out: np.ndarray,
) -> int:
    """Fit all pixels of the given rows through one reused workspace."""
    workspace = ScoreWorkspace(borders.n_hyp)
    evals = 0
    b_low, b_high = borders.b_low, borders.b_high
    width = out.shape[1]
    for v in rows:
        for u in range(width):
            k0 = int(b_low[v, u])
            k1 = int(b_high[v, u])
            count = k1 - k0 + 1
            workspace.scores[:count] = sampler.scores(u, v, slopes[k0 : k1 + 1])
            best = k0 + int(np.argmax(workspace.scores[:count]))
            out[v, u] = disparities[best]
            evals += count
    return evals


def fit_map(
    lf: LightField,
    borders: BorderMap,
    grid: HypothesisGrid,
    config: PipelineConfig,
    workers: int = 1,
) -> tuple[DepthMap, LineFitStats]:
    """Line-fit every center-view pixel inside its borders (no filtering).

    Rows are split into contiguous chunks, one per worker; output does not
    depend on the worker count.
    """
    if workers < 1:
        raise ConfigError("worker count must be at least 1")
    if borders.shape != (lf.height, lf.width):
        raise ValueError("border map must match the view size")
    sampler = FieldSampler(lf, config.h)
    disparities = grid.disparities()
    slopes = grid.sampling_slopes()
    out = np.empty((lf.height, lf.width), np.float32)

    if workers == 1:
        evals = _fit_rows(sampler, borders, disparities, slopes,
                          range(lf.height), out)
    else:
        chunks = []
        rows_per = math.ceil(lf.height / workers)
        for start in range(0, lf.height, rows_per):
            chunks.append(range(start, min(start + rows_per, lf.height)))
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_fit_rows, sampler, borders, disparities,
                            slopes, chunk, out)
                for chunk in chunks
            ]
            evals = sum(f.result() for f in futures)
    depth = DepthMap(out, np.ones_like(out, bool))
    return depth, LineFitStats(evals, workers)


def median_filter_depth(depth: DepthMap, kernel: int) -> DepthMap:
    values = ndimage.median_filter(depth.values, size=kernel)
    return DepthMap(values, depth.valid.copy())


@dataclass
class LineFitResult:
    depth: DepthMap
    stats: LineFitStats


def estimate(
    lf: LightField,
    borders: BorderMap,
    grid: HypothesisGrid,
    config: PipelineConfig,
    workers: int = 1,
) -> LineFitResult:
    """Bordered line fit over the center view followed by median filtering."""
    fitted, stats = fit_map(lf, borders, grid, config, workers)
    return LineFitResult(median_filter_depth(fitted, config.median_kernel), stats)


def full_scan_oracle(
    lf: LightField, grid: HypothesisGrid, config: PipelineConfig
) -> DepthMap:
    """Reference line fit scanning every hypothesis at every pixel.

    Deliberately plain: per-pixel loop, fresh arrays, no buffer reuse.
    """
    sampler = FieldSampler(lf, config.h)
    disparities = grid.disparities()
    slopes = grid.sampling_slopes()
    out = np.empty((lf.height, lf.width), np.float32)
    for v in range(lf.height):
        for u in range(lf.width):
            scores = sampler.scores(u, v, slopes)
            out[v, u] = disparities[int(np.argmax(scores))]
    depth = DepthMap(out, np.ones_like(out, bool))
    return median_filter_depth(depth, config.median_kernel)
