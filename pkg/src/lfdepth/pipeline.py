"""End-to-end depth pipeline: stereo prior, fusion, bordered line fit.

Stages are individually timed; the returned result carries the final map
(full-baseline units), the border map, hypothesis-evaluation counters and,
on request, every intermediate product for inspection dumps.
"""

from __future__ import annotations

import math
import time
from contextlib import contextmanager
from dataclasses import dataclass, field

import numpy as np

from . import census as census_mod
from . import fusion, linefit, sgm
from .core import (
    ConfigError,
    DepthMap,
    DisparityRange,
    LightField,
    PipelineConfig,
    full_to_per_view,
    to_grayscale,
)

STAGES = (
    "census",
    "cost",
    "aggregate",
    "wta",
    "subpixel",
    "lr_check",
    "warp",
    "fuse",
    "borders",
    "linefit",
    "median",
)


@dataclass
class StageTiming:
    """Wall-clock seconds per pipeline stage."""

    seconds: dict[str, float] = field(default_factory=dict)
    total: float = 0.0
    pixels: int = 0

    def stage_sum(self) -> float:
        return sum(self.seconds.values())

    def throughput(self, stage: str) -> float:
        elapsed = self.seconds.get(stage, 0.0)
        return self.pixels / elapsed if elapsed > 0 else float("inf")

    def format_table(self) -> str:
        lines = [f"{'stage':<12} {'seconds':>10} {'Mpixel/s':>10}"]
        for stage in STAGES:
            if stage not in self.seconds:
                continue
            secs = self.seconds[stage]
            rate = self.pixels / secs / 1e6 if secs > 0 else float("inf")
            lines.append(f"{stage:<12} {secs:>10.4f} {rate:>10.2f}")
        lines.append(f"{'total':<12} {self.total:>10.4f}")
        return "\n".join(lines)


@dataclass
class PipelineResult:
    depth: DepthMap                      # final map, full-baseline units
    grid: linefit.HypothesisGrid
    borders: fusion.BorderMap
    timing: StageTiming
    hypothesis_evals: int
    views_per_dim: int
    intermediates: dict = field(default_factory=dict)

    def per_view_depth(self) -> DepthMap:
        """Final map converted to per-view-step disparity units."""
        return DepthMap(
            full_to_per_view(self.depth.values, self.views_per_dim),
            self.depth.valid.copy(),
        )

    @property
    def border_coverage(self) -> float:
        return self.borders.bordered_fraction()


class _StageClock:
    def __init__(self):
        self.timing = StageTiming()

    @contextmanager
    def stage(self, name: str):
        start = time.perf_counter()
        try:
            yield
        finally:
            elapsed = time.perf_counter() - start
            self.timing.seconds[name] = self.timing.seconds.get(name, 0.0) + elapsed


def _stereo_pass(
    c_ref: census_mod.CensusImage,
    c_other: census_mod.CensusImage,
    drange: DisparityRange,
    config: PipelineConfig,
    axis: str,
    direction_sign: int,
    clock: _StageClock,
) -> tuple[DepthMap, DepthMap]:
    """Cost, aggregation, winner pick and sub-pixel refinement for one view pair."""
    with clock.stage("cost"):
        volume = census_mod.build_cost_volume(
            c_ref, c_other, drange, axis=axis, direction_sign=direction_sign
        )
    with clock.stage("aggregate"):
        agg = sgm.aggregate(volume, config.p1, config.p2, config.num_paths)
    with clock.stage("wta"):
        init = sgm.winner_takes_all(agg)
    with clock.stage("subpixel"):
        sub = sgm.subpixel_refine(agg, init)
    return init, sub


def run_pipeline(
    lf: LightField,
    drange: DisparityRange,
    config: PipelineConfig | None = None,
    workers: int = 1,
    collect_intermediates: bool = False,
) -> PipelineResult:
    config = config or PipelineConfig()
    if config.disparity_range is not None:
        drange = config.disparity_range
    if config.enable_top_bottom and lf.m < 2:
        raise ConfigError(
            "top-bottom matching needs at least 2 view rows; this light "
            "field has a single row"
        )
    clock = _StageClock()
    start_total = time.perf_counter()
    n, m = lf.n, lf.m
    s_hat, t_hat = lf.center
    inter: dict = {}

    with clock.stage("census"):
        left = census_mod.census_transform(
            to_grayscale(lf.view(1, t_hat)), config.census_pattern
        )
        right = census_mod.census_transform(
            to_grayscale(lf.view(n, t_hat)), config.census_pattern
        )
        if config.enable_top_bottom:
            top = census_mod.census_transform(
                to_grayscale(lf.view(s_hat, 1)), config.census_pattern
            )
            bottom = census_mod.census_transform(
                to_grayscale(lf.view(s_hat, m)), config.census_pattern
            )

    d_init_l, d_sub_l = _stereo_pass(left, right, drange, config, "horizontal", 1, clock)
    d_init_r, d_sub_r = _stereo_pass(right, left, drange, config, "horizontal", -1, clock)
    with clock.stage("lr_check"):
        cmt_lr = sgm.lr_check(
            d_sub_l, d_sub_r, config.phi, axis="horizontal",
            literal=config.literal_lr_check,
        )

    cmt_tb = None
    if config.enable_top_bottom:
        # vertical baseline spans m-1 steps; scale the search range here and
        # convert the warped maps back to horizontal full-baseline units below
        vscale = (m - 1) / (n - 1)
        tb_range = DisparityRange(
            max(0, math.ceil(drange.d1_max * vscale - 1e-9)),
            max(0, math.ceil(drange.d2_max * vscale - 1e-9)),
        )
        d_init_t, d_sub_t = _stereo_pass(top, bottom, tb_range, config, "vertical", 1, clock)
        d_init_b, d_sub_b = _stereo_pass(bottom, top, tb_range, config, "vertical", -1, clock)
        with clock.stage("lr_check"):
            cmt_tb = sgm.lr_check(
                d_sub_t, d_sub_b, config.phi, axis="vertical",
                literal=config.literal_lr_check,
            )

    with clock.stage("warp"):
        warped_l, (cmt_lr_w,) = fusion._warp_arrays(
            d_sub_l, (1, t_hat), n, m, payloads=[cmt_lr]
        )
        warped_r = fusion.warp_to_center(d_sub_r, (n, t_hat), n, m)
        warped_maps = [warped_l, warped_r]
        cmt_tb_w = None
        if config.enable_top_bottom:
            warped_t, (cmt_tb_w,) = fusion._warp_arrays(
                d_sub_t, (s_hat, 1), n, m, payloads=[cmt_tb]
            )
            warped_b = fusion.warp_to_center(d_sub_b, (s_hat, m), n, m)
            if m != n:
                hscale = (n - 1) / (m - 1)
                for wm in (warped_t, warped_b):
                    wm.values *= hscale
            warped_maps += [warped_t, warped_b]

    with clock.stage("fuse"):
        syn = fusion.synthesize(warped_maps)
        conf = fusion.combine_confidence(
            cmt_lr_w, cmt_tb_w, literal=config.literal_tb_confidence
        )
        if config.force_full_scan:
            conf = np.zeros_like(conf)

    grid = linefit.HypothesisGrid.from_range(drange, n, config.tau)
    with clock.stage("borders"):
        edges = None
        if config.enable_edge_exclusion:
            edges = fusion.edge_mask(
                lf.center_view(), config.median_kernel, config.sobel_threshold
            )
        borders = fusion.compute_borders(
            syn, conf, edges, drange, grid.n_hyp, config.border_lambda
        )

    with clock.stage("linefit"):
        fitted, stats = linefit.fit_map(lf, borders, grid, config, workers)
    with clock.stage("median"):
        final = linefit.median_filter_depth(fitted, config.median_kernel)

    clock.timing.total = time.perf_counter() - start_total
    clock.timing.pixels = lf.height * lf.width

    if collect_intermediates:
        inter = {
            "d_init_left": d_init_l,
            "d_sub_left": d_sub_l,
            "d_init_right": d_init_r,
            "d_sub_right": d_sub_r,
            "cmt_lr": cmt_lr,
            "d_syn": syn.depth,
            "source_count": syn.source_count,
            "cmt_syn": conf,
            "d_brd": borders.d_brd,
            "b_low": borders.b_low,
            "b_high": borders.b_high,
            "d_fit": fitted,
        }
        if edges is not None:
            inter["edge_mask"] = edges
        if config.enable_top_bottom:
            inter.update(
                {
                    "d_init_top": d_init_t,
                    "d_sub_top": d_sub_t,
                    "d_init_bottom": d_init_b,
                    "d_sub_bottom": d_sub_b,
                    "cmt_tb": cmt_tb,
                }
            )

    return PipelineResult(
        depth=final,
        grid=grid,
        borders=borders,
        timing=clock.timing,
        hypothesis_evals=stats.hypothesis_evals,
        views_per_dim=n,
        intermediates=inter,
    )
