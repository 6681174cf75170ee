"""Depth map estimation from 4D light fields.

A census/semi-global stereo prior between the extreme views is fused into a
center-view synthetic depth map, converted into per-pixel hypothesis
borders, and refined by kernel-density line fitting across all views.
"""

from .core import (
    DEFAULT_CENSUS_PATTERN,
    ConfigError,
    DepthMap,
    DisparityRange,
    LightField,
    LightFieldError,
    LoadError,
    PipelineConfig,
    center_view,
    full_to_per_view,
    per_view_to_full,
    to_grayscale,
)
from .census import CensusImage, CostVolume, build_cost_volume, census_transform, hamming
from .sgm import AggregatedVolume, aggregate, lr_check, subpixel_refine, winner_takes_all
from .fusion import (
    BorderMap,
    SyntheticDepth,
    combine_confidence,
    compute_borders,
    edge_mask,
    full_borders,
    synthesize,
    warp_to_center,
)
from .linefit import (
    HypothesisGrid,
    density_score,
    estimate,
    fit_pixel,
    full_scan_oracle,
)
from .metrics import EvalReport, badpix, m_metric, mse
from .pipeline import PipelineResult, StageTiming, run_pipeline
from .pfm import read_pfm, write_pfm
from .scene import load_scene, write_scene
from .synthetic import LayerSpec, SyntheticSceneSpec, generate_synthetic
from .bench import BenchTable, run_benchmark

__all__ = [
    "AggregatedVolume",
    "BenchTable",
    "BorderMap",
    "CensusImage",
    "ConfigError",
    "CostVolume",
    "DEFAULT_CENSUS_PATTERN",
    "DepthMap",
    "DisparityRange",
    "EvalReport",
    "HypothesisGrid",
    "LayerSpec",
    "LightField",
    "LightFieldError",
    "LoadError",
    "PipelineConfig",
    "PipelineResult",
    "StageTiming",
    "SyntheticDepth",
    "SyntheticSceneSpec",
    "aggregate",
    "badpix",
    "build_cost_volume",
    "census_transform",
    "center_view",
    "combine_confidence",
    "compute_borders",
    "density_score",
    "edge_mask",
    "estimate",
    "fit_pixel",
    "full_borders",
    "full_scan_oracle",
    "full_to_per_view",
    "generate_synthetic",
    "hamming",
    "load_scene",
    "lr_check",
    "m_metric",
    "mse",
    "per_view_to_full",
    "read_pfm",
    "run_benchmark",
    "run_pipeline",
    "subpixel_refine",
    "synthesize",
    "to_grayscale",
    "warp_to_center",
    "winner_takes_all",
    "write_pfm",
    "write_scene",
]

__version__ = "0.1.0"
