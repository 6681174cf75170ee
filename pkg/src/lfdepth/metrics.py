"""Evaluation metrics: bad-pixel ratio, MSE, and correct-pixels-per-second.

All comparisons run in the units of the supplied maps (per-view-step
disparity for benchmark-style ground truth).  Invalid result pixels count as
bad in the bad-pixel ratio and are excluded from the MSE.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .core import DepthMap

DEFAULT_BADPIX_THRESHOLD = 0.07


def _evaluated(result: DepthMap, gt: DepthMap, mask) -> np.ndarray:
    if result.shape != gt.shape:
        raise ValueError("result and ground truth must share dimensions")
    evaluated = gt.valid.copy()
    if mask is not None:
        mask = np.asarray(mask, bool)
        if mask.shape != gt.shape:
            raise ValueError("mask must share dimensions with the maps")
        evaluated &= mask
    if not evaluated.any():
        raise ValueError("no pixels to evaluate")
    return evaluated


def badpix(
    result: DepthMap,
    gt: DepthMap,
    threshold: float = DEFAULT_BADPIX_THRESHOLD,
    mask=None,
) -> float:
    """Percentage of evaluated pixels with error strictly above threshold."""
    evaluated = _evaluated(result, gt, mask)
    error = np.abs(result.values - gt.values) > threshold
    bad = (error | ~result.valid) & evaluated
    return 100.0 * float(bad.sum()) / float(evaluated.sum())


def mse(result: DepthMap, gt: DepthMap, mask=None) -> float:
    """Mean squared error over evaluated pixels with a valid result."""
    evaluated = _evaluated(result, gt, mask) & result.valid
    if not evaluated.any():
        raise ValueError("no valid pixels to evaluate")
    diff = (result.values - gt.values)[evaluated].astype(np.float64)
    return float(np.mean(diff * diff))


def m_metric(badpix_percent: float, runtime_seconds: float) -> float:
    """Correctly computed pixels per second: (100 - badpix) / runtime."""
    if runtime_seconds <= 0:
        raise ValueError("runtime must be positive")
    return (100.0 - badpix_percent) / runtime_seconds


@dataclass
class EvalReport:
    """Quality/runtime summary of one depth map against ground truth."""

    badpix_percent: float
    mse: float
    runtime_seconds: float
    m_metric: float
    evaluated_pixel_count: int
    threshold: float

    def __post_init__(self):
        expected = m_metric(self.badpix_percent, self.runtime_seconds)
        if abs(self.m_metric - expected) > 1e-9 * max(1.0, abs(expected)):
            raise ValueError("m_metric inconsistent with badpix and runtime")

    @classmethod
    def from_maps(
        cls,
        result: DepthMap,
        gt: DepthMap,
        runtime_seconds: float,
        threshold: float = DEFAULT_BADPIX_THRESHOLD,
        mask=None,
    ) -> "EvalReport":
        bp = badpix(result, gt, threshold, mask)
        evaluated = _evaluated(result, gt, mask)
        return cls(
            badpix_percent=bp,
            mse=mse(result, gt, mask),
            runtime_seconds=runtime_seconds,
            m_metric=m_metric(bp, runtime_seconds),
            evaluated_pixel_count=int(evaluated.sum()),
            threshold=threshold,
        )

    def to_text(self) -> str:
        # flat key=value block; runtime covers the pipeline, not dataset decode
        return "\n".join(
            [
                f"badpix_percent = {self.badpix_percent:.6f}",
                f"mse = {self.mse:.6f}",
                f"runtime_seconds = {self.runtime_seconds:.6f}",
                f"m_metric = {self.m_metric:.6f}",
                f"evaluated_pixel_count = {self.evaluated_pixel_count}",
                f"threshold = {self.threshold}",
            ]
        )

    def to_json(self) -> str:
        return json.dumps(
            {
                "badpix_percent": self.badpix_percent,
                "mse": self.mse,
                "runtime_seconds": self.runtime_seconds,
                "m_metric": self.m_metric,
                "evaluated_pixel_count": self.evaluated_pixel_count,
                "threshold": self.threshold,
            },
            indent=2,
        )


def median_and_average(values) -> tuple[float, float]:
    """Summary rows for result tables; even-count median averages the middle."""
    arr = np.asarray(list(values), np.float64)
    if arr.size == 0:
        raise ValueError("no values to summarize")
    return float(np.median(arr)), float(np.mean(arr))
