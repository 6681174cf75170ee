"""Core domain types shared by every stage of the depth pipeline.

Coordinate conventions used throughout the package:

* Images are numpy arrays indexed ``[v, u]`` (row, column); color views are
  ``(H, W, 3)`` float32 RGB in [0, 1], grayscale views ``(H, W)`` uint8.
* A light field is an ``n x m`` grid of views: ``s`` (1-based, 1..n) counts
  views horizontally, ``t`` (1-based, 1..m) vertically.  The center view sits
  at ``(ceil(n/2), ceil(m/2))``.
* Disparity maps produced by the stereo stages hold the pixel shift of a
  match over the *full* baseline between the extreme views of the row (or
  column) that was matched: a value ``d`` at pixel ``(u, v)`` of the first
  view means the match in the last view sits at ``u + d``.  Hypothesis level
  ``k`` of a cost volume corresponds to ``d = k - d1_max``.
* The per-view-step disparity exposed at I/O boundaries (ground truth,
  written depth maps, synthetic scene specs) is the full-baseline value
  divided by ``n - 1``.  Under this convention larger values are nearer to
  the camera.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np


class LightFieldError(Exception):
    """Base class for errors raised by this package."""


class ConfigError(LightFieldError):
    """Invalid configuration value or combination."""


class LoadError(LightFieldError):
    """A scene or file could not be loaded."""


# ITU-R BT.601 luma weights; the conversion feeding the census transform.
GRAY_WEIGHTS = (0.299, 0.587, 0.114)


def _default_census_pattern() -> tuple[tuple[int, int], ...]:
    # Sparse 7x7 sampling: every second pixel of the window rows/columns,
    # i.e. offsets with both coordinates in {-3,-1,1,3} plus the four axis
    # points on each side.  24 offsets, center excluded.
    axis = (-3, -1, 1, 3)
    offsets = {(i, j) for i in axis for j in axis}
    offsets |= {(i, 0) for i in axis}
    offsets |= {(0, j) for j in axis}
    return tuple(sorted(offsets))


DEFAULT_CENSUS_PATTERN = _default_census_pattern()


@dataclass(frozen=True)
class DisparityRange:
    """Hypothesis range [-d1_max, d2_max] in full-baseline pixels."""

    d1_max: int
    d2_max: int

    def __post_init__(self):
        if self.d1_max < 0 or self.d2_max < 0:
            raise ConfigError("disparity bounds must be non-negative")
        if self.d1_max + self.d2_max < 1:
            raise ConfigError("disparity range must span at least one pixel")

    @property
    def num_levels(self) -> int:
        return self.d1_max + self.d2_max + 1

    @property
    def span(self) -> int:
        return self.d1_max + self.d2_max

    def level_to_disparity(self, level):
        return level - self.d1_max

    def disparity_to_level(self, disparity):
        return disparity + self.d1_max

    def mirrored(self) -> "DisparityRange":
        """Range seen from the opposite matching direction."""
        return DisparityRange(self.d2_max, self.d1_max)


@dataclass(frozen=True)
class PipelineConfig:
    """All tunables of the pipeline with their published defaults."""

    p1: int = 21
    p2: int = 45
    phi: float = 3.0
    border_lambda: int = 2
    h: float = 0.02
    tau: float = 1.0 / 7.0
    census_pattern: tuple[tuple[int, int], ...] = field(
        default=DEFAULT_CENSUS_PATTERN
    )
    enable_top_bottom: bool = False
    enable_edge_exclusion: bool = False
    median_kernel: int = 3
    num_paths: int = 8
    disparity_range: DisparityRange | None = None
    sobel_threshold: float = 48.0
    literal_lr_check: bool = False
    literal_tb_confidence: bool = False
    force_full_scan: bool = False

    def __post_init__(self):
        if self.p1 < 0 or self.p2 < 0:
            raise ConfigError("penalties must be non-negative")
        if self.p2 <= self.p1:
            raise ConfigError("p2 must be greater than p1")
        if self.phi <= 0:
            raise ConfigError("phi must be positive")
        if self.border_lambda < 0:
            raise ConfigError("border_lambda must be non-negative")
        if self.h <= 0:
            raise ConfigError("kernel bandwidth h must be positive")
        if self.tau <= 0:
            raise ConfigError("step coefficient tau must be positive")
        if self.median_kernel < 1 or self.median_kernel % 2 == 0:
            raise ConfigError("median_kernel must be an odd positive integer")
        if self.num_paths not in (4, 8):
            raise ConfigError("num_paths must be 4 or 8")
        if len(self.census_pattern) == 0:
            raise ConfigError("census pattern must not be empty")

    def with_overrides(self, **kwargs) -> "PipelineConfig":
        return replace(self, **kwargs)


class LightField:
    """An n x m grid of equally sized RGB views.

    Views are stored t-major: ``views[t-1, s-1]`` is the view at angular
    position ``(s, t)``.  The array is made read-only so instances can be
    shared freely between workers.
    """

    def __init__(self, views: np.ndarray):
        views = np.asarray(views, dtype=np.float32)
        if views.ndim != 5 or views.shape[4] != 3:
            raise ConfigError(
                "light field views must have shape (m, n, height, width, 3)"
            )
        if views.shape[1] < 2:
            raise ConfigError("a light field needs at least 2 horizontal views")
        if views.shape[0] < 1:
            raise ConfigError("a light field needs at least 1 view row")
        self._views = views
        self._views.flags.writeable = False

    @property
    def views(self) -> np.ndarray:
        return self._views

    @property
    def n(self) -> int:
        """Number of views per row (horizontal count)."""
        return self._views.shape[1]

    @property
    def m(self) -> int:
        """Number of views per column (vertical count)."""
        return self._views.shape[0]

    @property
    def height(self) -> int:
        return self._views.shape[2]

    @property
    def width(self) -> int:
        return self._views.shape[3]

    @property
    def center(self) -> tuple[int, int]:
        """(s_hat, t_hat), 1-based."""
        return center_angular_index(self.n), center_angular_index(self.m)

    def view(self, s: int, t: int) -> np.ndarray:
        """Return the view at 1-based angular coordinates (s, t)."""
        if not (1 <= s <= self.n and 1 <= t <= self.m):
            raise IndexError(f"view ({s}, {t}) outside {self.n} x {self.m} grid")
        return self._views[t - 1, s - 1]

    def center_view(self) -> np.ndarray:
        s_hat, t_hat = self.center
        return self.view(s_hat, t_hat)

    @classmethod
    def from_rows(cls, rows) -> "LightField":
        """Build from a sequence of view rows (outer index t, inner s)."""
        return cls(np.stack([np.stack(list(r), axis=0) for r in rows], axis=0))


def center_angular_index(count: int) -> int:
    """1-based index of the center view along one angular axis."""
    return math.ceil(count / 2)


def center_view(lf: LightField) -> np.ndarray:
    return lf.center_view()


def to_grayscale(view: np.ndarray) -> np.ndarray:
    """Convert an RGB view in [0, 1] to uint8 luminance.

    Rounds ``255 * (0.299 R + 0.587 G + 0.114 B)`` to the nearest integer
    (ties to even) and clamps to [0, 255].
    """
    view = np.asarray(view)
    if view.ndim != 3 or view.shape[2] != 3:
        raise ConfigError("expected an (H, W, 3) color view")
    luma = (
        GRAY_WEIGHTS[0] * view[..., 0]
        + GRAY_WEIGHTS[1] * view[..., 1]
        + GRAY_WEIGHTS[2] * view[..., 2]
    )
    return np.clip(np.rint(255.0 * luma), 0, 255).astype(np.uint8)


@dataclass
class DepthMap:
    """Per-pixel real disparity with a validity mask."""

    values: np.ndarray
    valid: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float32)
        self.valid = np.asarray(self.valid, dtype=bool)
        if self.values.shape != self.valid.shape or self.values.ndim != 2:
            raise ConfigError("values and valid must be equal 2-D shapes")

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    @classmethod
    def full(cls, shape, value=0.0) -> "DepthMap":
        return cls(np.full(shape, value, np.float32), np.ones(shape, bool))

    @classmethod
    def invalid(cls, shape) -> "DepthMap":
        return cls(np.zeros(shape, np.float32), np.zeros(shape, bool))

    def copy(self) -> "DepthMap":
        return DepthMap(self.values.copy(), self.valid.copy())


def full_to_per_view(values, n: int):
    """Full-baseline disparity -> per-view-step disparity."""
    if n < 2:
        raise ConfigError("per-view conversion needs at least 2 views")
    return np.asarray(values, dtype=np.float32) / np.float32(n - 1)


def per_view_to_full(values, n: int):
    """Per-view-step disparity -> full-baseline disparity."""
    if n < 2:
        raise ConfigError("per-view conversion needs at least 2 views")
    return np.asarray(values, dtype=np.float32) * np.float32(n - 1)
