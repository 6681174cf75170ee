"""Synthetic light-field scenes with exact ground truth.

Scenes are stacks of textured fronto-parallel layers.  A layer with
per-view-step disparity ``d`` appears in view ``(s, t)`` shifted so that the
texture point seen at center-view pixel ``(u, v)`` sits at
``(u + (s - s_hat) * d, v + (t - t_hat) * d)``.  Larger disparity means
nearer to the camera; nearer layers occlude farther ones.  Textures are
analytic (sums of sinusoids, or checkerboards), so views can be rendered
exactly at fractional offsets without any resampling of pixel grids.

Rendering quantizes to 8-bit at the end; the in-memory light field and the
files written by :func:`write_scene` therefore hold identical samples.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .core import (
    ConfigError,
    DepthMap,
    LightField,
    center_angular_index,
)


@dataclass(frozen=True)
class LayerSpec:
    """One fronto-parallel textured layer.

    ``rect`` bounds the layer in fractional center-view coordinates
    ``(x0, y0, x1, y1)``; ``None`` covers the whole frame.
    """

    disparity: float
    texture: str = "noise"
    rect: tuple[float, float, float, float] | None = None
    checker_period: float = 12.0

    def __post_init__(self):
        if self.texture not in ("noise", "checker"):
            raise ConfigError(f"unknown texture {self.texture!r}")
        if self.rect is not None:
            x0, y0, x1, y1 = self.rect
            if not (0 <= x0 < x1 <= 1 and 0 <= y0 < y1 <= 1):
                raise ConfigError("layer rect must be a non-empty unit-square box")


@dataclass(frozen=True)
class SyntheticSceneSpec:
    """Layered scene description; layers are ordered near-to-far."""

    n: int
    m: int
    width: int
    height: int
    layers: tuple[LayerSpec, ...]
    disp_min: float
    disp_max: float

    def __post_init__(self):
        if self.n < 2 or self.m < 1:
            raise ConfigError("view grid must be at least 2 x 1")
        if self.width < 8 or self.height < 8:
            raise ConfigError("images must be at least 8 x 8")
        if not self.layers:
            raise ConfigError("a scene needs at least one layer")
        disp = [layer.disparity for layer in self.layers]
        if any(b > a for a, b in zip(disp, disp[1:])):
            raise ConfigError("layers must be ordered near-to-far")
        if min(disp) < self.disp_min or max(disp) > self.disp_max:
            raise ConfigError("layer disparities must lie in the declared range")
        if self.layers[-1].rect is not None:
            raise ConfigError("the last (farthest) layer must cover the frame")

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": self.n,
                "m": self.m,
                "width": self.width,
                "height": self.height,
                "disp_min": self.disp_min,
                "disp_max": self.disp_max,
                "layers": [
                    {
                        "disparity": l.disparity,
                        "texture": l.texture,
                        "rect": list(l.rect) if l.rect else None,
                        "checker_period": l.checker_period,
                    }
                    for l in self.layers
                ],
            },
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> "SyntheticSceneSpec":
        try:
            raw = json.loads(text)
            layers = tuple(
                LayerSpec(
                    disparity=float(l["disparity"]),
                    texture=l.get("texture", "noise"),
                    rect=tuple(l["rect"]) if l.get("rect") else None,
                    checker_period=float(l.get("checker_period", 12.0)),
                )
                for l in raw["layers"]
            )
            return cls(
                n=int(raw["n"]),
                m=int(raw["m"]),
                width=int(raw["width"]),
                height=int(raw["height"]),
                layers=layers,
                disp_min=float(raw["disp_min"]),
                disp_max=float(raw["disp_max"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"malformed scene spec: {exc}") from exc


class _SinusoidTexture:
    """Smooth random RGB texture evaluable at arbitrary real coordinates.

    Wavelengths are kept moderate (16..48 px) so that texture varies fast
    enough for matching but slowly enough that bilinear resampling of the
    rendered views stays faithful.
    """

    def __init__(self, rng: np.random.Generator, waves: int = 8):
        self.freq = np.empty((3, waves, 2))
        self.phase = rng.uniform(0, 2 * math.pi, (3, waves))
        self.amp = rng.uniform(0.5, 1.0, (3, waves))
        self.amp /= self.amp.sum(axis=1, keepdims=True) / 0.32
        wavelength = rng.uniform(16.0, 48.0, (3, waves))
        angle = rng.uniform(0, 2 * math.pi, (3, waves))
        self.freq[..., 0] = np.cos(angle) / wavelength
        self.freq[..., 1] = np.sin(angle) / wavelength

    def __call__(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        out = np.empty(x.shape + (3,), np.float64)
        for c in range(3):
            acc = np.full(x.shape, 0.5)
            for w in range(self.freq.shape[1]):
                arg = (
                    2 * math.pi * (self.freq[c, w, 0] * x + self.freq[c, w, 1] * y)
                    + self.phase[c, w]
                )
                acc += self.amp[c, w] * np.sin(arg)
            out[..., c] = acc
        return out


class _CheckerTexture:
    def __init__(self, rng: np.random.Generator, period: float):
        self.period = period
        self.colors = rng.uniform(0.15, 0.85, (2, 3))

    def __call__(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        cell = (
            np.floor(x / self.period).astype(np.int64)
            + np.floor(y / self.period).astype(np.int64)
        ) % 2
        return self.colors[cell]


def _make_texture(layer: LayerSpec, rng: np.random.Generator):
    if layer.texture == "noise":
        return _SinusoidTexture(rng)
    return _CheckerTexture(rng, layer.checker_period)


def generate_synthetic(
    spec: SyntheticSceneSpec, seed: int = 0
) -> tuple[LightField, DepthMap]:
    """Render all views and the center-view ground-truth disparity map.

    Deterministic for a fixed seed.  Ground truth is in per-view-step
    disparity units.
    """
    rng = np.random.default_rng(seed)
    textures = [_make_texture(layer, rng) for layer in spec.layers]
    s_hat = center_angular_index(spec.n)
    t_hat = center_angular_index(spec.m)
    uu, vv = np.meshgrid(
        np.arange(spec.width, dtype=np.float64),
        np.arange(spec.height, dtype=np.float64),
    )

    def layer_hit(layer: LayerSpec, x, y):
        if layer.rect is None:
            return np.ones(x.shape, bool)
        x0, y0, x1, y1 = layer.rect
        return (
            (x >= x0 * spec.width)
            & (x < x1 * spec.width)
            & (y >= y0 * spec.height)
            & (y < y1 * spec.height)
        )

    views = np.empty((spec.m, spec.n, spec.height, spec.width, 3), np.float32)
    for t in range(1, spec.m + 1):
        for s in range(1, spec.n + 1):
            rgb = np.zeros((spec.height, spec.width, 3), np.float64)
            filled = np.zeros((spec.height, spec.width), bool)
            for layer, texture in zip(spec.layers, textures):
                x = uu - (s - s_hat) * layer.disparity
                y = vv - (t - t_hat) * layer.disparity
                hit = layer_hit(layer, x, y) & ~filled
                if hit.any():
                    rgb[hit] = texture(x[hit], y[hit])
                    filled |= hit
            quantized = np.clip(np.rint(rgb * 255.0), 0, 255).astype(np.uint8)
            views[t - 1, s - 1] = quantized.astype(np.float32) / 255.0

    gt = np.zeros((spec.height, spec.width), np.float32)
    assigned = np.zeros((spec.height, spec.width), bool)
    for layer in spec.layers:
        hit = layer_hit(layer, uu, vv) & ~assigned
        gt[hit] = layer.disparity
        assigned |= hit
    return LightField(views), DepthMap(gt, np.ones_like(assigned))


def occlusion_boundary_mask(gt: DepthMap, band: int = 2) -> np.ndarray:
    """Pixels within ``band`` (chebyshev) of a ground-truth discontinuity."""
    from scipy import ndimage

    edge = np.zeros(gt.shape, bool)
    edge[:, :-1] |= gt.values[:, :-1] != gt.values[:, 1:]
    edge[:, 1:] |= gt.values[:, :-1] != gt.values[:, 1:]
    edge[:-1, :] |= gt.values[:-1, :] != gt.values[1:, :]
    edge[1:, :] |= gt.values[:-1, :] != gt.values[1:, :]
    if band > 0:
        size = 2 * band + 1
        edge = ndimage.maximum_filter(edge, size=size)
    return edge
