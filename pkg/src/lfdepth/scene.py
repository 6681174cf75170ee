"""Benchmark-layout scene ingestion and flat-text configuration files.

A scene directory holds ``input_Cam000.png .. input_Cam{n*m-1:03d}.png`` in
row-major angular order (t outer, top row first; s inner, left to right), a
``parameters.cfg`` with at least ``disp_min``/``disp_max`` (per-view-step
units), and optionally a ground-truth disparity PFM and an evaluation mask.

The per-view-step scene range is converted to the full-baseline hypothesis
range by scaling with ``n - 1`` and rounding outward.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from .core import DepthMap, DisparityRange, LightField, LoadError
from .pfm import read_pfm
from .synthetic import SyntheticSceneSpec, generate_synthetic

GT_FILENAMES = ("gt_disp_lowres.pfm", "gt_disp.pfm", "gt.pfm")
MASK_FILENAME = "eval_mask.png"
PARAMETER_FILENAMES = ("parameters.cfg", "parameters.txt")


@dataclass
class SceneDescriptor:
    path: Path
    n: int
    m: int
    width: int
    height: int
    image_paths: tuple[Path, ...]
    disp_min: float
    disp_max: float
    gt_path: Path | None
    mask_path: Path | None


@dataclass
class LoadedScene:
    light_field: LightField
    drange: DisparityRange
    gt: DepthMap | None
    mask: np.ndarray | None
    descriptor: SceneDescriptor


def parse_flat_config(path) -> dict[str, str]:
    """Parse ``key = value`` lines; sections and comments are skipped."""
    entries: dict[str, str] = {}
    for raw_line in Path(path).read_text().splitlines():
        line = raw_line.strip()
        if not line or line.startswith(("#", ";", "[")):
            continue
        if "=" not in line:
            raise LoadError(f"{path}: cannot parse line {raw_line!r}")
        key, value = line.split("=", 1)
        entries[key.strip().lower()] = value.strip()
    return entries


def per_view_range_to_full(disp_min: float, disp_max: float, n: int) -> DisparityRange:
    """Outward-rounded full-baseline hypothesis range for an n-wide grid."""
    if disp_min > disp_max:
        raise LoadError("disp_min must not exceed disp_max")
    d1 = max(0, math.ceil(-disp_min * (n - 1) - 1e-9))
    d2 = max(0, math.ceil(disp_max * (n - 1) - 1e-9))
    if d1 + d2 < 1:
        d2 = 1
    return DisparityRange(d1, d2)


def _find_images(directory: Path) -> list[Path]:
    images = sorted(directory.glob("input_Cam*.png"))
    images += sorted(directory.glob("input_Cam*.ppm"))
    if not images:
        raise LoadError(f"{directory}: no input_Cam*.png/ppm images found")
    return images


def _decode_image(path: Path) -> np.ndarray:
    try:
        with Image.open(path) as img:
            rgb = img.convert("RGB")
            data = np.asarray(rgb, dtype=np.uint8)
    except OSError as exc:
        raise LoadError(f"{path}: cannot decode image ({exc})") from exc
    return data.astype(np.float32) / 255.0


def describe_scene(directory) -> SceneDescriptor:
    directory = Path(directory)
    if not directory.is_dir():
        raise LoadError(f"{directory} is not a directory")
    params_path = None
    for name in PARAMETER_FILENAMES:
        if (directory / name).is_file():
            params_path = directory / name
            break
    if params_path is None:
        raise LoadError(f"{directory}: no parameters file found")
    params = parse_flat_config(params_path)
    try:
        disp_min = float(params["disp_min"])
        disp_max = float(params["disp_max"])
    except KeyError as exc:
        raise LoadError(f"{params_path}: missing key {exc}") from exc
    except ValueError as exc:
        raise LoadError(f"{params_path}: unparsable disparity range") from exc

    images = _find_images(directory)
    count = len(images)
    n = m = None
    for key_n, key_m in (("n", "m"), ("num_cams_x", "num_cams_y")):
        if key_n in params and key_m in params:
            n, m = int(params[key_n]), int(params[key_m])
            break
    if n is None:
        root = math.isqrt(count)
        if root * root != count:
            raise LoadError(
                f"{directory}: {count} images do not form a square grid and "
                "no grid dimensions were given"
            )
        n = m = root
    if n * m != count:
        raise LoadError(
            f"{directory}: expected {n * m} images for a {n} x {m} grid, "
            f"found {count}"
        )

    with Image.open(images[0]) as img:
        width, height = img.size

    gt_path = None
    for name in GT_FILENAMES:
        if (directory / name).is_file():
            gt_path = directory / name
            break
    mask_path = directory / MASK_FILENAME
    return SceneDescriptor(
        path=directory,
        n=n,
        m=m,
        width=width,
        height=height,
        image_paths=tuple(images),
        disp_min=disp_min,
        disp_max=disp_max,
        gt_path=gt_path,
        mask_path=mask_path if mask_path.is_file() else None,
    )


def load_scene(directory) -> LoadedScene:
    """Load a benchmark-layout scene directory."""
    desc = describe_scene(directory)
    views = np.empty((desc.m, desc.n, desc.height, desc.width, 3), np.float32)
    for idx, path in enumerate(desc.image_paths):
        data = _decode_image(path)
        if data.shape[:2] != (desc.height, desc.width):
            raise LoadError(
                f"{path}: size {data.shape[1]}x{data.shape[0]} differs from "
                f"{desc.width}x{desc.height}"
            )
        t, s = divmod(idx, desc.n)
        views[t, s] = data
    lf = LightField(views)
    drange = per_view_range_to_full(desc.disp_min, desc.disp_max, desc.n)
    gt = read_pfm(desc.gt_path) if desc.gt_path else None
    mask = None
    if desc.mask_path:
        with Image.open(desc.mask_path) as img:
            mask = np.asarray(img.convert("L")) > 0
    return LoadedScene(lf, drange, gt, mask, desc)


def write_scene(spec: SyntheticSceneSpec, out_dir, seed: int = 0) -> Path:
    """Render a synthetic scene into a benchmark-layout directory."""
    from .pfm import write_pfm

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    lf, gt = generate_synthetic(spec, seed)
    for t in range(spec.m):
        for s in range(spec.n):
            idx = t * spec.n + s
            img = np.rint(lf.views[t, s] * 255.0).astype(np.uint8)
            Image.fromarray(img).save(out_dir / f"input_Cam{idx:03d}.png")
    (out_dir / "parameters.cfg").write_text(
        "# synthetic scene parameters\n"
        f"disp_min = {spec.disp_min}\n"
        f"disp_max = {spec.disp_max}\n"
        f"n = {spec.n}\n"
        f"m = {spec.m}\n"
        f"seed = {seed}\n"
    )
    write_pfm(gt, out_dir / "gt_disp.pfm")
    return out_dir
