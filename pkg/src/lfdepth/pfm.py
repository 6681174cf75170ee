"""Grayscale portable float map (PFM) reader/writer for depth maps.

Layout: a ``Pf`` tag line, a ``width height`` line, a scale line whose sign
encodes endianness (negative = little-endian), then ``height`` rows of
32-bit floats stored bottom-to-top.  Invalid pixels are written as
``INVALID_SENTINEL`` and restored to mask entries on read.
"""

from __future__ import annotations

import numpy as np

from .core import DepthMap, LoadError

INVALID_SENTINEL = np.float32(-1e30)


class PfmFormatError(LoadError):
    pass


def write_pfm(depth, path) -> None:
    """Write a DepthMap (or plain 2-D float array) as little-endian PFM."""
    if isinstance(depth, DepthMap):
        values = np.where(depth.valid, depth.values, INVALID_SENTINEL)
    else:
        values = np.asarray(depth, dtype=np.float32)
    if values.ndim != 2:
        raise PfmFormatError("only single-channel maps can be written")
    if not np.all(np.isfinite(values)):
        raise PfmFormatError("PFM payload must be finite")
    height, width = values.shape
    data = np.flipud(values).astype("<f4", copy=False)
    with open(path, "wb") as f:
        f.write(b"Pf\n")
        f.write(f"{width} {height}\n".encode("ascii"))
        f.write(b"-1.0\n")
        f.write(data.tobytes())


def read_pfm(path) -> DepthMap:
    """Read a grayscale PFM into a DepthMap (sentinel pixels -> invalid)."""
    with open(path, "rb") as f:
        tag = f.readline().strip()
        if tag == b"PF":
            raise PfmFormatError("color PFM is not a depth map")
        if tag != b"Pf":
            raise PfmFormatError(f"not a PFM file (tag {tag!r})")
        dims = f.readline().split()
        if len(dims) != 2:
            raise PfmFormatError("malformed dimensions line")
        try:
            width, height = int(dims[0]), int(dims[1])
        except ValueError as exc:
            raise PfmFormatError("malformed dimensions line") from exc
        if width <= 0 or height <= 0:
            raise PfmFormatError("non-positive dimensions")
        try:
            scale = float(f.readline())
        except ValueError as exc:
            raise PfmFormatError("malformed scale line") from exc
        dtype = "<f4" if scale < 0 else ">f4"
        payload = f.read(width * height * 4)
    if len(payload) != width * height * 4:
        raise PfmFormatError("truncated PFM payload")
    values = np.frombuffer(payload, dtype=dtype).reshape(height, width)
    values = np.flipud(values).astype(np.float32)
    valid = values != INVALID_SENTINEL
    return DepthMap(values.copy(), valid)
