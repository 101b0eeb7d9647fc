"""Minimal PBM (P1 ASCII / P4 raw) reader and canonical writer."""

import numpy as np

from .errors import BadHeader, DimensionOverflow, TruncatedRaster
from .imaging import BinaryImage

MAX_SIDE = 1 << 16
_WHITESPACE = b" \t\n\r\v\f"


def _skip(data, pos):
    """Skip whitespace and comments, which run to end of line."""
    while pos < len(data):
        c = data[pos:pos + 1]
        if c == b"#":
            end = data.find(b"\n", pos)
            pos = len(data) if end < 0 else end + 1
        elif c in _WHITESPACE:
            pos += 1
        else:
            break
    return pos


def _read_int(data, pos):
    pos = _skip(data, pos)
    start = pos
    while pos < len(data) and data[pos:pos + 1].isdigit():
        pos += 1
    if pos == start:
        raise BadHeader(f"expected a decimal number at byte {start}")
    return int(data[start:pos]), pos


def read_pbm(data):
    data = bytes(data)
    magic = data[:2]
    if magic not in (b"P1", b"P4"):
        raise BadHeader(f"not a PBM file (magic {magic!r})")
    width, pos = _read_int(data, 2)
    height, pos = _read_int(data, pos)
    if width > MAX_SIDE or height > MAX_SIDE:
        raise DimensionOverflow(f"{width}x{height} exceeds {MAX_SIDE} pixels per side")
    if width < 1 or height < 1:
        raise BadHeader(f"empty image {width}x{height}")
    if pos >= len(data) or data[pos:pos + 1] not in _WHITESPACE:
        raise BadHeader("missing whitespace after header")
    pos += 1

    if magic == b"P4":
        row_bytes = (width + 7) // 8
        need = row_bytes * height
        raster = np.frombuffer(data, dtype=np.uint8, count=min(need, len(data) - pos), offset=pos)
        if raster.size < need:
            raise TruncatedRaster(f"raster has {raster.size} of {need} bytes")
        pixels = np.unpackbits(raster.reshape(height, row_bytes), axis=1)[:, :width]
        return BinaryImage(width, height, pixels)

    digits = []
    need = width * height
    while len(digits) < need:
        pos = _skip(data, pos)
        if pos >= len(data):
            raise TruncatedRaster(f"raster has {len(digits)} of {need} pixels")
        c = data[pos]
        if c not in b"01":
            raise BadHeader(f"unexpected byte {bytes([c])!r} in P1 raster")
        digits.append(c - 0x30)
        pos += 1
    return BinaryImage(width, height, np.array(digits, dtype=np.uint8).reshape(height, width))


def write_pbm(img, variant="P4"):
    header = f"{variant}\n{img.width} {img.height}\n".encode("ascii")
    if variant == "P4":
        return header + np.packbits(img.pixels, axis=1).tobytes()
    if variant == "P1":
        rows = (" ".join(str(v) for v in row) for row in img.pixels.tolist())
        return header + "".join(r + "\n" for r in rows).encode("ascii")
    raise ValueError(f"unknown PBM variant {variant!r}")
