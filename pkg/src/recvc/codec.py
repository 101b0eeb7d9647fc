"""Prefix coding of share symbols, the ``.rvcs`` share file, and efficiency figures.

Symbols are coded 0 -> ``0``, 1 -> ``10``, 2 -> ``11``.  A share file is::

    "RVC1" | version u8 | share index u8 | kind u8 | level count u8
    | per level, smallest first: n_k u32 [, width u32, height u32 for images]
    | symbol count u32 | CRC-32 of payload u32 | payload

All integers are big-endian; the payload is the prefix-coded symbol
stream packed MSB-first and zero-padded to a whole byte.
"""

import struct
import zlib
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .chain import make_layout
from .errors import (
    BadLengthRatio,
    BadMagic,
    BadShareIndex,
    ChecksumMismatch,
    InvariantViolation,
    NonzeroPadding,
    TruncatedPayload,
    TruncatedStream,
    UnsupportedVersion,
)
from .ternary import SHARE_INDICES, check_symbol

MAGIC = b"RVC1"
VERSION = 1
KINDS = {"text": 0, "image": 1}
KIND_NAMES = {v: k for k, v in KINDS.items()}
EXTENSION = ".rvcs"

CODEWORDS = {0: (0,), 1: (1, 0), 2: (1, 1)}

# bits per secret bit summed over the three shares, non-recursive
BASELINE_BITS_PER_SECRET_BIT = 5
SUBPIXEL_EXPANSION = 9

_U32 = struct.Struct(">I")


@dataclass(frozen=True)
class PrefixBitstream:
    bits: tuple
    symbol_count: int

    def to_bytes(self):
        return np.packbits(np.array(self.bits, dtype=np.uint8)).tobytes()

    @classmethod
    def from_bytes(cls, data, symbol_count):
        bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8))
        return cls(tuple(bits.tolist()), symbol_count)


def prefix_encode(symbols):
    bits = []
    for s in symbols:
        bits.extend(CODEWORDS[check_symbol(s)])
    return PrefixBitstream(tuple(bits), len(symbols))


def prefix_decode(stream):
    """Decode ``stream.symbol_count`` symbols; leftover bits must be byte padding."""
    bits = stream.bits
    out = []
    i = 0
    n = len(bits)
    for _ in range(stream.symbol_count):
        if i >= n:
            raise TruncatedStream(f"stream ended after {len(out)} of {stream.symbol_count} symbols")
        if bits[i] == 0:
            out.append(0)
            i += 1
        else:
            if i + 1 >= n:
                raise TruncatedStream(f"stream ended inside codeword for symbol {len(out)}")
            out.append(2 if bits[i + 1] else 1)
            i += 2
    rest = bits[i:]
    if len(rest) >= 8 or any(rest):
        raise NonzeroPadding(f"{len(rest)} trailing bits after {stream.symbol_count} symbols are not zero padding")
    return tuple(out)


@dataclass(frozen=True)
class ShareContainer:
    """One player's share together with the layout it was built from.

    ``shapes`` is a tuple of ``(width, height)`` per level for image
    shares and ``None`` for text shares.
    """

    share_index: int
    kind: str
    lengths: tuple
    symbols: tuple
    shapes: tuple = None

    def __post_init__(self):
        object.__setattr__(self, "lengths", tuple(int(n) for n in self.lengths))
        object.__setattr__(self, "symbols", tuple(int(s) for s in self.symbols))
        if self.shapes is not None:
            object.__setattr__(self, "shapes", tuple((int(w), int(h)) for w, h in self.shapes))

    @property
    def layout(self):
        return make_layout(self.lengths, self.shapes)

    @property
    def payload(self):
        return prefix_encode(self.symbols)

    @property
    def checksum(self):
        return zlib.crc32(self.payload.to_bytes())

    def check(self):
        if self.share_index not in SHARE_INDICES:
            raise InvariantViolation(f"share index {self.share_index} not in 1..3")
        if self.kind not in KINDS:
            raise InvariantViolation(f"unknown payload kind {self.kind!r}")
        if (self.kind == "image") != (self.shapes is not None):
            raise InvariantViolation("image shares need per-level shapes, text shares must not have them")
        if not 1 <= len(self.lengths) <= 255:
            raise InvariantViolation(f"level count {len(self.lengths)} not in 1..255")
        try:
            self.layout
        except ValueError as exc:
            raise InvariantViolation(str(exc)) from exc
        if len(self.symbols) != self.lengths[-1]:
            raise InvariantViolation(f"{len(self.symbols)} symbols for a top level of {self.lengths[-1]} bits")
        for s in self.symbols:
            if s not in (0, 1, 2):
                raise InvariantViolation(f"symbol {s} is not ternary")
        if self.lengths[-1] >= 1 << 32:
            raise InvariantViolation("share too long for the container format")


def serialize_share(c):
    c.check()
    payload = c.payload.to_bytes()
    parts = [MAGIC, bytes([VERSION, c.share_index, KINDS[c.kind], len(c.lengths)])]
    for k, n in enumerate(c.lengths):
        parts.append(_U32.pack(n))
        if c.shapes is not None:
            parts.append(struct.pack(">II", *c.shapes[k]))
    parts.append(struct.pack(">II", len(c.symbols), zlib.crc32(payload)))
    parts.append(payload)
    return b"".join(parts)


def _need(data, end, what):
    if len(data) < end:
        raise TruncatedPayload(f"file ends inside {what} ({len(data)} < {end} bytes)")


def parse_share(data):
    data = bytes(data)
    _need(data, 8, "fixed header")
    if data[:4] != MAGIC:
        raise BadMagic(f"expected magic {MAGIC!r}, got {data[:4]!r}")
    version, share_index, kind, level_count = data[4:8]
    if version != VERSION:
        raise UnsupportedVersion(f"container version {version} not supported")
    if share_index not in SHARE_INDICES:
        raise BadShareIndex(f"share index {share_index} not in 1..3")
    if kind not in KIND_NAMES:
        raise InvariantViolation(f"unknown payload kind byte {kind}")
    if level_count == 0:
        raise InvariantViolation("level count is zero")
    image = kind == KINDS["image"]
    pos = 8
    lengths, shapes = [], []
    for _ in range(level_count):
        size = 12 if image else 4
        _need(data, pos + size, "level table")
        lengths.append(_U32.unpack_from(data, pos)[0])
        if image:
            shapes.append(struct.unpack_from(">II", data, pos + 4))
        pos += size
    _need(data, pos + 8, "symbol count and checksum")
    symbol_count, crc = struct.unpack_from(">II", data, pos)
    pos += 8
    # length relations are checked before the payload so a bad table is named as such
    make_layout(lengths, shapes if image else None)
    if symbol_count != lengths[-1]:
        raise BadLengthRatio(f"symbol count {symbol_count} != top level length {lengths[-1]}")
    payload = data[pos:]
    if zlib.crc32(payload) != crc:
        raise ChecksumMismatch(f"payload CRC-32 {zlib.crc32(payload):08x} != stored {crc:08x}")
    try:
        symbols = prefix_decode(PrefixBitstream.from_bytes(payload, symbol_count))
    except TruncatedStream as exc:
        raise TruncatedPayload(str(exc)) from exc
    return ShareContainer(share_index, KIND_NAMES[kind], tuple(lengths), symbols, tuple(shapes) if image else None)


@dataclass(frozen=True)
class EfficiencyMetrics:
    ternary_efficiency: Fraction
    binary_efficiency: Fraction
    raw_subpixel_expansion: int
    improvement_ratio: Fraction

    @property
    def improvement_percent(self):
        return float((self.improvement_ratio - 1) * 100)


def efficiency_report(layout):
    """Secret bits carried per share symbol and per share bit.

    Every level counts as carried secret; the denominators use only the
    top share length, which is all that gets stored.
    """
    carried = sum(layout.lengths)
    n = layout.top_length
    binary = Fraction(carried, BASELINE_BITS_PER_SECRET_BIT * n)
    return EfficiencyMetrics(
        ternary_efficiency=Fraction(carried, 3 * n),
        binary_efficiency=binary,
        raw_subpixel_expansion=SUBPIXEL_EXPANSION,
        improvement_ratio=binary / Fraction(1, BASELINE_BITS_PER_SECRET_BIT),
    )


def format_report(layout):
    """Line-oriented ``key: value`` rendering of the layout and its efficiencies."""
    m = efficiency_report(layout)
    lines = [
        f"levels: {layout.level_count}",
        "lengths: " + " ".join(str(n) for n in layout.lengths),
    ]
    if layout.shapes is not None:
        lines.append("shapes: " + " ".join(f"{w}x{h}" for w, h in layout.shapes))
    for name in ("ternary_efficiency", "binary_efficiency"):
        value = getattr(m, name)
        lines.append(f"{name}: {value} ({float(value):.4f})")
    lines.append(f"raw_subpixel_expansion: {m.raw_subpixel_expansion}")
    lines.append(f"improvement_ratio: {m.improvement_ratio} ({float(m.improvement_ratio):.4f})")
    lines.append(f"improvement_over_baseline: {m.improvement_percent:.1f}%")
    return "\n".join(lines)
