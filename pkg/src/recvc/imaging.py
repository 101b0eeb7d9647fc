"""Visual cryptography front end for binary images.

Each secret pixel becomes a horizontal 1x3 block in every share: two black
subpixels and one white one, the white position being the share symbol.
Stacking two shares of a white pixel leaves the block one third white
(same white position); stacking two shares of a black pixel leaves it
fully black (different white positions).

Pixels are 0 = white, 1 = black, stored as ``uint8`` arrays of shape
``(height, width)``.
"""

from dataclasses import dataclass

import numpy as np

from .chain import ChainLayout, MessageChain, encode_chain, extract_level_share, make_layout
from .errors import (
    DuplicateShareIndex,
    InvalidStack,
    LayoutMismatch,
    MalformedBlock,
    ShapeMismatch,
)
from .ternary import SHARE_INDICES, check_share_index, decode_message_pair

SUBPIXELS = 3


@dataclass(frozen=True, eq=False)
class BinaryImage:
    width: int
    height: int
    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels, dtype=np.uint8)
        if px.shape != (self.height, self.width):
            raise ShapeMismatch(f"pixel array {px.shape} does not match {self.width}x{self.height}")
        if px.size and px.max() > 1:
            raise ValueError("binary image pixels must be 0 or 1")
        px.setflags(write=False)
        object.__setattr__(self, "pixels", px)

    def __eq__(self, other):
        if not isinstance(other, BinaryImage):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.pixels, other.pixels)

    def __repr__(self):
        return f"BinaryImage({self.width}x{self.height})"

    @property
    def shape(self):
        return (self.width, self.height)

    @classmethod
    def from_array(cls, array):
        array = np.asarray(array, dtype=np.uint8)
        return cls(array.shape[1], array.shape[0], array)


@dataclass(frozen=True, eq=False)
class ShareImage:
    """A rendered share: ``image`` is 3w x h, one block per secret pixel."""

    image: BinaryImage
    share_index: int
    layout: ChainLayout

    @property
    def source_shape(self):
        return (self.image.width // SUBPIXELS, self.image.height)


def image_to_bits(img):
    return tuple(img.pixels.reshape(-1).tolist())


def bits_to_image(bits, width, height):
    if len(bits) != width * height:
        raise ShapeMismatch(f"{len(bits)} bits cannot fill a {width}x{height} image")
    return BinaryImage(width, height, np.array(bits, dtype=np.uint8).reshape(height, width))


def render_share_image(symbols, width, height, share_index, layout=None):
    """Expand each symbol into a block whose white subpixel sits at that index."""
    check_share_index(share_index)
    if len(symbols) != width * height:
        raise ShapeMismatch(f"{len(symbols)} symbols cannot fill a {width}x{height} image")
    sym = np.array(symbols, dtype=np.uint8).reshape(height, width, 1)
    if sym.size and sym.max() > 2:
        raise ValueError("share symbols must be 0, 1 or 2")
    blocks = (np.arange(SUBPIXELS, dtype=np.uint8) != sym).astype(np.uint8)
    raster = blocks.reshape(height, width * SUBPIXELS)
    if layout is None:
        layout = make_layout([width * height], [(width, height)])
    return ShareImage(BinaryImage(width * SUBPIXELS, height, raster), share_index, layout)


def _raster(img):
    return img.image if isinstance(img, ShareImage) else img


def stack_images(a, b):
    """Overlay two transparencies: a subpixel is black if black on either."""
    a, b = _raster(a), _raster(b)
    if a.shape != b.shape:
        raise ShapeMismatch(f"cannot stack {a.width}x{a.height} on {b.width}x{b.height}")
    return BinaryImage(a.width, a.height, a.pixels | b.pixels)


def _white_counts(img):
    if img.width % SUBPIXELS:
        raise ShapeMismatch(f"width {img.width} is not a multiple of {SUBPIXELS}")
    blocks = img.pixels.reshape(img.height, img.width // SUBPIXELS, SUBPIXELS)
    return blocks, SUBPIXELS - blocks.sum(axis=2, dtype=np.int64)


def perceptual_decode(stacked, width=None, height=None):
    """Read a stacked image the way the eye would: grey block white, dark block black."""
    stacked = _raster(stacked)
    if width is not None and (stacked.width, stacked.height) != (width * SUBPIXELS, height):
        raise ShapeMismatch(f"stacked image {stacked.shape} does not match a {width}x{height} secret")
    _, white = _white_counts(stacked)
    bad = np.argwhere(white > 1)
    if bad.size:
        y, x = bad[0]
        raise InvalidStack(f"block ({x}, {y}) has {white[y, x]} white subpixels")
    return BinaryImage.from_array((white == 0).astype(np.uint8))


def symbols_from_share_image(img):
    """Recover the symbol of each block (index of its single white subpixel)."""
    blocks, white = _white_counts(_raster(img))
    bad = np.argwhere(white != 1)
    if bad.size:
        y, x = bad[0]
        raise MalformedBlock(f"block ({x}, {y}) has {white[y, x]} white subpixels, expected 1")
    return tuple(np.argmin(blocks, axis=2).reshape(-1).tolist())


def encode_image_chain(images, rng):
    """Share a chain of images (smallest first); returns three ShareImages.

    Smaller images ride inside the flattened top shares as symbol slices,
    not as rectangles of the rendered share.
    """
    chain = MessageChain([image_to_bits(img) for img in images], [img.shape for img in images])
    shares = encode_chain(chain, rng)
    width, height = images[-1].shape
    return tuple(
        render_share_image(shares.share(j), width, height, j, shares.layout) for j in SHARE_INDICES
    )


def decode_image_level(share_a, share_b, k):
    """Regenerate the level-k secret image exactly from two share images."""
    if share_a.share_index == share_b.share_index:
        raise DuplicateShareIndex(f"both share images have index {share_a.share_index}")
    if share_a.layout != share_b.layout:
        raise LayoutMismatch("share images were built from different layouts")
    layout = share_a.layout
    shape = layout.shape(k)
    if shape is None:
        raise LayoutMismatch(f"level {k} carries no image shape")
    a = extract_level_share(symbols_from_share_image(share_a), share_a.share_index, layout, k)
    b = extract_level_share(symbols_from_share_image(share_b), share_b.share_index, layout, k)
    return bits_to_image(decode_message_pair(a, share_a.share_index, b, share_b.share_index), *shape)
