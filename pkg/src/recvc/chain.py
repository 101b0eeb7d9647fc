"""Recursive hiding of smaller secrets inside the shares of larger ones.

A chain holds messages M_1 ... M_L, smallest first, each three times the
length of the previous one.  Share j of level k-1 is planted verbatim as
block j (of three equal blocks) of share j of level k, so every top
share carries exactly one share of every smaller message and no single
player can read any hidden level alone.

Levels and share indices are 1-based throughout, symbol positions 0-based.
"""

from dataclasses import dataclass, field

from .errors import (
    BadImageShape,
    BadLengthRatio,
    DuplicateShareIndex,
    EmptyChain,
    InconsistentTriple,
    LengthMismatch,
    LevelOutOfRange,
)
from .ternary import (
    SHARE_INDICES,
    check_bit,
    check_share_index,
    decode_message_pair,
    split_message,
    verify_triple,
)


@dataclass(frozen=True)
class MessageChain:
    """Nested secrets, smallest first; ``levels[-1]`` is the cover message.

    ``shapes`` optionally gives ``(width, height)`` per level for messages
    that came from images, or ``None`` for plain bit strings.
    """

    levels: tuple
    shapes: tuple = None

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(tuple(check_bit(b) for b in m) for m in self.levels))
        if self.shapes is not None:
            object.__setattr__(self, "shapes", tuple(None if s is None else tuple(s) for s in self.shapes))


@dataclass(frozen=True)
class ChainLayout:
    lengths: tuple
    shapes: tuple = field(default=None)

    @property
    def level_count(self):
        return len(self.lengths)

    @property
    def top_length(self):
        return self.lengths[-1]

    def length(self, k):
        _check_level(self, k)
        return self.lengths[k - 1]

    def shape(self, k):
        _check_level(self, k)
        if self.shapes is None:
            return None
        return self.shapes[k - 1]

    def offset(self, k, j):
        return level_offset(self, k, j)


@dataclass(frozen=True)
class ShareSet:
    shares: tuple
    layout: ChainLayout

    def share(self, j):
        return self.shares[check_share_index(j) - 1]


def make_layout(lengths, shapes=None):
    """Build a layout from level lengths (smallest first), validating ratios."""
    lengths = tuple(int(n) for n in lengths)
    if not lengths:
        raise EmptyChain("a chain needs at least one level")
    if lengths[0] < 1:
        raise BadLengthRatio(f"smallest level must hold at least one bit, got {lengths[0]}")
    for k in range(1, len(lengths)):
        if lengths[k] != 3 * lengths[k - 1]:
            raise BadLengthRatio(
                f"level {k + 1} has {lengths[k]} bits, expected 3 x {lengths[k - 1]} = "
                f"{3 * lengths[k - 1]} (lengths {lengths})"
            )
    if shapes is not None:
        shapes = tuple(None if s is None else (int(s[0]), int(s[1])) for s in shapes)
        if len(shapes) != len(lengths):
            raise BadImageShape(f"{len(shapes)} shapes given for {len(lengths)} levels")
        for k, (n, s) in enumerate(zip(lengths, shapes), start=1):
            if s is not None and (s[0] < 1 or s[1] < 1 or s[0] * s[1] != n):
                raise BadImageShape(f"level {k}: {s[0]}x{s[1]} image does not hold {n} bits")
        if all(s is None for s in shapes):
            shapes = None
    return ChainLayout(lengths, shapes)


def validate_chain(chain):
    return make_layout([len(m) for m in chain.levels], chain.shapes)


def _check_level(layout, k):
    if not 1 <= k <= layout.level_count:
        raise LevelOutOfRange(f"level {k} outside 1..{layout.level_count}")


def level_offset(layout, k, j):
    """Start of level-k share j inside top share j.

    Closed form ``(j-1) * n_k * (3**(L-k) - 1) / 2``: the share sits in
    block j at every level above it.
    """
    _check_level(layout, k)
    check_share_index(j)
    n_k = layout.lengths[k - 1]
    return (j - 1) * n_k * (3 ** (layout.level_count - k) - 1) // 2


def encode_chain(chain, rng):
    """Share every level of ``chain``, embedding each level in the next.

    Random draws run level by level, ascending positions within a level.
    """
    layout = validate_chain(chain)
    prev = split_message(chain.levels[0], rng)
    for k in range(1, layout.level_count):
        n_prev = layout.lengths[k - 1]
        constraints = {}
        for j in SHARE_INDICES:
            start = (j - 1) * n_prev
            for i, symbol in enumerate(prev[j - 1]):
                constraints[start + i] = (j, symbol)
        assert len(constraints) == layout.lengths[k], "every position needs exactly one fixed piece"
        prev = split_message(chain.levels[k], rng, constraints)
    return ShareSet(prev, layout)


def extract_level_share(top_share, j, layout, k):
    if len(top_share) != layout.top_length:
        raise LengthMismatch(f"share has {len(top_share)} symbols, layout expects {layout.top_length}")
    start = level_offset(layout, k, j)
    return tuple(top_share[start:start + layout.lengths[k - 1]])


def decode_level(share_a, j_a, share_b, j_b, layout, k):
    """Recover M_k from the top shares of two distinct players."""
    check_share_index(j_a)
    check_share_index(j_b)
    if j_a == j_b:
        raise DuplicateShareIndex(f"both shares have index {j_a}")
    a = extract_level_share(share_a, j_a, layout, k)
    b = extract_level_share(share_b, j_b, layout, k)
    return decode_message_pair(a, j_a, b, j_b)


def verify_shares(s1, s2, s3, layout):
    """Check all three shares against each other and decode every level.

    Raises InconsistentTriple carrying the level and 0-based position (in
    that level's message) of the first bad column, top level first.
    """
    shares = (s1, s2, s3)
    for s in shares:
        if len(s) != layout.top_length:
            raise LengthMismatch(f"share has {len(s)} symbols, layout expects {layout.top_length}")
    messages = []
    for k in range(layout.level_count, 0, -1):
        slices = [extract_level_share(s, j, layout, k) for j, s in zip(SHARE_INDICES, shares)]
        bits = []
        for pos, column in enumerate(zip(*slices)):
            try:
                bits.append(verify_triple(*column))
            except InconsistentTriple:
                raise InconsistentTriple(
                    f"level {k}, position {pos}: pieces {column} have exactly two equal",
                    position=pos,
                    level=k,
                ) from None
        messages.append(tuple(bits))
    return messages[::-1]
