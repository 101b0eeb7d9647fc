"""Comparison-based 2-out-of-3 splitting of single bits into ternary symbols.

A secret bit becomes three pieces, one per player.  Bit 0 is carried by
three equal symbols, bit 1 by three pairwise distinct symbols, so any two
pieces reveal the bit (equal means 0) while a single piece is uniform
over {0, 1, 2}.
"""

import secrets
from itertools import permutations

from .errors import (
    BadShareIndex,
    ConstraintOutOfRange,
    DuplicateShareIndex,
    InconsistentTriple,
    LengthMismatch,
)

SYMBOLS = (0, 1, 2)
SHARE_INDICES = (1, 2, 3)

# Candidate orderings; option indices drawn from the random source refer
# to positions in these tuples.
ZERO_TRIPLES = ((0, 0, 0), (1, 1, 1), (2, 2, 2))
ONE_TRIPLES = tuple(permutations(SYMBOLS))

_MASK64 = (1 << 64) - 1


def check_symbol(value):
    if value not in SYMBOLS:
        raise ValueError(f"ternary symbol must be 0, 1 or 2, got {value!r}")
    return int(value)


def check_bit(value):
    if value not in (0, 1):
        raise ValueError(f"secret bit must be 0 or 1, got {value!r}")
    return int(value)


def check_share_index(value):
    if value not in SHARE_INDICES:
        raise BadShareIndex(f"share index must be 1, 2 or 3, got {value!r}")
    return int(value)


class SymbolTriple(tuple):
    """The pieces (p1, p2, p3) of one secret bit.

    Only all-equal and all-distinct triples can be constructed.
    """

    __slots__ = ()

    def __new__(cls, p1, p2, p3):
        for p in (p1, p2, p3):
            check_symbol(p)
        if len({p1, p2, p3}) == 2:
            raise InconsistentTriple(f"triple {(p1, p2, p3)} has exactly two equal pieces")
        return super().__new__(cls, (p1, p2, p3))

    def __repr__(self):
        return f"SymbolTriple{tuple(self)}"

    @property
    def p1(self):
        return self[0]

    @property
    def p2(self):
        return self[1]

    @property
    def p3(self):
        return self[2]

    @property
    def bit(self):
        return 0 if self[0] == self[1] else 1

    def piece(self, share_index):
        return self[check_share_index(share_index) - 1]


class RandomSource:
    """Stream of uniform draws from ``range(m)``.

    The default instance reads the operating system CSPRNG.  Use
    :meth:`from_seed` for a reproducible stream (tests only).
    """

    def randbelow(self, m):
        if m < 1:
            raise ValueError("m must be positive")
        return secrets.randbelow(m)

    @classmethod
    def from_seed(cls, seed):
        return SeededSource(seed)


class SeededSource(RandomSource):
    """SplitMix64 generator with rejection sampling.

    Chosen over ``random.Random`` because its output is trivially
    reproducible by any other implementation given the same 64-bit seed.
    Exactly one call to :meth:`randbelow` happens per split, including
    the degenerate ``m == 1`` case.
    """

    def __init__(self, seed):
        self.state = int(seed) & _MASK64

    def next_u64(self):
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def randbelow(self, m):
        if m < 1:
            raise ValueError("m must be positive")
        limit = (1 << 64) - ((1 << 64) % m)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % m


def split_bit(bit, rng):
    """Split one secret bit into a uniformly chosen valid triple."""
    options = ONE_TRIPLES if check_bit(bit) else ZERO_TRIPLES
    return SymbolTriple(*options[rng.randbelow(len(options))])


def split_bit_constrained(bit, fixed_share, fixed_symbol, rng):
    """Split ``bit`` with the piece for ``fixed_share`` forced to ``fixed_symbol``.

    Bit 0 leaves a single candidate, bit 1 leaves two; a draw is consumed
    either way.
    """
    check_share_index(fixed_share)
    check_symbol(fixed_symbol)
    pool = ONE_TRIPLES if check_bit(bit) else ZERO_TRIPLES
    options = [t for t in pool if t[fixed_share - 1] == fixed_symbol]
    return SymbolTriple(*options[rng.randbelow(len(options))])


def decode_pair(a, b):
    """Secret bit from two pieces of distinct shares: equal means 0."""
    return 0 if check_symbol(a) == check_symbol(b) else 1


def verify_triple(p1, p2, p3):
    """Decode all three pieces, raising InconsistentTriple on corruption."""
    return SymbolTriple(p1, p2, p3).bit


def split_message(bits, rng, constraints=None):
    """Split a bit sequence into three symbol sequences.

    ``constraints`` maps a 0-based position to ``(share_index, symbol)``;
    that piece is forced at that position.  Draws happen in ascending
    position order, one per bit.
    """
    bits = [check_bit(b) for b in bits]
    constraints = constraints or {}
    for pos in constraints:
        if not 0 <= pos < len(bits):
            raise ConstraintOutOfRange(
                f"constraint at position {pos} outside message of length {len(bits)}"
            )
    shares = ([], [], [])
    for pos, bit in enumerate(bits):
        if pos in constraints:
            j, s = constraints[pos]
            triple = split_bit_constrained(bit, j, s, rng)
        else:
            triple = split_bit(bit, rng)
        for seq, piece in zip(shares, triple):
            seq.append(piece)
    return tuple(tuple(seq) for seq in shares)


def decode_message_pair(seq_a, idx_a, seq_b, idx_b):
    """Recover the secret bits from the shares of two distinct players."""
    check_share_index(idx_a)
    check_share_index(idx_b)
    if idx_a == idx_b:
        raise DuplicateShareIndex(f"both shares have index {idx_a}")
    if len(seq_a) != len(seq_b):
        raise LengthMismatch(f"share lengths differ: {len(seq_a)} != {len(seq_b)}")
    return tuple(decode_pair(a, b) for a, b in zip(seq_a, seq_b))
