"""Recursive 2-out-of-3 threshold secret sharing for bit strings and binary images."""

from .chain import (
    ChainLayout,
    MessageChain,
    ShareSet,
    decode_level,
    encode_chain,
    extract_level_share,
    level_offset,
    make_layout,
    validate_chain,
    verify_shares,
)
from .codec import (
    EfficiencyMetrics,
    PrefixBitstream,
    ShareContainer,
    efficiency_report,
    parse_share,
    prefix_decode,
    prefix_encode,
    serialize_share,
)
from .errors import RVCError
from .imaging import (
    BinaryImage,
    ShareImage,
    bits_to_image,
    decode_image_level,
    encode_image_chain,
    image_to_bits,
    perceptual_decode,
    render_share_image,
    stack_images,
    symbols_from_share_image,
)
from .pbm import read_pbm, write_pbm
from .ternary import (
    RandomSource,
    SeededSource,
    SymbolTriple,
    decode_message_pair,
    decode_pair,
    split_bit,
    split_bit_constrained,
    split_message,
    verify_triple,
)

__version__ = "0.1.0"
