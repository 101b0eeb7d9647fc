"""Command-line interface: ``recvc split|combine|img-split|img-combine|stack|verify|stats``.

Exit codes: 0 ok, 1 I/O failure, 2 usage or validation error, 3 share file
integrity failure, 4 the three shares disagree.
"""

import argparse
import os
import sys
import tempfile
from pathlib import Path

from . import chain, codec, imaging, pbm
from .errors import ContainerError, InconsistentTriple, NonzeroPadding, RVCError, TruncatedStream
from .ternary import SHARE_INDICES, RandomSource

EXIT_OK, EXIT_IO, EXIT_USAGE, EXIT_INTEGRITY, EXIT_INCONSISTENT = 0, 1, 2, 3, 4


class CLIError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def eprint(*args):
    print(*args, file=sys.stderr)


def _rng(seed):
    if seed is None:
        return RandomSource()
    eprint("warning: --seed gives reproducible shares; use them for testing only")
    return RandomSource.from_seed(seed)


def _read(path):
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise CLIError(f"cannot read {path}: {exc.strerror}", EXIT_IO) from exc


def _write_all(outputs):
    """Write every ``{path: bytes}`` to a temp file, then rename them all into place."""
    pending = []
    try:
        for path, data in outputs.items():
            path = Path(path)
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
            pending.append((tmp, path))
            with os.fdopen(fd, "wb") as f:
                f.write(data)
        for tmp, path in pending:
            os.replace(tmp, path)
    except OSError as exc:
        for tmp, _ in pending:
            if os.path.exists(tmp):
                os.unlink(tmp)
        raise CLIError(f"cannot write output: {exc}", EXIT_IO) from exc


def parse_bits(data, fmt):
    if fmt == "raw":
        return tuple(int(b) for byte in data for b in format(byte, "08b"))
    text = data.decode("ascii", errors="replace")
    bits = []
    for ch in text:
        if ch in "01":
            bits.append(int(ch))
        elif not ch.isspace():
            raise CLIError(f"unexpected character {ch!r} in bit string", EXIT_USAGE)
    return tuple(bits)


def format_bits(bits, fmt):
    if fmt == "raw":
        if len(bits) % 8:
            raise CLIError(f"{len(bits)} bits do not fill whole bytes; use --format bits", EXIT_USAGE)
        return bytes(int("".join(map(str, bits[i:i + 8])), 2) for i in range(0, len(bits), 8))
    return ("".join(map(str, bits)) + "\n").encode("ascii")


def load_share(path):
    try:
        return codec.parse_share(_read(path))
    except (ContainerError, TruncatedStream, NonzeroPadding) as exc:
        raise CLIError(f"{path}: {exc}", EXIT_INTEGRITY) from exc


def _pair(a, b):
    if a.share_index == b.share_index:
        raise CLIError(f"both files hold share {a.share_index}; need two different shares", EXIT_USAGE)
    if a.layout != b.layout or a.kind != b.kind:
        raise CLIError("shares come from different splits (layouts differ)", EXIT_USAGE)


def _level(container, level):
    top = container.layout.level_count
    k = top if level is None else level
    if not 1 <= k <= top:
        raise CLIError(f"level {k} outside 1..{top}", EXIT_USAGE)
    return k


def cmd_split(args):
    sources = [args.input] + list(args.hidden or [])
    levels = [parse_bits(_read(p), args.format) for p in reversed(sources)]
    rng = _rng(args.seed)
    shares = chain.encode_chain(chain.MessageChain(levels), rng)
    out = Path(args.out_dir)
    _write_all({
        out / f"share_{j}{codec.EXTENSION}": codec.serialize_share(
            codec.ShareContainer(j, "text", shares.layout.lengths, shares.share(j))
        )
        for j in SHARE_INDICES
    })
    print(codec.format_report(shares.layout))


def cmd_combine(args):
    a, b = load_share(args.share_a), load_share(args.share_b)
    _pair(a, b)
    k = _level(a, args.level)
    bits = chain.decode_level(a.symbols, a.share_index, b.symbols, b.share_index, a.layout, k)
    data = format_bits(bits, args.format)
    if args.out:
        _write_all({args.out: data})
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def load_image(path):
    return pbm.read_pbm(_read(path))


def cmd_img_split(args):
    sources = [args.image] + list(args.hidden or [])
    images = [load_image(p) for p in reversed(sources)]
    rng = _rng(args.seed)
    share_images = imaging.encode_image_chain(images, rng)
    out = Path(args.out_dir)
    outputs = {}
    for s in share_images:
        layout = s.layout
        symbols = imaging.symbols_from_share_image(s)
        outputs[out / f"share_{s.share_index}.pbm"] = pbm.write_pbm(s.image, args.variant)
        outputs[out / f"share_{s.share_index}{codec.EXTENSION}"] = codec.serialize_share(
            codec.ShareContainer(s.share_index, "image", layout.lengths, symbols, layout.shapes)
        )
    _write_all(outputs)
    print(codec.format_report(share_images[0].layout))


def load_share_image(path):
    """A share image from a ``.rvcs`` file, or from a PBM plus its ``.rvcs`` sidecar."""
    path = Path(path)
    if path.suffix == codec.EXTENSION:
        c = load_share(path)
        raster = None
    else:
        c = load_share(path.with_suffix(codec.EXTENSION))
        raster = load_image(path)
    if c.kind != "image":
        raise CLIError(f"{path}: not an image share", EXIT_USAGE)
    w, h = c.layout.shape(c.layout.level_count)
    if raster is None:
        return imaging.render_share_image(c.symbols, w, h, c.share_index, c.layout)
    if raster.shape != (w * imaging.SUBPIXELS, h):
        raise CLIError(f"{path}: share image size does not match its sidecar", EXIT_USAGE)
    return imaging.ShareImage(raster, c.share_index, c.layout)


def cmd_img_combine(args):
    a, b = load_share_image(args.share_a), load_share_image(args.share_b)
    if a.share_index == b.share_index:
        raise CLIError(f"both files hold share {a.share_index}; need two different shares", EXIT_USAGE)
    if a.layout != b.layout:
        raise CLIError("shares come from different splits (layouts differ)", EXIT_USAGE)
    k = a.layout.level_count if args.level is None else args.level
    if not 1 <= k <= a.layout.level_count:
        raise CLIError(f"level {k} outside 1..{a.layout.level_count}", EXIT_USAGE)
    img = imaging.decode_image_level(a, b, k)
    _write_all({args.out: pbm.write_pbm(img, args.variant)})


def cmd_stack(args):
    a, b = load_image(args.share_a), load_image(args.share_b)
    _write_all({args.out: pbm.write_pbm(imaging.stack_images(a, b), args.variant)})


def cmd_verify(args):
    containers = [load_share(p) for p in args.shares]
    by_index = {c.share_index: c for c in containers}
    if sorted(by_index) != list(SHARE_INDICES):
        found = ", ".join(str(c.share_index) for c in containers)
        raise CLIError(f"need shares 1, 2 and 3, got {found}", EXIT_USAGE)
    layout = containers[0].layout
    if any(c.layout != layout for c in containers):
        raise CLIError("shares come from different splits (layouts differ)", EXIT_USAGE)
    try:
        messages = chain.verify_shares(*(by_index[j].symbols for j in SHARE_INDICES), layout)
    except InconsistentTriple as exc:
        print("status: inconsistent")
        print(f"level: {exc.level}")
        print(f"position: {exc.position}")
        raise CLIError(str(exc), EXIT_INCONSISTENT) from exc
    print("status: consistent")
    for k, m in enumerate(messages, start=1):
        print(f"level {k}: {len(m)} bits")


def cmd_stats(args):
    print(codec.format_report(load_share(args.share).layout))


def build_parser():
    parser = argparse.ArgumentParser(
        prog="recvc",
        description="Recursive 2-out-of-3 threshold secret sharing for bit strings and binary images.",
    )
    sp = parser.add_subparsers(dest="command", required=True)

    s = sp.add_parser("split", help="split a message, hiding smaller ones inside its shares")
    s.add_argument("--input", required=True, help="cover message file")
    s.add_argument("--hidden", action="append", metavar="PATH",
                   help="hidden message, repeat largest to smallest; each a third the previous size")
    s.add_argument("--format", choices=["bits", "raw"], default="bits",
                   help="bits: ASCII 0/1 (whitespace ignored); raw: 8 bits per byte, MSB first")
    s.add_argument("--out-dir", required=True)
    s.add_argument("--seed", type=int, help="deterministic shares (testing only)")
    s.set_defaults(func=cmd_split)

    c = sp.add_parser("combine", help="recover one level from two shares")
    c.add_argument("share_a")
    c.add_argument("share_b")
    c.add_argument("--level", type=int, help="1 = smallest hidden message; default is the cover")
    c.add_argument("--format", choices=["bits", "raw"], default="bits")
    c.add_argument("--out", help="output file, stdout if omitted")
    c.set_defaults(func=cmd_combine)

    i = sp.add_parser("img-split", help="split a PBM image, hiding smaller images in its shares")
    i.add_argument("--image", required=True)
    i.add_argument("--hidden", action="append", metavar="PBM", help="repeat largest to smallest")
    i.add_argument("--out-dir", required=True)
    i.add_argument("--seed", type=int)
    i.add_argument("--variant", choices=["P1", "P4"], default="P4")
    i.set_defaults(func=cmd_img_split)

    ic = sp.add_parser("img-combine", help="regenerate a hidden image exactly from two shares")
    ic.add_argument("share_a", help="share .pbm (with .rvcs sidecar) or .rvcs")
    ic.add_argument("share_b")
    ic.add_argument("--level", type=int)
    ic.add_argument("--out", required=True)
    ic.add_argument("--variant", choices=["P1", "P4"], default="P4")
    ic.set_defaults(func=cmd_img_combine)

    st = sp.add_parser("stack", help="overlay two share images as transparencies")
    st.add_argument("share_a")
    st.add_argument("share_b")
    st.add_argument("--out", required=True)
    st.add_argument("--variant", choices=["P1", "P4"], default="P4")
    st.set_defaults(func=cmd_stack)

    v = sp.add_parser("verify", help="check all three shares against each other")
    v.add_argument("shares", nargs=3, metavar="SHARE")
    v.set_defaults(func=cmd_verify)

    t = sp.add_parser("stats", help="print the layout and efficiency of a share")
    t.add_argument("share")
    t.set_defaults(func=cmd_stats)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except CLIError as exc:
        eprint(f"error: {exc}")
        return exc.code
    except RVCError as exc:
        eprint(f"error: {exc}")
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
