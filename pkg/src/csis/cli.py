"""Command-line interface: keygen, embed, extract, construct, evaluate, inspect.

Exit status: 0 success, 1 configuration/usage, 3 capacity, 4 framing
(wrong key or corrupted data), 5 file format, 6 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import secrets
import sys
from pathlib import Path

import numpy as np

from . import __version__, stegocodec
from .descipher import DesKey
from .errors import CSISError, FormatError
from .lasso import AdmmSettings
from .pipeline import (
    MAGIC,
    StegoContainer,
    construct_stego_image,
    embed_file,
    evaluate,
    extract_file,
    max_payload_bits,
)
from .pixelio import read_image, write_image
from .sensing import KEY_MAGIC, StegoKey

log = logging.getLogger("csis")


def _key_args(p: argparse.ArgumentParser, seed_required: bool = False) -> None:
    g = p.add_argument_group("stego key (ignored when --key is given)")
    g.add_argument("--key", type=Path, help="key file written by 'csis keygen'")
    g.add_argument("--seed", type=int, required=seed_required, help="64-bit key seed")
    g.add_argument("--block-size", type=int, default=8)
    g.add_argument("--p1", type=int, default=12, help="low-frequency coefficients kept as-is")
    g.add_argument("--m", type=int, default=37, help="measurements per block |m|")
    g.add_argument("--alpha", type=float, default=1.0)


def _solver_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("ADMM-LASSO solver")
    g.add_argument("--lambda", dest="lam", type=float, default=1.0)
    g.add_argument("--rho", type=float, default=1.0)
    g.add_argument("--eps-abs", type=float, default=1e-4)
    g.add_argument("--eps-rel", type=float, default=1e-3)
    g.add_argument("--max-iter", type=int, default=500)


def _stego_key(args) -> StegoKey:
    if args.key is not None:
        return StegoKey.from_bytes(args.key.read_bytes())
    if args.seed is None:
        raise CSISError("either --key or --seed is required")
    return StegoKey(args.seed, args.block_size, args.p1, args.m, args.alpha)


def _settings(args) -> AdmmSettings:
    return AdmmSettings(args.rho, args.eps_abs, args.eps_rel, args.max_iter)


def _read_container(path: Path) -> StegoContainer:
    return StegoContainer.from_bytes(path.read_bytes())


def cmd_keygen(args) -> int:
    seed = args.seed if args.seed is not None else secrets.randbits(64)
    key = StegoKey(seed, args.block_size, args.p1, args.m, args.alpha)
    args.output.write_bytes(key.to_bytes())
    print(f"wrote key seed={key.seed} B={key.block_size} p1={key.p1} m={key.m_size} -> {args.output}")
    return 0


def cmd_embed(args) -> int:
    skey = _stego_key(args)
    cover = read_image(args.cover)
    payload = np.unpackbits(np.frombuffer(args.payload.read_bytes(), dtype=np.uint8))
    container = embed_file(cover, payload, skey, DesKey(args.des_key))
    args.output.write_bytes(container.to_bytes())
    cap = stegocodec.capacity(container.measurements)
    print(f"embedded {payload.size} bits (capacity {cap} bits) -> {args.output}")
    return 0


def cmd_extract(args) -> int:
    bits = extract_file(_read_container(args.container), DesKey(args.des_key))
    if bits.size % 8:
        log.warning("payload is %d bits; zero-padding the last byte", bits.size)
    args.output.write_bytes(np.packbits(bits).tobytes())
    print(f"extracted {bits.size} bits -> {args.output}")
    return 0


def cmd_construct(args) -> int:
    skey = _stego_key(args)
    img = construct_stego_image(_read_container(args.container), skey, _settings(args), args.lam)
    write_image(args.output, img)
    print(f"constructed {img.width}x{img.height}x{img.channels} stego-image -> {args.output}")
    return 0


def cmd_evaluate(args) -> int:
    skey = _stego_key(args)
    run = evaluate(
        read_image(args.cover),
        skey,
        DesKey(args.des_key),
        payload_seed=args.payload_seed,
        fill=args.fill,
        lam=args.lam,
        settings=_settings(args),
    )
    print(run.to_text())
    if args.report is not None:
        args.report.write_text(json.dumps(run.to_dict(), indent=2) + "\n")
    if args.stego is not None:
        write_image(args.stego, run.stego)
    return 0


def cmd_inspect(args) -> int:
    data = args.file.read_bytes()
    if data.startswith(KEY_MAGIC):
        k = StegoKey.from_bytes(data)
        print(f"type=key\nseed={k.seed}\nblock_size={k.block_size}\np1={k.p1}\n"
              f"m_size={k.m_size}\nalpha={k.alpha}")
    elif data.startswith(MAGIC):
        c = StegoContainer.from_bytes(data)
        cap = stegocodec.capacity(c.measurements)
        print(
            f"type=container\nwidth={c.width}\nheight={c.height}\nchannels={c.channels}\n"
            f"block_size={c.block_size}\np1={c.p1}\nm_size={c.m_size}\n"
            f"blocks={c.n_blocks}\ncapacity_bits={cap}\n"
            f"max_payload_bits={max(max_payload_bits(cap), 0)}"
        )
    else:
        raise FormatError("neither a CSIS key nor a CSIS container", offset=0)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="csis",
        description="Compressed-sensing image steganography.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    fmt = argparse.ArgumentDefaultsHelpFormatter

    p = sub.add_parser("keygen", help="write a stego key file", formatter_class=fmt)
    _key_args(p)
    p.add_argument("-o", "--output", type=Path, required=True)
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("embed", help="embed a payload file into a cover image", formatter_class=fmt)
    p.add_argument("cover", type=Path, help="cover image (binary PGM/PPM)")
    p.add_argument("--payload", type=Path, required=True, help="file of raw bytes to hide")
    p.add_argument("--des-key", required=True, help="DES key, 16 hex characters")
    _key_args(p)
    p.add_argument("-o", "--output", type=Path, required=True, help="stego container")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("extract", help="recover the payload from a container", formatter_class=fmt)
    p.add_argument("container", type=Path)
    p.add_argument("--des-key", required=True)
    p.add_argument("-o", "--output", type=Path, required=True)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("construct", help="build the stego-image from a container", formatter_class=fmt)
    p.add_argument("container", type=Path)
    _key_args(p)
    _solver_args(p)
    p.add_argument("-o", "--output", type=Path, required=True)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("evaluate", help="embed/extract/construct round trip with metrics", formatter_class=fmt)
    p.add_argument("cover", type=Path)
    p.add_argument("--des-key", default="133457799BBCDFF1")
    p.add_argument("--payload-seed", type=int, default=0)
    p.add_argument("--fill", type=float, default=0.9, help="payload size as a fraction of capacity")
    p.add_argument("--report", type=Path, help="write a JSON report here")
    p.add_argument("--stego", type=Path, help="also save the constructed stego-image")
    _key_args(p)
    _solver_args(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("inspect", help="describe a key file or container")
    p.add_argument("file", type=Path)
    p.set_defaults(func=cmd_inspect)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except CSISError as exc:
        print(f"csis: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"csis: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
