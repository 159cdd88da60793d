"""Command-line front end: ``lutz encode|decode|inspect|bench``."""

from __future__ import annotations

import argparse
import logging
import os
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import BinaryIO, Iterator, Sequence

from . import bench, codec, container
from .errors import LutzError
from .lz77 import Lz77Params, lz77_expand
from .precoder import NormalizationOptions, UnknownPolicy

log = logging.getLogger("lutz")


def _on_off(value: str) -> bool:
    if value not in ("on", "off"):
        raise argparse.ArgumentTypeError("expected 'on' or 'off'")
    return value == "on"


def _nonnegative(value: str) -> int:
    n = int(value)
    if n < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return n


def _positive(value: str) -> int:
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return n


def _norm_opts(args: argparse.Namespace) -> NormalizationOptions:
    return NormalizationOptions(fasta_mode=args.fasta, unknown_policy=UnknownPolicy(args.unknown))


@contextmanager
def _open_in(path: str) -> Iterator[BinaryIO]:
    if path == "-":
        yield sys.stdin.buffer
    else:
        with open(path, "rb") as fh:
            yield fh


@contextmanager
def _open_out(path: str) -> Iterator[BinaryIO]:
    """Open an output file, removing it again if the command fails."""
    if path == "-":
        yield sys.stdout.buffer
        sys.stdout.buffer.flush()
        return
    fh = open(path, "wb")
    try:
        yield fh
    except BaseException:
        fh.close()
        os.unlink(path)
        raise
    fh.close()


def cmd_encode(args: argparse.Namespace) -> int:
    stage2 = args.stage2 and not args.precode_only
    out_path = args.output or ("-" if args.input == "-" else args.input + ".lutz")
    with _open_in(args.input) as src, _open_out(out_path) as dst:
        stats = codec.encode_stream(src, dst, _norm_opts(args), stage2, Lz77Params(args.max_chain))
    print(
        f"bases={stats.base_count} precoded_bytes={stats.precoded_bytes} "
        f"output_bytes={stats.container_bytes} r_bar={stats.bits_per_base:.4f}",
        file=sys.stderr,
    )
    return 0


def cmd_decode(args: argparse.Namespace) -> int:
    with _open_in(args.input) as src, _open_out(args.output) as dst:
        codec.decode_stream(src, dst, args.wrap)
    return 0


def cmd_inspect(args: argparse.Namespace) -> int:
    blob = Path(args.input).read_bytes() if args.input != "-" else sys.stdin.buffer.read()
    header, payload = container.read_container(blob)
    lines = [
        f"magic: {container.MAGIC.decode()}",
        f"version: {header.version}",
        f"flags: {header.flags:#04x}",
        f"stage2: {'on' if header.stage2 else 'off'}",
        f"fasta_headers_stripped: {'yes' if header.flags & container.FLAG_FASTA_STRIPPED else 'no'}",
        f"unknown_as_n: {'yes' if header.flags & container.FLAG_UNKNOWN_AS_N else 'no'}",
        f"base_count: {header.base_count}",
        f"payload_crc: {header.payload_crc:#010x}",
        f"payload_bytes: {len(payload)}",
        f"container_bytes: {len(blob)}",
    ]
    if header.base_count:
        lines.append(f"r_bar: {bench.bits_per_base(len(blob), header.base_count):.4f}")
    if header.stage2:
        sec = container.parse_stage2(payload)
        precoded = lz77_expand(container.unpack_stage2(payload))
        lines += [
            f"token_count: {sec.token_count}",
            f"literal_count: {sec.literal_count}",
            f"match_count: {sec.match_count}",
            f"literal_bits: {sec.literal_bits.bit_length}",
            f"precoded_bytes: {len(precoded)}",
        ]
    print("\n".join(lines))
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    entries = bench.read_manifest(args.manifest)
    rows = bench.run_corpus(
        entries, args.stage2, args.repeat, _norm_opts(args), Lz77Params(args.max_chain)
    )
    report = bench.format_report(rows, args.format)
    if args.output and args.output != "-":
        Path(args.output).write_text(report)
    else:
        sys.stdout.write(report)
    return 1 if any(r.failed for r in rows) else 0


def _add_norm_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--fasta", action="store_true", help="skip lines starting with '>'")
    p.add_argument(
        "--unknown", choices=[p.value for p in UnknownPolicy], default="reject",
        help="what to do with bytes other than ACGTN/acgtn/CR/LF (default: reject)",
    )
    p.add_argument("--max-chain", type=_positive, default=128, help=argparse.SUPPRESS)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lutz", description="LUT + LZ77 DNA sequence compressor")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="compress a sequence file into a container")
    p.add_argument("input", help="sequence file, '-' for stdin")
    p.add_argument("-o", "--output", help="container path (default INPUT.lutz, stdout for stdin)")
    p.add_argument("--precode-only", action="store_true", help="skip the LZ77 + Huffman stage")
    p.add_argument("--stage2", type=_on_off, default=True, metavar="on|off")
    _add_norm_flags(p)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="restore the base stream from a container")
    p.add_argument("input", help="container file, '-' for stdin")
    p.add_argument("-o", "--output", default="-", help="output path (default stdout)")
    p.add_argument("--wrap", type=_nonnegative, default=0, help="line width, 0 for one line")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("inspect", help="print container header and stage statistics")
    p.add_argument("input")
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("bench", help="run the corpus benchmark")
    p.add_argument("manifest", help="name<TAB>path[<TAB>bases[<TAB>sha256]] per line")
    p.add_argument("--stage2", type=_on_off, default=True, metavar="on|off")
    p.add_argument("--repeat", type=_positive, default=bench.MIN_REPEAT)
    p.add_argument("--format", choices=["tsv", "text"], default="tsv")
    p.add_argument("-o", "--output", help="report path (default stdout)")
    _add_norm_flags(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="lutz: %(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except (LutzError, OSError) as exc:
        print(f"lutz: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
