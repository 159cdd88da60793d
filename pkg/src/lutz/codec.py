"""End-to-end encode/decode between raw sequence bytes and containers."""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import BinaryIO

from . import container
from .container import ContainerHeader, HEADER_SIZE
from .errors import ChecksumMismatch, ContainerError
from .lz77 import Lz77Params, Match, lz77_compress, lz77_expand
from .precoder import (
    NormalizationOptions,
    Normalizer,
    PrecodeDecoder,
    PrecodeEncoder,
    UnknownPolicy,
)

CHUNK = 1 << 16


@dataclass
class EncodeStats:
    base_count: int
    precoded_bytes: int
    container_bytes: int
    stage2: bool
    token_count: int = 0
    literal_count: int = 0
    match_count: int = 0

    @property
    def bits_per_base(self) -> float:
        return 8 * self.container_bytes / self.base_count if self.base_count else 0.0


def _flags(norm: Normalizer, stage2: bool) -> int:
    flags = container.FLAG_STAGE2 if stage2 else 0
    if norm.headers_skipped:
        flags |= container.FLAG_FASTA_STRIPPED
    if norm.opts.unknown_policy is UnknownPolicy.TREAT_AS_N:
        flags |= container.FLAG_UNKNOWN_AS_N
    return flags


def _precode_stream(src: BinaryIO, opts: NormalizationOptions, sink) -> tuple[Normalizer, PrecodeEncoder]:
    norm = Normalizer(opts)
    enc = PrecodeEncoder()
    while chunk := src.read(CHUNK):
        sink(enc.feed(norm.feed(chunk)))
    sink(enc.finish())
    return norm, enc


def encode_stream(
    src: BinaryIO,
    dst: BinaryIO,
    opts: NormalizationOptions = NormalizationOptions(),
    stage2: bool = True,
    params: Lz77Params = Lz77Params(),
) -> EncodeStats:
    """Read raw sequence bytes from ``src`` and write one container to ``dst``.

    Without stage 2 the payload is streamed; the header is patched in place
    afterwards when ``dst`` is seekable and buffered otherwise.
    """
    if stage2:
        buf = io.BytesIO()
        norm, enc = _precode_stream(src, opts, buf.write)
        precoded = buf.getvalue()
        tokens = lz77_compress(precoded, params)
        payload = container.pack_stage2(tokens)
        header = container.make_header(payload, enc.base_count, _flags(norm, True))
        dst.write(container.write_container(header, payload))
        matches = sum(1 for t in tokens if isinstance(t, Match))
        return EncodeStats(
            enc.base_count, len(precoded), HEADER_SIZE + len(payload), True,
            len(tokens), len(tokens) - matches, matches,
        )

    seekable = dst.seekable()
    crc = 0
    size = 0
    if seekable:
        start = dst.tell()
        dst.write(b"\0" * HEADER_SIZE)
        out = dst
    else:
        out = io.BytesIO()

    def sink(piece: bytes) -> None:
        nonlocal crc, size
        if piece:
            crc = container.crc32(piece, crc)
            size += len(piece)
            out.write(piece)

    norm, enc = _precode_stream(src, opts, sink)
    header = ContainerHeader(_flags(norm, False), enc.base_count, crc).pack()
    if seekable:
        end = dst.tell()
        dst.seek(start)
        dst.write(header)
        dst.seek(end)
    else:
        dst.write(header)
        dst.write(out.getvalue())
    return EncodeStats(enc.base_count, size, HEADER_SIZE + size, False)


def encode(
    raw: bytes,
    opts: NormalizationOptions = NormalizationOptions(),
    stage2: bool = True,
    params: Lz77Params = Lz77Params(),
) -> bytes:
    out = io.BytesIO()
    encode_stream(io.BytesIO(raw), out, opts, stage2, params)
    return out.getvalue()


class _Wrapper:
    """Writes bases with a line feed after every ``width`` of them (0 = never)."""

    def __init__(self, dst: BinaryIO, width: int):
        self.dst = dst
        self.width = width
        self.column = 0

    def write(self, bases: bytes) -> None:
        if not self.width:
            self.dst.write(bases)
            return
        pos = 0
        while pos < len(bases):
            take = min(self.width - self.column, len(bases) - pos)
            self.dst.write(bases[pos:pos + take])
            pos += take
            self.column += take
            if self.column == self.width:
                self.dst.write(b"\n")
                self.column = 0

    def close(self) -> None:
        if self.width and self.column:
            self.dst.write(b"\n")
            self.column = 0


def precoded_payload(blob: bytes) -> bytes:
    """Return the serialized pre-coded stream held in a container, undoing stage 2 if present."""
    header, payload = container.read_container(blob)
    if header.stage2:
        return lz77_expand(container.unpack_stage2(payload))
    return payload


def _check_count(header: ContainerHeader, dec: PrecodeDecoder) -> None:
    if dec.base_count != header.base_count:
        raise ContainerError(
            f"decoded {dec.base_count} bases but header records {header.base_count}"
        )


def decode_stream(src: BinaryIO, dst: BinaryIO, wrap: int = 0) -> ContainerHeader:
    """Decode one container from ``src`` and write its bases to ``dst``.

    A pre-coded-only payload from a seekable source is checksummed in a first
    pass and decoded in a second, so memory stays bounded and nothing is
    written for a corrupt file.
    """
    out = _Wrapper(dst, wrap)
    dec = PrecodeDecoder()
    if src.seekable():
        start = src.tell()
        header = ContainerHeader.unpack(src.read(HEADER_SIZE))
        if not header.stage2:
            crc = 0
            while chunk := src.read(CHUNK):
                crc = container.crc32(chunk, crc)
            if crc != header.payload_crc:
                raise ChecksumMismatch(f"payload CRC {crc:#010x} != header {header.payload_crc:#010x}")
            src.seek(start + HEADER_SIZE)
            while chunk := src.read(CHUNK):
                for piece in dec.feed(chunk):
                    out.write(piece)
            for piece in dec.finish():
                out.write(piece)
            _check_count(header, dec)
            out.close()
            return header
        src.seek(start)

    header, payload = container.read_container(src.read())
    if header.stage2:
        payload = lz77_expand(container.unpack_stage2(payload))
    for piece in dec.feed(payload, final=True):
        out.write(piece)
    _check_count(header, dec)
    out.close()
    return header


def decode(blob: bytes, wrap: int = 0) -> bytes:
    out = io.BytesIO()
    decode_stream(io.BytesIO(blob), out, wrap)
    return out.getvalue()
