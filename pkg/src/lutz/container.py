"""Version 1 on-disk container.

All integers are little-endian. Layout::

    header (18 bytes)
        magic        4s  b"LUTZ"
        version      u8  1
        flags        u8  bit0 stage 2 applied, bit1 FASTA headers stripped,
                         bit2 unknown bytes were mapped to N
        base_count   u64 bases in the normalized input, N included
        payload_crc  u32 CRC-32 (zlib/ISO-HDLC) of the payload
    payload
        flags bit0 == 0: the serialized pre-coded ASCII stream
        flags bit0 == 1: stage-2 sections, see :func:`pack_stage2`
"""

from __future__ import annotations

import struct
import zlib
from dataclasses import dataclass

from . import entropy
from .errors import (
    BadMagic,
    ChecksumMismatch,
    ContainerError,
    CorruptTokenStream,
    TruncatedContainer,
    UnsupportedVersion,
)
from .lz77 import MAX_MATCH, MIN_MATCH, WINDOW, Literal, Lz77Token, Match

MAGIC = b"LUTZ"
VERSION = 1

FLAG_STAGE2 = 0x01
FLAG_FASTA_STRIPPED = 0x02
FLAG_UNKNOWN_AS_N = 0x04
_DEFINED_FLAGS = FLAG_STAGE2 | FLAG_FASTA_STRIPPED | FLAG_UNKNOWN_AS_N

_HEADER = struct.Struct("<4sBBQI")
HEADER_SIZE = _HEADER.size
_U32 = struct.Struct("<I")
_MATCH = struct.Struct("<HB")


def crc32(data: bytes, value: int = 0) -> int:
    """CRC-32 with the reflected 0xEDB88320 polynomial; pass ``value`` to continue a running CRC."""
    return zlib.crc32(data, value) & 0xFFFFFFFF


@dataclass(frozen=True)
class ContainerHeader:
    flags: int
    base_count: int
    payload_crc: int
    version: int = VERSION

    @property
    def stage2(self) -> bool:
        return bool(self.flags & FLAG_STAGE2)

    def pack(self) -> bytes:
        if self.flags & ~_DEFINED_FLAGS:
            raise ValueError(f"undefined flag bits set: {self.flags:#04x}")
        return _HEADER.pack(MAGIC, self.version, self.flags, self.base_count, self.payload_crc)

    @classmethod
    def unpack(cls, raw: bytes) -> ContainerHeader:
        if len(raw) < HEADER_SIZE:
            raise TruncatedContainer(f"header needs {HEADER_SIZE} bytes, got {len(raw)}")
        magic, version, flags, base_count, crc = _HEADER.unpack_from(raw)
        if magic != MAGIC:
            raise BadMagic(f"bad magic {magic!r}")
        if version != VERSION:
            raise UnsupportedVersion(f"unsupported container version {version}")
        if flags & ~_DEFINED_FLAGS:
            raise ContainerError(f"undefined flag bits set: {flags:#04x}")
        return cls(flags=flags, base_count=base_count, payload_crc=crc, version=version)


def make_header(payload: bytes, base_count: int, flags: int = 0) -> ContainerHeader:
    return ContainerHeader(flags=flags, base_count=base_count, payload_crc=crc32(payload))


def write_container(header: ContainerHeader, payload: bytes) -> bytes:
    if header.payload_crc != crc32(payload):
        raise ValueError("header checksum does not match payload")
    return header.pack() + payload


def read_container(blob: bytes) -> tuple[ContainerHeader, bytes]:
    header = ContainerHeader.unpack(blob)
    payload = blob[HEADER_SIZE:]
    if crc32(payload) != header.payload_crc:
        raise ChecksumMismatch(
            f"payload CRC {crc32(payload):#010x} != header {header.payload_crc:#010x}"
        )
    return header, payload


@dataclass(frozen=True)
class Stage2Sections:
    """Decoded view of a stage-2 payload."""

    token_count: int
    is_match: list[bool]
    literal_count: int
    code_lengths: entropy.CodeLengths
    literal_bits: entropy.BitStream
    matches: list[Match]

    @property
    def match_count(self) -> int:
        return len(self.matches)


def pack_stage2(tokens: list[Lz77Token]) -> bytes:
    """Serialize LZ77 tokens, Huffman-coding the literal bytes.

    Sections in order: token count (u32); one flag bit per token, LSB-first,
    1 for a match; literal count (u32); 256 code lengths as nibbles; literal
    bit length (u32) and bits; then 3 bytes per match, ``distance - 1`` as
    u16 and ``length - 3`` as u8.
    """
    flag_bytes = bytearray((len(tokens) + 7) // 8)
    literals = bytearray()
    records = []
    for k, tok in enumerate(tokens):
        if isinstance(tok, Match):
            flag_bytes[k >> 3] |= 1 << (k & 7)
            records.append(_MATCH.pack(tok.distance - 1, tok.length - MIN_MATCH))
        else:
            literals.append(tok.byte)

    if literals:
        freqs = [0] * entropy.ALPHABET
        for b in literals:
            freqs[b] += 1
        lengths = entropy.build_code(freqs)
        bits = entropy.huff_encode(bytes(literals), lengths)
    else:
        lengths = (0,) * entropy.ALPHABET
        bits = entropy.BitStream(b"", 0)

    return b"".join([
        _U32.pack(len(tokens)),
        bytes(flag_bytes),
        _U32.pack(len(literals)),
        entropy.pack_code_lengths(lengths),
        _U32.pack(bits.bit_length),
        bits.data,
        *records,
    ])


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int, what: str) -> bytes:
        end = self.pos + n
        if end > len(self.data):
            raise TruncatedContainer(f"stage-2 payload truncated in {what}")
        chunk = self.data[self.pos:end]
        self.pos = end
        return chunk

    def u32(self, what: str) -> int:
        return _U32.unpack(self.take(4, what))[0]


def parse_stage2(payload: bytes) -> Stage2Sections:
    r = _Reader(payload)
    token_count = r.u32("token count")
    flag_bytes = r.take((token_count + 7) // 8, "flag bits")
    is_match = [bool(flag_bytes[k >> 3] >> (k & 7) & 1) for k in range(token_count)]
    if token_count % 8 and flag_bytes[-1] >> (token_count % 8):
        raise ContainerError("nonzero padding in token flag bits")
    literal_count = r.u32("literal count")
    match_count = token_count - literal_count
    if match_count < 0 or match_count != sum(is_match):
        raise ContainerError("literal count disagrees with token flags")
    lengths = entropy.unpack_code_lengths(r.take(entropy.ALPHABET // 2, "code lengths"))
    bit_length = r.u32("literal bit length")
    bits = entropy.BitStream(r.take((bit_length + 7) // 8, "literal bits"), bit_length)
    matches = []
    for _ in range(match_count):
        dist, extra = _MATCH.unpack(r.take(_MATCH.size, "match records"))
        matches.append(Match(extra + MIN_MATCH, dist + 1))
    if r.pos != len(payload):
        raise ContainerError(f"{len(payload) - r.pos} trailing bytes after stage-2 payload")
    return Stage2Sections(token_count, is_match, literal_count, lengths, bits, matches)


def unpack_stage2(payload: bytes) -> list[Lz77Token]:
    sec = parse_stage2(payload)
    literals = entropy.huff_decode(sec.literal_bits, sec.code_lengths, sec.literal_count)
    lit_iter = iter(literals)
    match_iter = iter(sec.matches)
    tokens: list[Lz77Token] = []
    for flag in sec.is_match:
        if flag:
            m = next(match_iter)
            if m.length > MAX_MATCH or m.distance > WINDOW:
                raise CorruptTokenStream(f"match {m} outside format limits")
            tokens.append(m)
        else:
            tokens.append(Literal(next(lit_iter)))
    return tokens
