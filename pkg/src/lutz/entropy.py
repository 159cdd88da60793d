"""Order-0 canonical Huffman coding with a 15-bit length cap.

Codewords are assigned canonically in (length, symbol) order and written
most-significant-bit first. Huffman merging breaks weight ties by taking
leaves before internal nodes and lower symbols first, so lengths are a
pure function of the frequency vector. If the plain Huffman tree is deeper
than the cap, lengths are recomputed with package-merge.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Sequence

from .errors import EmptyAlphabet, InvalidCodeword, TruncatedStream, UncodableSymbol

MAX_CODE_LENGTH = 15
ALPHABET = 256

CodeLengths = tuple[int, ...]


@dataclass(frozen=True)
class BitStream:
    data: bytes
    bit_length: int

    def __post_init__(self):
        if not 0 <= self.bit_length <= 8 * len(self.data):
            raise ValueError("bit_length does not fit in data")


def _huffman_lengths(freqs: Sequence[int]) -> list[int]:
    lengths = [0] * len(freqs)
    # (weight, tiebreak, symbols under this node)
    heap = [(f, s, [s]) for s, f in enumerate(freqs) if f > 0]
    heapq.heapify(heap)
    order = len(freqs)
    while len(heap) > 1:
        w1, _, syms1 = heapq.heappop(heap)
        w2, _, syms2 = heapq.heappop(heap)
        for s in syms1:
            lengths[s] += 1
        for s in syms2:
            lengths[s] += 1
        heapq.heappush(heap, (w1 + w2, order, syms1 + syms2))
        order += 1
    return lengths


def _package_merge(freqs: Sequence[int], limit: int) -> list[int]:
    leaves = sorted((f, s) for s, f in enumerate(freqs) if f > 0)
    base = [(f, (s,)) for f, s in leaves]
    current = base
    for _ in range(limit - 1):
        packages = [
            (current[k][0] + current[k + 1][0], current[k][1] + current[k + 1][1])
            for k in range(0, len(current) - 1, 2)
        ]
        current = sorted(base + packages, key=lambda item: item[0])
    lengths = [0] * len(freqs)
    for _, syms in current[: 2 * len(leaves) - 2]:
        for s in syms:
            lengths[s] += 1
    return lengths


def build_code(freqs: Sequence[int], max_length: int = MAX_CODE_LENGTH) -> CodeLengths:
    """Optimal length-limited prefix code lengths for ``freqs``.

    Symbols with zero frequency get length 0; a lone symbol gets length 1.
    """
    present = sum(1 for f in freqs if f > 0)
    if present == 0:
        raise EmptyAlphabet("no symbol has a nonzero frequency")
    if present > 1 << max_length:
        raise ValueError(f"{present} symbols cannot fit in {max_length}-bit codes")
    if present == 1:
        return tuple(1 if f > 0 else 0 for f in freqs)
    lengths = _huffman_lengths(freqs)
    if max(lengths) > max_length:
        lengths = _package_merge(freqs, max_length)
    return tuple(lengths)


def canonical_codes(lengths: Sequence[int]) -> dict[int, tuple[int, int]]:
    """Map symbol -> (codeword, length) for the canonical code of ``lengths``."""
    codes = {}
    code = 0
    prev_len = 0
    for length, sym in sorted((l, s) for s, l in enumerate(lengths) if l > 0):
        code <<= length - prev_len
        codes[sym] = (code, length)
        code += 1
        prev_len = length
    return codes


def huff_encode(data: bytes, lengths: Sequence[int]) -> BitStream:
    words: list[str | None] = [None] * len(lengths)
    for sym, (code, length) in canonical_codes(lengths).items():
        words[sym] = format(code, f"0{length}b")
    try:
        bits = "".join(map(words.__getitem__, data))
    except (TypeError, IndexError):
        for b in data:
            if b >= len(words) or words[b] is None:
                raise UncodableSymbol(b) from None
        raise
    nbits = len(bits)
    if not nbits:
        return BitStream(b"", 0)
    nbytes = (nbits + 7) // 8
    value = int(bits, 2) << (8 * nbytes - nbits)
    return BitStream(value.to_bytes(nbytes, "big"), nbits)


def huff_decode(bits: BitStream, lengths: Sequence[int], count: int) -> bytes:
    if count == 0:
        return b""
    codes = canonical_codes(lengths)
    if not codes:
        raise InvalidCodeword("code has no symbols")
    width = max(length for _, length in codes.values())
    if sum(1 << (width - length) for _, length in codes.values()) > 1 << width:
        raise InvalidCodeword("code lengths violate the Kraft inequality")
    # direct lookup on the next `width` bits
    table: list[tuple[int, int] | None] = [None] * (1 << width)
    for sym, (code, length) in codes.items():
        lo = code << (width - length)
        entry = (sym, length)
        for k in range(lo, lo + (1 << (width - length))):
            table[k] = entry

    total = bits.bit_length
    if bits.data:
        stream = format(int.from_bytes(bits.data, "big"), f"0{8 * len(bits.data)}b")
    else:
        stream = ""
    stream = stream[:total] + "0" * width

    out = bytearray(count)
    pos = 0
    for k in range(count):
        entry = table[int(stream[pos:pos + width], 2)]
        if entry is None:
            if pos >= total:
                raise TruncatedStream(f"stream ended after {k} of {count} symbols")
            raise InvalidCodeword(f"no codeword at bit {pos}")
        pos += entry[1]
        if pos > total:
            raise TruncatedStream(f"stream ended after {k} of {count} symbols")
        out[k] = entry[0]
    return bytes(out)


def pack_code_lengths(lengths: Sequence[int]) -> bytes:
    """Two lengths per byte, even symbol in the high nibble (128 bytes for 256 symbols)."""
    if len(lengths) != ALPHABET:
        raise ValueError(f"expected {ALPHABET} lengths")
    if any(not 0 <= l <= MAX_CODE_LENGTH for l in lengths):
        raise ValueError("code length outside 0..15")
    return bytes((lengths[k] << 4) | lengths[k + 1] for k in range(0, ALPHABET, 2))


def unpack_code_lengths(packed: bytes) -> CodeLengths:
    if len(packed) != ALPHABET // 2:
        raise ValueError(f"expected {ALPHABET // 2} bytes of packed lengths")
    out = []
    for b in packed:
        out.append(b >> 4)
        out.append(b & 0xF)
    return tuple(out)


def kraft_sum(lengths: Sequence[int]) -> float:
    return sum(2.0 ** -l for l in lengths if l > 0)
