"""Greedy LZ77 over a 32 KiB sliding window with hash-chain match finding.

Every position that has a full 3-byte prefix is inserted into a chain keyed
by a multiplicative hash of that prefix (2**15 heads). At each position the
chain is walked from the most recent candidate backwards, at most
``max_chain`` entries, and the longest match wins; among equal lengths the
first one found (the smallest distance) is kept. The parse is a pure
function of ``(data, max_chain)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Union

from .errors import CorruptTokenStream

WINDOW = 32768
MIN_MATCH = 3
MAX_MATCH = 258
HASH_BITS = 15
_HASH_MULT = 0x9E3779B1


class Literal(NamedTuple):
    byte: int


class Match(NamedTuple):
    length: int
    distance: int


Lz77Token = Union[Literal, Match]


@dataclass(frozen=True)
class Lz77Params:
    """Match-search effort; ``max_chain=None`` walks whole chains."""

    max_chain: int | None = 128

    def __post_init__(self):
        if self.max_chain is not None and self.max_chain < 1:
            raise ValueError("max_chain must be >= 1")


def prefix_hashes(data: bytes) -> list[int]:
    shift = 32 - HASH_BITS
    return [
        (((a << 16) | (b << 8) | c) * _HASH_MULT & 0xFFFFFFFF) >> shift
        for a, b, c in zip(data, data[1:], data[2:])
    ]


def lz77_compress(data: bytes, params: Lz77Params = Lz77Params()) -> list[Lz77Token]:
    n = len(data)
    chain_cap = n + 1 if params.max_chain is None else params.max_chain
    hashes = prefix_hashes(data)
    last_prefix = n - MIN_MATCH  # last position owning a full prefix
    head: dict[int, int] = {}
    prev = [-1] * max(n, 1)
    tokens: list[Lz77Token] = []
    append = tokens.append

    i = 0
    while i < n:
        best_len = 0
        best_dist = 0
        if i <= last_prefix:
            h = hashes[i]
            cand = head.get(h, -1)
            limit = min(MAX_MATCH, n - i)
            budget = chain_cap
            while cand >= 0 and i - cand <= WINDOW and budget:
                budget -= 1
                # a candidate can only win if it also matches at best_len
                if data[cand + best_len] == data[i + best_len]:
                    length = 0
                    while length < limit and data[cand + length] == data[i + length]:
                        length += 1
                    if length > best_len:
                        best_len = length
                        best_dist = i - cand
                        if length == limit:
                            break
                cand = prev[cand]
            prev[i] = head.get(h, -1)
            head[h] = i

        if best_len >= MIN_MATCH:
            append(Match(best_len, best_dist))
            stop = min(i + best_len, last_prefix + 1)
            for j in range(i + 1, stop):
                h = hashes[j]
                prev[j] = head.get(h, -1)
                head[h] = j
            i += best_len
        else:
            append(Literal(data[i]))
            i += 1
    return tokens


def lz77_expand(tokens: Iterable[Lz77Token]) -> bytes:
    out = bytearray()
    for tok in tokens:
        if isinstance(tok, Literal):
            out.append(tok.byte)
            continue
        length, dist = tok
        if not MIN_MATCH <= length <= MAX_MATCH:
            raise CorruptTokenStream(f"match length {length} out of range")
        if not 1 <= dist <= WINDOW or dist > len(out):
            raise CorruptTokenStream(
                f"match distance {dist} invalid with {len(out)} bytes produced"
            )
        start = len(out) - dist
        if dist >= length:
            out += out[start:start + length]
        else:
            # overlapping copy repeats the last `dist` bytes
            period = out[start:]
            out += (period * (length // dist + 1))[:length]
    return bytes(out)
