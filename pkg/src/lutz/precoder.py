"""First phase: base normalization, triplet pre-coding and its inverse.

The serialized pre-coded stream is printable ASCII made of three kinds of
units:

* one look-up table byte per triplet of consecutive non-N bases,
* an uppercase ``A``/``C``/``G``/``T`` byte for each of the (at most two)
  bases left over before an N-run or the end of input,
* ``/<count>/`` for a maximal run of N, count in decimal without leading zeros.

Triplet framing restarts after every N-run. Encoder and decoder both keep
O(1) state between chunks, so arbitrarily large inputs can be streamed.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Union

from . import lut
from .errors import CorruptPrecoded, MalformedNRun, NRunOverflow, UnknownSymbol

MAX_RUN = 2**64 - 1
# 2**64 - 1 has 20 decimal digits.
_MAX_COUNT_DIGITS = 20
_N_CHUNK = 1 << 20


class UnknownPolicy(enum.Enum):
    REJECT = "reject"
    TREAT_AS_N = "as-n"


@dataclass(frozen=True)
class NormalizationOptions:
    fasta_mode: bool = False
    unknown_policy: UnknownPolicy = UnknownPolicy.REJECT


class Coded(NamedTuple):
    code: int


class Raw(NamedTuple):
    base: int


class NRun(NamedTuple):
    count: int


PrecodedToken = Union[Coded, Raw, NRun]


_FOLD = bytes.maketrans(b"acgtn", b"ACGTN")
_UNKNOWN = re.compile(rb"[^ACGTNacgtn\r\n]")
_N_RUNS = re.compile(rb"(N+)")


class Normalizer:
    """Chunk-wise mapping of raw sequence bytes onto the alphabet ``ACGTN``.

    Case is folded, CR and LF are dropped, and with ``fasta_mode`` every line
    that starts with ``>`` is skipped. Any other byte is rejected or replaced
    by ``N`` according to ``unknown_policy``.
    """

    def __init__(self, opts: NormalizationOptions = NormalizationOptions()):
        self.opts = opts
        self.offset = 0
        self.headers_skipped = 0
        self.substitutions = 0
        self._line_start = True
        self._in_header = False

    def feed(self, chunk: bytes) -> bytes:
        if self.opts.fasta_mode:
            out = b"".join(self._clean(seg, off) for seg, off in self._sequence_lines(chunk))
        else:
            out = self._clean(chunk, self.offset)
        self.offset += len(chunk)
        return out

    def _sequence_lines(self, chunk: bytes) -> Iterator[tuple[bytes, int]]:
        pos, end = 0, len(chunk)
        while pos < end:
            if self._in_header:
                nl = chunk.find(b"\n", pos)
                if nl < 0:
                    return
                pos = nl + 1
                self._in_header = False
                self._line_start = True
                continue
            if self._line_start and chunk[pos] == 0x3E:  # '>'
                self._in_header = True
                self.headers_skipped += 1
                continue
            nl = chunk.find(b"\n", pos)
            stop = end if nl < 0 else nl + 1
            yield chunk[pos:stop], self.offset + pos
            self._line_start = nl >= 0
            pos = stop

    def _clean(self, segment: bytes, offset: int) -> bytes:
        bad = _UNKNOWN.search(segment)
        if bad is not None:
            if self.opts.unknown_policy is UnknownPolicy.REJECT:
                raise UnknownSymbol(segment[bad.start()], offset + bad.start())
            segment, n = _UNKNOWN.subn(b"N", segment)
            self.substitutions += n
        return segment.translate(_FOLD, b"\r\n")


def normalize(raw: bytes, opts: NormalizationOptions = NormalizationOptions()) -> bytes:
    """Return the base stream of ``raw`` as uppercase ``ACGTN`` bytes."""
    return Normalizer(opts).feed(raw)


def _code_triplets(bases: bytes) -> bytes:
    """Code ``bases`` (non-N, length a multiple of 3) through the table."""
    table = lut.TRIPLET_TO_CODE
    return b"".join([table[bases[i:i + 3]] for i in range(0, len(bases), 3)])


def _code_segment(bases: bytes) -> bytes:
    full = len(bases) - len(bases) % 3
    return _code_triplets(bases[:full]) + bases[full:]


def _escape(count: int) -> bytes:
    return b"/%d/" % count


class PrecodeEncoder:
    """Streaming pre-coder from normalized bases to serialized pre-coded bytes.

    Between calls it holds at most two pending non-N bases or the length of
    an N-run that may continue in the next chunk, never both.
    """

    def __init__(self) -> None:
        self.pending = b""
        self.run = 0
        self.base_count = 0

    def feed(self, bases: bytes) -> bytes:
        self.base_count += len(bases)
        out = []
        if self.run:
            rest = bases.lstrip(b"N")
            self.run += len(bases) - len(rest)
            if not rest:
                return b""
            out.append(_escape(self.run))
            self.run = 0
            bases = rest

        parts = _N_RUNS.split(self.pending + bases)
        self.pending = b""
        # parts alternates segment, run, segment, ..., segment
        for k in range(0, len(parts) - 1, 2):
            out.append(_code_segment(parts[k]))
            out.append(_escape(len(parts[k + 1])))
        tail = parts[-1]
        if len(parts) > 1 and not tail:
            # input ended inside a run that may continue
            out.pop()
            self.run = len(parts[-2])
        else:
            full = len(tail) - len(tail) % 3
            out.append(_code_triplets(tail[:full]))
            self.pending = tail[full:]
        return b"".join(out)

    def finish(self) -> bytes:
        out = _escape(self.run) if self.run else self.pending
        self.pending = b""
        self.run = 0
        return out


def precode_bytes(bases: bytes) -> bytes:
    """Pre-code a complete normalized base stream straight to serialized bytes."""
    enc = PrecodeEncoder()
    return enc.feed(bases) + enc.finish()


def tokenize(precoded: bytes) -> Iterator[PrecodedToken]:
    """Split a serialized pre-coded stream back into tokens."""
    dec = PrecodeDecoder()
    for kind, value in dec.units(precoded, final=True):
        yield kind(value)


def precode(bases: bytes) -> list[PrecodedToken]:
    """Pre-code ``bases`` (uppercase ``ACGTN``) into a token list."""
    return list(tokenize(precode_bytes(bases)))


def serialize_precoded(tokens: Iterable[PrecodedToken]) -> bytes:
    out = []
    for tok in tokens:
        if isinstance(tok, NRun):
            if tok.count < 1:
                raise ValueError("N-run count must be positive")
            out.append(_escape(tok.count))
        elif isinstance(tok, Coded):
            if not lut.is_code_char(tok.code):
                raise ValueError(f"{tok.code} is not a code byte")
            out.append(bytes((tok.code,)))
        elif isinstance(tok, Raw):
            if tok.base not in b"ACGT":
                raise ValueError(f"raw token must carry A/C/G/T, got {tok.base}")
            out.append(bytes((tok.base,)))
        else:
            raise TypeError(f"not a pre-coded token: {tok!r}")
    return b"".join(out)


class PrecodeDecoder:
    """Streaming inverse of :class:`PrecodeEncoder`.

    An escape split across chunk boundaries is carried over; its length is
    bounded, so a missing closing ``/`` is reported rather than buffered.
    """

    def __init__(self) -> None:
        self._carry = b""
        self._carry_offset = 0
        self.offset = 0
        self.base_count = 0

    def units(self, chunk: bytes, final: bool = False) -> Iterator[tuple[type, int]]:
        """Yield ``(Coded|Raw|NRun, value)`` pairs; slow path used for tokenizing."""
        for seg, seg_off, run in self._split(chunk, final):
            for i, b in enumerate(seg):
                if lut.is_code_char(b):
                    yield Coded, b
                elif b in b"ACGT":
                    yield Raw, b
                else:
                    raise CorruptPrecoded(seg_off + i, b)
            if run:
                yield NRun, run

    def feed(self, chunk: bytes, final: bool = False) -> Iterator[bytes]:
        expansion = lut.EXPANSION
        for seg, seg_off, run in self._split(chunk, final):
            if seg:
                try:
                    out = b"".join(map(expansion.__getitem__, seg))
                except TypeError:
                    for i, b in enumerate(seg):
                        if expansion[b] is None:
                            raise CorruptPrecoded(seg_off + i, b) from None
                    raise
                self.base_count += len(out)
                yield out
            if run:
                self.base_count += run
                full, rem = divmod(run, _N_CHUNK)
                if full:
                    block = b"N" * _N_CHUNK
                    for _ in range(full):
                        yield block
                if rem:
                    yield b"N" * rem

    def finish(self) -> Iterator[bytes]:
        return self.feed(b"", final=True)

    def _split(self, chunk: bytes, final: bool) -> Iterator[tuple[bytes, int, int]]:
        """Yield ``(plain segment, its offset, following run length or 0)``."""
        if self._carry:
            buf, base = self._carry + chunk, self._carry_offset
        else:
            buf, base = chunk, self.offset
        self.offset += len(chunk)
        self._carry = b""

        parts = buf.split(b"/")
        if len(parts) % 2 == 0:
            # unterminated escape at the end of the buffer
            tail = parts.pop()
            tail_off = base + len(buf) - len(tail) - 1
            if final:
                raise MalformedNRun(tail_off)
            if tail and (not tail.isdigit() or tail[0] == 0x30):
                raise MalformedNRun(tail_off)
            if len(tail) > _MAX_COUNT_DIGITS:
                raise NRunOverflow(tail_off)
            self._carry = b"/" + tail
            self._carry_offset = tail_off

        pos = base
        for k in range(0, len(parts), 2):
            seg = parts[k]
            run = 0
            if k + 1 < len(parts):
                digits = parts[k + 1]
                esc_off = pos + len(seg)
                if not digits or not digits.isdigit() or digits[0] == 0x30:
                    raise MalformedNRun(esc_off)
                if len(digits) > _MAX_COUNT_DIGITS or int(digits) > MAX_RUN:
                    raise NRunOverflow(esc_off)
                run = int(digits)
                yield seg, pos, run
                pos = esc_off + len(digits) + 2
            else:
                yield seg, pos, run


def predecode(precoded: bytes) -> bytes:
    """Expand a serialized pre-coded stream back into uppercase bases."""
    dec = PrecodeDecoder()
    return b"".join(dec.feed(precoded, final=True))


def base_count(bases: bytes) -> int:
    return len(bases)
