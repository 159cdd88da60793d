"""Corpus benchmark: bits per base and encode/decode timings.

Manifest format, one entry per line (blank lines and ``#`` comments ignored)::

    name<TAB>path[<TAB>expected_bases[<TAB>sha256]]

Relative paths resolve against the manifest's directory.
"""

from __future__ import annotations

import hashlib
import logging
import statistics
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Sequence

from . import codec
from .errors import EntryUnreadable, LutzError, RoundTripFailure
from .lz77 import Lz77Params
from .precoder import NormalizationOptions, normalize

log = logging.getLogger(__name__)

MIN_REPEAT = 5


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    path: Path
    expected_bases: int | None = None
    expected_sha256: str | None = None

    def __post_init__(self):
        if not self.name:
            raise ValueError("corpus entry needs a name")


@dataclass
class BenchRow:
    name: str
    base_count: int = 0
    precoded_bytes: int = 0
    final_bytes: int = 0
    r_bar: float = 0.0
    encode_ms: float = 0.0
    decode_ms: float = 0.0
    repeat: int = 0
    error: str | None = None

    @property
    def failed(self) -> bool:
        return self.error is not None

    @property
    def final_bits(self) -> int:
        return 8 * self.final_bytes


def bits_per_base(compressed_bytes: int, bases: int) -> float:
    """Compressed size in bits over the number of bases; ``bases == 0`` raises ZeroDivisionError."""
    if bases == 0:
        raise ZeroDivisionError("bits per base is undefined for an empty sequence")
    return 8 * compressed_bytes / bases


def read_manifest(path: str | Path) -> list[CorpusEntry]:
    path = Path(path)
    entries = []
    for lineno, line in enumerate(path.read_text().splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.rstrip("\r\n").split("\t")
        if len(fields) < 2 or len(fields) > 4:
            raise ValueError(f"{path}:{lineno}: expected 2 to 4 tab-separated fields")
        name, file_path = fields[0], Path(fields[1])
        if not file_path.is_absolute():
            file_path = path.parent / file_path
        expected = int(fields[2]) if len(fields) > 2 and fields[2] else None
        digest = fields[3].lower() if len(fields) > 3 and fields[3] else None
        entries.append(CorpusEntry(name, file_path, expected, digest))
    return entries


def _median_ms(fn: Callable[[], object], repeat: int) -> tuple[float, object]:
    samples = []
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        samples.append((time.perf_counter() - start) * 1000.0)
    return statistics.median(samples), result


def bench_entry(
    entry: CorpusEntry,
    stage2: bool = True,
    repeat: int = MIN_REPEAT,
    opts: NormalizationOptions = NormalizationOptions(),
    params: Lz77Params = Lz77Params(),
) -> BenchRow:
    row = BenchRow(entry.name, repeat=repeat)
    try:
        try:
            raw = entry.path.read_bytes()
        except OSError as exc:
            raise EntryUnreadable(f"{entry.path}: {exc.strerror or exc}") from exc
        if entry.expected_sha256 and hashlib.sha256(raw).hexdigest() != entry.expected_sha256:
            raise EntryUnreadable(f"{entry.path}: sha256 does not match manifest")

        bases = normalize(raw, opts)
        row.base_count = len(bases)
        if entry.expected_bases is not None and entry.expected_bases != row.base_count:
            raise LutzError(
                f"expected {entry.expected_bases} bases, measured {row.base_count}"
            )

        row.encode_ms, blob = _median_ms(lambda: codec.encode(raw, opts, stage2, params), repeat)
        row.decode_ms, decoded = _median_ms(lambda: codec.decode(blob), repeat)
        if decoded != bases:
            raise RoundTripFailure("decoded bases differ from the input")

        row.precoded_bytes = len(codec.precoded_payload(blob))
        row.final_bytes = len(blob)
        row.r_bar = bits_per_base(row.final_bytes, row.base_count) if row.base_count else 0.0
    except (LutzError, OSError) as exc:
        row.error = f"{type(exc).__name__}: {exc}"
        log.error("%s failed: %s", entry.name, row.error)
    return row


def run_corpus(
    manifest: Iterable[CorpusEntry],
    stage2: bool = True,
    repeat: int = MIN_REPEAT,
    opts: NormalizationOptions = NormalizationOptions(),
    params: Lz77Params = Lz77Params(),
) -> list[BenchRow]:
    """Benchmark every entry; a failing row records its error and never reports a ratio."""
    if repeat < 1:
        raise ValueError("repeat must be >= 1")
    if repeat < MIN_REPEAT:
        log.warning("timing from %d sample(s); medians need at least %d", repeat, MIN_REPEAT)
    return [bench_entry(e, stage2, repeat, opts, params) for e in manifest]


def average_r_bar(rows: Sequence[BenchRow]) -> float | None:
    ok = [r.r_bar for r in rows if not r.failed and r.base_count]
    return statistics.fmean(ok) if ok else None


COLUMNS = (
    "sequence", "base number", "precoded bytes", "file size (bytes)",
    "file size (bits)", "R (bits/base)", "encode ms", "decode ms", "status",
)


def _cells(row: BenchRow) -> list[str]:
    if row.failed:
        return [row.name, str(row.base_count), "-", "-", "-", "-", "-", "-", f"FAILED ({row.error})"]
    return [
        row.name,
        str(row.base_count),
        str(row.precoded_bytes),
        str(row.final_bytes),
        str(row.final_bits),
        f"{row.r_bar:.4f}",
        f"{row.encode_ms:.3f}",
        f"{row.decode_ms:.3f}",
        "ok",
    ]


def format_report(rows: Sequence[BenchRow], style: str = "tsv") -> str:
    """Render rows in input order; with two or more rows an average row follows."""
    table = [list(COLUMNS)] + [_cells(r) for r in rows]
    avg = average_r_bar(rows)
    if avg is not None and len(rows) > 1:
        ok = [r for r in rows if not r.failed]
        table.append([
            "Average", "--", "--", "--", "--", f"{avg:.4f}",
            f"{statistics.fmean(r.encode_ms for r in ok):.3f}",
            f"{statistics.fmean(r.decode_ms for r in ok):.3f}",
            f"{len(ok)}/{len(rows)} ok",
        ])
    if style == "tsv":
        return "".join("\t".join(line) + "\n" for line in table)
    if style != "text":
        raise ValueError(f"unknown report style {style!r}")
    widths = [max(len(line[k]) for line in table) for k in range(len(COLUMNS))]
    out = []
    for line in table:
        cells = [line[0].ljust(widths[0])]
        cells += [c.rjust(w) for c, w in zip(line[1:-1], widths[1:-1])]
        cells.append(line[-1])
        out.append("  ".join(cells).rstrip() + "\n")
    return "".join(out)
