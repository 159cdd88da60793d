"""Fixed 64-entry look-up table between base triplets and single ASCII bytes.

Triplets are indexed as ``16*idx(b0) + 4*idx(b1) + idx(b2)`` with the base
order A, T, C, G, which is also the row order of the published table.
Lookups in both directions are direct array indexing.
"""

from __future__ import annotations

from typing import Iterator

from .errors import InvalidCodeChar

BASE_ORDER = b"ATCG"

_BASE_INDEX = {b: i for i, b in enumerate(BASE_ORDER)}

# Code byte for triplet index 0..63.
CODES = bytes([
    33, 98, 34, 100,    # AAA AAT AAC AAG
    101, 102, 35, 104,  # ATA ATT ATC ATG
    105, 106, 107, 108, # ACA ACT ACC ACG
    109, 110, 111, 112, # AGA AGT AGC AGG
    113, 114, 115, 36,  # TAA TAT TAC TAG
    117, 118, 119, 120, # TTA TTT TTC TTG
    121, 122, 37, 66,   # TCA TCT TCC TCG
    38, 68, 69, 70,     # TGA TGT TGC TGG
    39, 72, 73, 74,     # CAA CAT CAC CAG
    75, 76, 77, 78,     # CTA CTT CTC CTG
    79, 80, 81, 82,     # CCA CCT CCC CCG
    83, 40, 85, 86,     # CGA CGT CGC CGG
    87, 88, 89, 90,     # GAA GAT GAC GAG
    48, 49, 50, 51,     # GTA GTT GTC GTG
    52, 53, 54, 55,     # GCA GCT GCC GCG
    56, 57, 43, 45,     # GGA GGT GGC GGG
])

NOT_A_CODE = 0xFF

# Triplet index for every byte, NOT_A_CODE for the 192 non-members.
INDEX_OF = bytearray([NOT_A_CODE]) * 256
for _i, _c in enumerate(CODES):
    INDEX_OF[_c] = _i
INDEX_OF = bytes(INDEX_OF)

RESERVED = frozenset(b"/ACGT")


def triplet_index(triplet: bytes) -> int:
    b0, b1, b2 = triplet
    return 16 * _BASE_INDEX[b0] + 4 * _BASE_INDEX[b1] + _BASE_INDEX[b2]


def triplet_of_index(index: int) -> bytes:
    return bytes((BASE_ORDER[index >> 4], BASE_ORDER[(index >> 2) & 3], BASE_ORDER[index & 3]))


def encode_triplet(triplet: bytes) -> int:
    """Return the code byte for three uppercase non-N bases, e.g. ``b"ACT"`` -> ``ord("j")``."""
    if len(triplet) != 3:
        raise ValueError(f"expected 3 bases, got {len(triplet)}")
    try:
        return CODES[triplet_index(triplet)]
    except KeyError:
        raise ValueError(f"triplet {triplet!r} contains a base outside A/C/G/T") from None


def decode_code(code: int) -> bytes:
    """Inverse of :func:`encode_triplet`; raises :class:`InvalidCodeChar` for non-members."""
    index = INDEX_OF[code]
    if index == NOT_A_CODE:
        raise InvalidCodeChar(code)
    return triplet_of_index(index)


def is_code_char(byte: int) -> bool:
    return INDEX_OF[byte] != NOT_A_CODE


def table_rows() -> Iterator[tuple[str, int, str]]:
    """Yield ``(char, ascii, bases)`` for all 64 entries in table order."""
    for index, code in enumerate(CODES):
        yield chr(code), code, triplet_of_index(index).decode("ascii")


# Bulk maps used by the pre-coder fast paths.
TRIPLET_TO_CODE = {triplet_of_index(i): bytes([c]) for i, c in enumerate(CODES)}

EXPANSION: list[bytes | None] = [None] * 256
for _i, _c in enumerate(CODES):
    EXPANSION[_c] = triplet_of_index(_i)
for _b in b"ACGT":
    EXPANSION[_b] = bytes([_b])
