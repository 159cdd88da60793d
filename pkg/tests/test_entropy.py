import itertools
import random
from collections import Counter

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lutz import entropy
from lutz.entropy import BitStream, build_code, huff_decode, huff_encode
from lutz.errors import EmptyAlphabet, TruncatedStream, UncodableSymbol
from lutz.precoder import precode_bytes


def brute_force_cost(freqs, max_length=None):
    """Minimum sum(f*len) over every prefix-free length assignment (Kraft <= 1)."""
    support = [f for f in freqs if f > 0]
    k = len(support)
    if k == 1:
        return support[0]
    top = k - 1 if max_length is None else min(k - 1, max_length)
    best = None
    for lengths in itertools.product(range(1, top + 1), repeat=k):
        if sum(2.0 ** -l for l in lengths) <= 1:
            cost = sum(f * l for f, l in zip(support, lengths))
            best = cost if best is None else min(best, cost)
    return best


def cost(freqs, lengths):
    return sum(f * l for f, l in zip(freqs, lengths))


def with_alphabet(pairs):
    freqs = [0] * 256
    for sym, f in pairs.items():
        freqs[ord(sym)] = f
    return freqs


def test_build_code_examples():
    lengths = build_code(with_alphabet({"a": 3, "b": 1, "c": 1}))
    assert (lengths[ord("a")], lengths[ord("b")], lengths[ord("c")]) == (1, 2, 2)
    assert sum(lengths) == 5
    single = build_code(with_alphabet({"x": 7}))
    assert single[ord("x")] == 1 and sum(single) == 1
    uniform = build_code([5] * 64 + [0] * 192)
    assert uniform[:64] == (6,) * 64 and not any(uniform[64:])


def test_build_code_examples_match_brute_force():
    assert brute_force_cost([3, 1, 1]) == cost([3, 1, 1], build_code([3, 1, 1]))


def test_empty_alphabet():
    with pytest.raises(EmptyAlphabet):
        build_code([0] * 256)


@given(st.lists(st.integers(0, 50), min_size=2, max_size=6).filter(any))
def test_optimal_against_brute_force(freqs):
    lengths = build_code(freqs)
    assert cost(freqs, lengths) == brute_force_cost(freqs)


@given(st.lists(st.integers(0, 10_000), min_size=1, max_size=256).filter(any))
def test_kraft(freqs):
    lengths = build_code(freqs)
    assert all((l == 0) == (f == 0) for f, l in zip(freqs, lengths))
    assert max(lengths) <= entropy.MAX_CODE_LENGTH
    present = sum(1 for f in freqs if f)
    if present >= 2:
        assert entropy.kraft_sum(lengths) == 1.0
    else:
        assert entropy.kraft_sum(lengths) == 0.5


def test_length_cap_with_fibonacci_weights():
    fib = [1, 1]
    while len(fib) < 30:
        fib.append(fib[-1] + fib[-2])
    lengths = build_code(fib)
    assert max(lengths) == 15
    assert entropy.kraft_sum(lengths) == 1.0
    assert entropy._huffman_lengths(fib)[0] > 15


@pytest.mark.parametrize("limit", [3, 4])
def test_package_merge_matches_limited_brute_force(limit):
    rnd = random.Random(limit)
    for _ in range(60):
        freqs = [rnd.choice([1, 1, 2, 3, 5, 8, 40, 200]) for _ in range(rnd.randint(2, 6))]
        if len(freqs) > 2 ** limit:
            continue
        lengths = entropy._package_merge(freqs, limit)
        assert max(lengths) <= limit
        assert entropy.kraft_sum(lengths) <= 1
        assert cost(freqs, lengths) == brute_force_cost(freqs, max_length=limit)


def test_canonical_determinism():
    freqs = [4, 4, 4, 4, 1, 1, 9, 0, 2]
    assert build_code(freqs) == build_code(list(freqs))
    codes = entropy.canonical_codes(build_code(freqs))
    ordered = [codes[s] for s in sorted(codes, key=lambda s: (codes[s][1], s))]
    assert ordered[0][0] == 0
    for (c1, l1), (c2, l2) in zip(ordered, ordered[1:]):
        assert c2 == (c1 + 1) << (l2 - l1)


def test_huff_encode_examples():
    lengths = build_code(with_alphabet({"a": 3, "b": 1, "c": 1}))
    bits = huff_encode(b"aab", lengths)
    assert bits.bit_length == 4
    assert huff_decode(bits, lengths, 3) == b"aab"
    assert huff_encode(b"", lengths) == BitStream(b"", 0)
    no_c = build_code(with_alphabet({"a": 1, "b": 1}))
    with pytest.raises(UncodableSymbol):
        huff_encode(b"abc", no_c)


def test_huff_decode_examples():
    lengths = build_code(with_alphabet({"a": 3, "b": 1, "c": 1}))
    assert huff_decode(BitStream(b"", 0), lengths, 0) == b""
    with pytest.raises(TruncatedStream):
        huff_decode(huff_encode(b"aab", lengths), lengths, 5)


def test_bitstream_is_msb_first_and_zero_padded():
    lengths = build_code(with_alphabet({"a": 3, "b": 1, "c": 1}))
    # a=0, b=10, c=11
    assert huff_encode(b"abc", lengths) == BitStream(bytes([0b01011000]), 5)


@given(st.binary(min_size=1, max_size=500))
def test_round_trip(data):
    counts = Counter(data)
    freqs = [counts.get(s, 0) for s in range(256)]
    lengths = build_code(freqs)
    bits = huff_encode(data, lengths)
    assert bits.bit_length == cost(freqs, lengths)
    assert huff_decode(bits, lengths, len(data)) == data


def test_nibble_packing_round_trip():
    lengths = tuple((s * 7) % 16 for s in range(256))
    packed = entropy.pack_code_lengths(lengths)
    assert len(packed) == 128
    assert packed[0] == (lengths[0] << 4) | lengths[1]
    assert entropy.unpack_code_lengths(packed) == lengths


def test_precoded_dna_literal_cost():
    rnd = random.Random(2)
    pre = precode_bytes(bytes(rnd.choice(b"ACGT") for _ in range(300_000)))
    counts = Counter(pre)
    freqs = [counts.get(s, 0) for s in range(256)]
    bits = cost(freqs, build_code(freqs))
    assert bits / len(pre) <= 6.2
