import struct

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from generators import S1, S2, random_set
from trieset.bintrie import (BinaryTrie, CapabilityError, TrieFormatError, build, decode,
                             predecessor, set_rank, set_select, successor)
from trieset.bitvec import RankVariant
from trieset.measures import SortedSet, trie_measure
from trieset.runtrie import RunTrie

FULL = dict(last_level_rank=True, select=True)


def test_running_example_levels():
    t = build(S1, 16)
    assert t.level_strings() == ["11", "1111", "11011110", "010101111110"]
    assert t.payload_bits == 26
    assert decode(t).tolist() == S1


def test_single_path():
    t = build([5], 8)
    assert t.level_strings() == ["01", "10", "01"]
    assert decode(t).tolist() == [5]


def test_rank_select_examples():
    t = build(S1, 16, **FULL)
    assert set_rank(t, 9) == 5
    assert set_rank(t, 0) == 0
    assert set_rank(t, 15) == len(S1)
    assert set_select(t, 3) == 7
    assert set_select(t, 1) == min(S1)
    with pytest.raises(IndexError):
        set_select(t, 0)
    with pytest.raises(IndexError):
        set_select(t, 9)


def test_successor_predecessor_examples():
    t = build(S2, 16)
    assert successor(t, 8) == 12
    assert successor(t, 7) == 7
    assert successor(t, 16 - 1) == 15
    assert predecessor(t, 0) is None
    assert predecessor(t, 11) == 7
    assert successor(build([3], 16), 4) is None


def test_queries_outside_universe_rejected():
    t = build(S1, 16, **FULL)
    for op in (t.rank, t.successor, t.predecessor):
        with pytest.raises(ValueError):
            op(16)
        with pytest.raises(ValueError):
            op(-1)


def test_rank_requires_last_level_directory():
    t = build(S1, 16)
    with pytest.raises(CapabilityError):
        t.rank(5)
    with pytest.raises(CapabilityError):
        t.select(1)
    assert t.with_options(last_level_rank=True).rank(5) == 2


def test_build_rejects_bad_input():
    with pytest.raises(ValueError):
        build([3, 2], 16)
    with pytest.raises(ValueError):
        build([2, 2], 16)
    with pytest.raises(ValueError):
        build([16], 16)
    with pytest.raises(ValueError):
        build([], 16)


def test_structure_matches_pointer_trie(rng):
    for u in [2, 5, 16, 1 << 10, 1 << 15]:
        for _ in range(60):
            xs = random_set(rng, u, max_n=120)
            t = build(xs, u)
            assert t.level_strings() == oracles.PointerTrie(xs, u).levels()
            t.validate()


@pytest.mark.parametrize("variant", list(RankVariant))
def test_primitives_match_sorted_array(variant, rng):
    for u in [2, 16, 1 << 10, 1 << 20]:
        for _ in range(40):
            xs = random_set(rng, u, max_n=300)
            t = build(xs, u, rank=variant, **FULL)
            assert t.n == len(xs)
            assert decode(t).tolist() == xs
            probes = set(rng.integers(0, u, 60).tolist()) | set(xs[:20]) | {0, u - 1}
            probes |= {x + 1 for x in xs[:20] if x + 1 < u} | {x - 1 for x in xs[:20] if x}
            for x in probes:
                assert t.rank(x) == oracles.rank(xs, x)
                assert t.successor(x) == oracles.successor(xs, x)
                assert t.predecessor(x) == oracles.predecessor(xs, x)
                assert (x in t) == (x in xs)
            for j in range(1, len(xs) + 1, max(1, len(xs) // 25)):
                assert t.select(j) == oracles.select(xs, j)
                assert t.rank(t.select(j)) == j


@given(st.integers(1, 12).flatmap(
    lambda ell: st.tuples(st.just(1 << ell), st.sets(st.integers(0, (1 << ell) - 1), min_size=1))))
def test_trie_invariants(case):
    u, elems = case
    xs = sorted(elems)
    t = build(xs, u, **FULL)
    s = SortedSet(xs, u)
    assert t.levels[-1].count_ones() == len(xs)
    assert t.one_bits == trie_measure(s)
    assert t.payload_bits == 2 * (trie_measure(s) - len(xs) + 1)
    for li in range(t.ell - 1):
        # nodes on the next level = ones on this level
        assert len(t.levels[li + 1]) == 2 * t.dirs[li].total
    t.validate()
    for j in range(1, len(xs) + 1):
        assert t.rank(t.select(j)) == j


def test_serialization_round_trip(rng):
    for variant in RankVariant:
        for _ in range(20):
            u = 1 << int(rng.integers(1, 21))
            xs = random_set(rng, u, max_n=400)
            t = build(xs, u, rank=variant, last_level_rank=bool(rng.integers(2)))
            data = t.to_bytes()
            back = BinaryTrie.from_bytes(data)
            assert back == t
            assert back.to_bytes() == data
            assert back.rank_variant == variant
            assert back.last_level_rank == t.last_level_rank
            assert decode(back).tolist() == xs


def test_header_layout():
    t = build(S1, 16, rank=RankVariant.SPARSE)
    data = t.to_bytes()
    magic, version, u, ell, n, tag = struct.unpack_from("<4sHQBQB", data)
    assert (magic, version, u, ell, n, tag & 0x0F) == (b"BTRI", 1, 16, 4, 8, 1)
    # four levels of 4, 8, 16 and 24 bits: one length word and one payload word each
    assert len(data) == 24 + 4 * 16


def test_deserialization_rejects_corruption():
    data = build(S1, 16).to_bytes()
    with pytest.raises(TrieFormatError):
        BinaryTrie.from_bytes(b"XXXX" + data[4:])
    with pytest.raises(TrieFormatError):
        BinaryTrie.from_bytes(data[:-3])
    with pytest.raises(TrieFormatError):
        BinaryTrie.from_bytes(data + b"\0")
    with pytest.raises(TrieFormatError):
        RunTrie.from_bytes(data)
    bad_n = bytearray(data)
    struct.pack_into("<Q", bad_n, 15, 9)
    with pytest.raises(TrieFormatError):
        BinaryTrie.from_bytes(bytes(bad_n))


def test_validate_rejects_zero_code():
    from trieset.bitvec import BitVec
    levels = [BitVec.from_string("11"), BitVec.from_string("0010")]
    with pytest.raises(TrieFormatError):
        BinaryTrie(levels, 4, 1).validate()


def test_large_universe_spot_checks(rng):
    u = 1 << 20
    xs = np.unique(rng.integers(0, u, 20_000)).tolist()
    t = build(xs, u, **FULL)
    assert decode(t).tolist() == xs
    for x in rng.integers(0, u, 500).tolist():
        assert t.rank(x) == oracles.rank(xs, x)
        assert t.successor(x) == oracles.successor(xs, x)
