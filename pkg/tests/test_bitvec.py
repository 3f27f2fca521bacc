import numpy as np
import pytest
from hypothesis import given, strategies as st

from trieset.bitvec import (BitVec, PairZeroDir, RankDir, RankVariant, SelectDir,
                            rank1, rank_pairs00, select1)

VARIANTS = list(RankVariant)
NOMINAL_OVERHEAD = {RankVariant.DENSE: 0.25, RankVariant.SPARSE: 0.0625,
                    RankVariant.INTERLEAVED: 0.125}


def test_append_and_access():
    bv = BitVec()
    for i, b in enumerate([1, 0, 1, 1, 0]):
        bv.append(b)
        assert len(bv) == i + 1
        assert bv.access(i) == b
    assert bv.to_string() == "10110"
    with pytest.raises(IndexError):
        bv.access(5)
    with pytest.raises(IndexError):
        bv.access(-1)


def test_from_string_rejects_junk():
    with pytest.raises(ValueError):
        BitVec.from_string("10x1")


@pytest.mark.parametrize("variant", VARIANTS)
def test_rank_small_cases(variant):
    bv = BitVec.from_string("1101")
    assert rank1(bv, RankDir(bv, variant), 2) == 2
    z = BitVec.from_string("0000")
    assert rank1(z, RankDir(z, variant), 3) == 0


@pytest.mark.parametrize("variant", VARIANTS)
def test_rank_matches_scan_on_long_vector(variant, rng):
    bits = (rng.random(100_003) < 0.37).astype(np.uint8)
    bv = BitVec.from_bits(bits)
    d = RankDir(bv, variant)
    expect = np.cumsum(bits)
    got = np.fromiter((d.rank1(i) for i in range(len(bits))), dtype=np.int64, count=len(bits))
    assert np.array_equal(got, expect)
    assert d.rank_before(len(bits)) == int(expect[-1])
    with pytest.raises(IndexError):
        d.rank1(len(bits))


@pytest.mark.parametrize("variant", VARIANTS)
def test_directory_overhead_within_one_point(variant, rng):
    bv = BitVec.from_bits(rng.integers(0, 2, 200_000))
    assert abs(RankDir(bv, variant).overhead - NOMINAL_OVERHEAD[variant]) <= 0.01


def test_rank_rejects_foreign_directory():
    a, b = BitVec.from_string("1010"), BitVec.from_string("1111")
    with pytest.raises(ValueError):
        rank1(a, RankDir(b), 1)


def test_pair_zero_rank_examples():
    bv = BitVec.from_string("11010010")
    d = PairZeroDir(bv)
    assert rank_pairs00(bv, d, 6) == 1
    assert rank_pairs00(bv, d, 4) == 0
    ones = BitVec.from_string("1111")
    assert rank_pairs00(ones, PairZeroDir(ones), 4) == 0
    with pytest.raises(ValueError):
        d.rank_before(3)
    with pytest.raises(ValueError):
        PairZeroDir(BitVec.from_string("101"))


def test_pair_zero_rank_matches_scan(rng):
    bits = (rng.random(2 * 40_000) < 0.3).astype(np.uint8)
    bv = BitVec.from_bits(bits)
    d = PairZeroDir(bv)
    pairs = bits.reshape(-1, 2)
    zero = np.concatenate([[0], np.cumsum((pairs == 0).all(axis=1))])
    for p in range(0, len(pairs) + 1, 7):
        assert d.rank_before(2 * p) == zero[p]
    assert d.rank_before(len(bits)) == zero[-1]


def test_select_examples():
    bv = BitVec.from_string("0101")
    assert select1(bv, 2) == 3
    assert select1(BitVec.from_string("1000"), 1) == 0
    with pytest.raises(IndexError):
        select1(bv, 3)
    with pytest.raises(IndexError):
        select1(bv, 0)


@pytest.mark.parametrize("density", [0.001, 0.5, 0.97])
def test_select_matches_scan(density, rng):
    bits = (rng.random(60_000) < density).astype(np.uint8)
    bv = BitVec.from_bits(bits)
    d = SelectDir(bv)
    where = np.flatnonzero(bits)
    for j in range(1, len(where) + 1):
        assert d.select1(j) == where[j - 1]


@given(st.lists(st.integers(0, 1), max_size=700))
def test_rank_select_inverse(bits):
    bv = BitVec.from_bits(np.array(bits, dtype=np.uint8))
    assert bv.to_string() == "".join(map(str, bits))
    seldir = SelectDir(bv)
    for variant in VARIANTS:
        d = RankDir(bv, variant)
        running = 0
        for i, b in enumerate(bits):
            running += b
            assert d.rank1(i) == running
            if b:
                assert seldir.select1(running) == i


@given(st.lists(st.integers(0, 1), max_size=400))
def test_wire_round_trip(bits):
    bv = BitVec.from_bits(np.array(bits, dtype=np.uint8))
    data = bv.to_bytes()
    assert BitVec.from_bytes(data) == bv
    assert len(data) == 8 + 8 * ((len(bits) + 63) // 64)


def test_wire_rejects_bad_padding_and_truncation():
    data = bytearray(BitVec.from_string("101").to_bytes())
    with pytest.raises(ValueError):
        BitVec.from_bytes(bytes(data[:-1]))
    data[-1] |= 0x80
    with pytest.raises(ValueError):
        BitVec.from_bytes(bytes(data))
