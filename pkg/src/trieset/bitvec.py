"""Plain bit vectors with rank/select support.

Bits are stored LSB-first in 64-bit words: bit ``i`` lives in word ``i >> 6``
at offset ``i & 63``. Queries run on Python ints (``int.bit_count`` is the
popcount); numpy is only used for bulk packing and for serialization.
"""

import enum
import struct
from bisect import bisect_right

import numpy as np

WORD = 64
_EVEN = 0x5555555555555555


class RankVariant(enum.IntEnum):
    """Layout of a rank directory.

    DENSE        512-bit superblocks: absolute 64-bit count plus seven packed
                 9-bit per-word counts (25% overhead).
    SPARSE       2048-bit superblocks: absolute 64-bit count plus three packed
                 11-bit per-512-bit-block counts (6.25% overhead).
    INTERLEAVED  one 64-bit absolute count stored next to each 512-bit block
                 of payload (12.5% overhead).
    """

    DENSE = 0
    SPARSE = 1
    INTERLEAVED = 2

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        if isinstance(value, str):
            return cls[value.upper()]
        return cls(value)


class BitVec:
    """Append-built bit sequence."""

    __slots__ = ("words", "_len")

    def __init__(self):
        self.words = []
        self._len = 0

    # construction -------------------------------------------------------

    @classmethod
    def from_bits(cls, bits):
        """Pack an iterable or array of 0/1 values."""
        arr = np.asarray(bits, dtype=np.uint8).ravel()
        bv = cls()
        bv._len = int(arr.size)
        if arr.size:
            packed = np.packbits(arr, bitorder="little")
            pad = (-packed.size) % 8
            if pad:
                packed = np.concatenate([packed, np.zeros(pad, dtype=np.uint8)])
            bv.words = packed.view("<u8").tolist()
        return bv

    @classmethod
    def from_string(cls, text):
        """Parse a string such as ``"11 01 00 10"``; whitespace is ignored."""
        bits = [int(c) for c in text if not c.isspace()]
        if any(b not in (0, 1) for b in bits):
            raise ValueError("bit string may only contain 0 and 1")
        return cls.from_bits(bits)

    def append(self, bit):
        i = self._len
        if i & 63 == 0:
            self.words.append(0)
        if bit:
            self.words[i >> 6] |= 1 << (i & 63)
        self._len = i + 1

    def extend(self, bits):
        for b in bits:
            self.append(b)

    def append_pair(self, code):
        """Append a 2-bit node code; bit 0 of ``code`` goes first."""
        self.append(code & 1)
        self.append(code >> 1)

    # access -------------------------------------------------------------

    def __len__(self):
        return self._len

    def __getitem__(self, i):
        return self.access(i)

    def access(self, i):
        if not 0 <= i < self._len:
            raise IndexError(f"bit index {i} out of range [0, {self._len})")
        return (self.words[i >> 6] >> (i & 63)) & 1

    def pair(self, p):
        """Raw 2-bit value of aligned pair ``p`` (bit ``2p`` is the low bit)."""
        i = 2 * p
        return (self.words[i >> 6] >> (i & 63)) & 3

    def count_ones(self):
        return sum(w.bit_count() for w in self.words)

    def to_numpy(self):
        """Bits as a uint8 array of length ``len(self)``."""
        if not self._len:
            return np.zeros(0, dtype=np.uint8)
        raw = np.asarray(self.words, dtype="<u8").view(np.uint8)
        return np.unpackbits(raw, bitorder="little")[: self._len]

    def to_string(self, group=0):
        s = "".join(map(str, self.to_numpy().tolist()))
        if group:
            s = " ".join(s[i:i + group] for i in range(0, len(s), group))
        return s

    def __eq__(self, other):
        if not isinstance(other, BitVec):
            return NotImplemented
        return self._len == other._len and self.words == other.words

    def __repr__(self):
        preview = self.to_string() if self._len <= 64 else f"{self._len} bits"
        return f"BitVec({preview!r})"

    # wire format --------------------------------------------------------

    def to_bytes(self):
        """64-bit little-endian length followed by the payload words."""
        head = struct.pack("<Q", self._len)
        return head + np.asarray(self.words, dtype="<u8").tobytes()

    @classmethod
    def from_buffer(cls, buf, offset=0):
        """Decode one vector from ``buf``; returns ``(bitvec, new_offset)``."""
        (length,) = struct.unpack_from("<Q", buf, offset)
        offset += 8
        nwords = (length + 63) // 64
        end = offset + 8 * nwords
        if end > len(buf):
            raise ValueError("truncated bit vector payload")
        bv = cls()
        bv._len = length
        bv.words = np.frombuffer(buf, dtype="<u8", count=nwords, offset=offset).tolist()
        if nwords and length & 63 and bv.words[-1] >> (length & 63):
            raise ValueError("nonzero padding bits in bit vector payload")
        return bv, end

    @classmethod
    def from_bytes(cls, data):
        bv, end = cls.from_buffer(data)
        if end != len(data):
            raise ValueError("trailing bytes after bit vector")
        return bv

    @property
    def payload_bits(self):
        return self._len


def _popcount_prefix(word, nbits):
    return (word & ((1 << nbits) - 1)).bit_count()


class RankDir:
    """Constant-time rank1 over a frozen :class:`BitVec`.

    ``rank1(i)`` counts ones in ``[0, i]`` (inclusive); ``rank_before(i)``
    counts ones in ``[0, i)`` and accepts ``i == len``.
    """

    __slots__ = ("variant", "_bv", "_len", "_total", "_abs", "_rel", "_data",
                 "_abs_np", "_rel_np", "_data_np")

    def __init__(self, bv, variant=RankVariant.DENSE):
        self.variant = RankVariant.parse(variant)
        self._bv = bv
        self._len = len(bv)
        words = np.asarray(bv.words, dtype=np.uint64)
        counts = _word_popcounts(words)
        self._total = int(counts.sum())
        self._abs_np = self._rel_np = self._data_np = None
        if self.variant == RankVariant.DENSE:
            self._build_dense(counts)
        elif self.variant == RankVariant.SPARSE:
            self._build_sparse(counts)
        else:
            self._build_interleaved(words, counts)
        self._abs = self._abs_np.tolist() if self._abs_np is not None else None
        self._rel = self._rel_np.tolist() if self._rel_np is not None else None
        self._data = self._data_np.tolist() if self._data_np is not None else None

    def _build_dense(self, counts):
        nsb = -(-counts.size // 8)
        padded = np.zeros(nsb * 8, dtype=np.int64)
        padded[: counts.size] = counts
        per = padded.reshape(nsb, 8)
        sb_tot = per.sum(axis=1)
        self._abs_np = np.concatenate([[0], np.cumsum(sb_tot)[:-1]]).astype(np.uint64) if nsb else np.zeros(0, np.uint64)
        within = np.cumsum(per, axis=1)[:, :7]  # ones before words 1..7
        rel = np.zeros(nsb, dtype=np.uint64)
        for w in range(7):
            rel |= within[:, w].astype(np.uint64) << np.uint64(9 * w)
        self._rel_np = rel

    def _build_sparse(self, counts):
        nsb = -(-counts.size // 32)
        padded = np.zeros(nsb * 32, dtype=np.int64)
        padded[: counts.size] = counts
        blocks = padded.reshape(nsb, 4, 8).sum(axis=2)
        sb_tot = blocks.sum(axis=1)
        self._abs_np = np.concatenate([[0], np.cumsum(sb_tot)[:-1]]).astype(np.uint64) if nsb else np.zeros(0, np.uint64)
        within = np.cumsum(blocks, axis=1)[:, :3]
        rel = np.zeros(nsb, dtype=np.uint64)
        for b in range(3):
            rel |= within[:, b].astype(np.uint64) << np.uint64(11 * b)
        self._rel_np = rel

    def _build_interleaved(self, words, counts):
        nblk = -(-counts.size // 8)
        data = np.zeros((nblk, 9), dtype=np.uint64)
        padded = np.zeros(nblk * 8, dtype=np.uint64)
        padded[: words.size] = words
        data[:, 1:] = padded.reshape(nblk, 8)
        pc = np.zeros(nblk * 8, dtype=np.int64)
        pc[: counts.size] = counts
        blk = pc.reshape(nblk, 8).sum(axis=1)
        if nblk:
            data[:, 0] = np.concatenate([[0], np.cumsum(blk)[:-1]]).astype(np.uint64)
        self._data_np = data.ravel()

    # queries ------------------------------------------------------------

    def __len__(self):
        return self._len

    @property
    def total(self):
        return self._total

    def rank_before(self, i):
        """Number of ones strictly before position ``i``."""
        if i >= self._len:
            if i == self._len:
                return self._total
            raise IndexError(f"rank position {i} out of range [0, {self._len}]")
        if i < 0:
            raise IndexError(f"rank position {i} out of range [0, {self._len}]")
        w = i >> 6
        off = i & 63
        variant = self.variant
        if variant == RankVariant.DENSE:
            sb = w >> 3
            wi = w & 7
            r = self._abs[sb]
            if wi:
                r += (self._rel[sb] >> (9 * (wi - 1))) & 511
            return r + _popcount_prefix(self._bv.words[w], off)
        if variant == RankVariant.SPARSE:
            sb = w >> 5
            blk = w >> 3
            bi = blk & 3
            r = self._abs[sb]
            if bi:
                r += (self._rel[sb] >> (11 * (bi - 1))) & 2047
            words = self._bv.words
            for j in range(blk << 3, w):
                r += words[j].bit_count()
            return r + _popcount_prefix(words[w], off)
        data = self._data
        base = 9 * (w >> 3)
        r = data[base]
        for j in range(base + 1, base + 1 + (w & 7)):
            r += data[j].bit_count()
        return r + _popcount_prefix(data[base + 1 + (w & 7)], off)

    def rank1(self, i):
        if not 0 <= i < self._len:
            raise IndexError(f"rank position {i} out of range [0, {self._len})")
        return self.rank_before(i + 1)

    # accounting ---------------------------------------------------------

    @property
    def overhead_bits(self):
        """Bits spent on directory counters (payload copies not included)."""
        if self.variant == RankVariant.INTERLEAVED:
            return (self._data_np.size // 9) * WORD
        return (self._abs_np.size + self._rel_np.size) * WORD

    @property
    def overhead(self):
        return self.overhead_bits / self._len if self._len else 0.0


class PairZeroDir:
    """Rank over aligned ``00`` pairs: one absolute count per 512-bit block."""

    __slots__ = ("_bv", "_len", "_abs", "_abs_np")

    def __init__(self, bv):
        if len(bv) % 2:
            raise ValueError("pair directory needs an even-length vector")
        self._bv = bv
        self._len = len(bv)
        per_word = [_zero_pairs(w, min(WORD, self._len - 64 * j))
                    for j, w in enumerate(bv.words)]
        nblk = -(-len(per_word) // 8)
        acc = 0
        abs_ = []
        for b in range(nblk):
            abs_.append(acc)
            acc += sum(per_word[8 * b: 8 * b + 8])
        self._abs_np = np.asarray(abs_, dtype=np.uint64)
        abs_.append(acc)  # sentinel so rank_before(len) needs no special case
        self._abs = abs_

    def rank_before(self, i):
        """Number of ``00`` pairs among pairs ``0 .. i/2 - 1``; ``i`` must be even."""
        if i & 1:
            raise ValueError(f"pair rank needs an even bit position, got {i}")
        if not 0 <= i <= self._len:
            raise IndexError(f"pair rank position {i} out of range [0, {self._len}]")
        w = i >> 6
        words = self._bv.words
        r = self._abs[w >> 3]
        for j in range((w >> 3) << 3, w):
            r += _zero_pairs(words[j], 64)
        off = i & 63
        if off:
            r += _zero_pairs(words[w], off)
        return r

    @property
    def overhead_bits(self):
        return self._abs_np.size * WORD


def _zero_pairs(word, nbits):
    """Aligned 00 pairs in the low ``nbits`` (even) bits of ``word``."""
    x = ~word & ((1 << nbits) - 1)
    return (x & (x >> 1) & _EVEN).bit_count()


class SelectDir:
    """select1 by sampling every 8192nd one, then a block search and word scan."""

    SAMPLE = 8192

    __slots__ = ("_bv", "_total", "_samples", "_blk_cum")

    def __init__(self, bv):
        self._bv = bv
        words = np.asarray(bv.words, dtype=np.uint64)
        counts = _word_popcounts(words)
        self._total = int(counts.sum())
        nblk = -(-counts.size // 8)
        pc = np.zeros(nblk * 8, dtype=np.int64)
        pc[: counts.size] = counts
        # _blk_cum[b] = ones before block b
        self._blk_cum = np.concatenate([[0], np.cumsum(pc.reshape(nblk, 8).sum(axis=1))]).tolist()
        # _samples[s] = block holding the (s*SAMPLE + 1)-th one
        targets = np.arange(0, self._total, self.SAMPLE)
        self._samples = (np.searchsorted(self._blk_cum, targets, side="right") - 1).tolist()

    def select1(self, j):
        """Position of the ``j``-th one (1-based)."""
        if not 1 <= j <= self._total:
            raise IndexError(f"select rank {j} out of range [1, {self._total}]")
        s = (j - 1) // self.SAMPLE
        lo = self._samples[s]
        hi = self._samples[s + 1] + 1 if s + 1 < len(self._samples) else len(self._blk_cum) - 1
        blk = bisect_right(self._blk_cum, j - 1, lo, hi) - 1
        need = j - self._blk_cum[blk]
        words = self._bv.words
        w = blk << 3
        while True:
            c = words[w].bit_count()
            if c >= need:
                break
            need -= c
            w += 1
        x = words[w]
        for _ in range(need - 1):
            x &= x - 1
        return (w << 6) + (x & -x).bit_length() - 1


def _word_popcounts(words):
    if not words.size:
        return np.zeros(0, dtype=np.int64)
    b = words.view(np.uint8).reshape(-1, 8)
    return np.unpackbits(b, axis=1).sum(axis=1).astype(np.int64)


def rank1(bv, rankdir, i):
    """Ones in ``bv[0..i]``; ``rankdir`` must have been built over ``bv``."""
    if rankdir._bv is not bv:
        raise ValueError("rank directory was built over a different vector")
    return rankdir.rank1(i)


def rank_pairs00(bv, pairdir, i):
    """Aligned 00 node codes strictly before pair ``i // 2``."""
    if pairdir._bv is not bv:
        raise ValueError("pair directory was built over a different vector")
    return pairdir.rank_before(i)


def select1(bv, j, seldir=None):
    seldir = seldir if seldir is not None else SelectDir(bv)
    return seldir.select1(j)
