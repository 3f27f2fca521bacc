"""Level-wise compact binary tries.

Level ``li`` (0-based, ``B_{li+1}`` in the usual 1-based naming) holds one
2-bit code per trie node at depth ``li``, left to right. Bit ``2p`` of a code
flags the left child of node ``p``, bit ``2p + 1`` the right child, so a code
reads ``10`` (left only), ``01`` (right only) or ``11`` in bit order. The
children of level ``li`` are the nodes of level ``li + 1`` in the same order,
which makes ``rank_before(B_li, 2p + b)`` the pair index of child ``b``.
"""

import struct

import numpy as np

from .bitvec import BitVec, RankDir, RankVariant, SelectDir, WORD
from .measures import SortedSet, universe_bits

LEFT = 1
RIGHT = 2

FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sHQBQB")
_FLAG_LAST_RANK = 0x10
_FLAG_SELECT = 0x20


class TrieFormatError(ValueError):
    """Malformed trie bytes or level vectors."""


class CapabilityError(RuntimeError):
    """The operation needs a directory the trie was built without."""


def level_bits(x, ell, runs=False):
    """Per-level 0/1 arrays for the sorted int64 array ``x``.

    With ``runs`` every maximal full subtree below a kept node is dropped and
    its root gets code ``00``.
    """
    levels = []
    nodes = np.zeros(1, dtype=np.int64)
    for li in range(ell):
        shift = ell - li
        bits = np.zeros(2 * nodes.size, dtype=np.uint8)
        if not nodes.size:
            levels.append(bits)
            continue
        child = np.unique(x >> (shift - 1))
        pos = np.searchsorted(nodes, child >> 1)
        if runs:
            lo = np.searchsorted(x, nodes << shift)
            hi = np.searchsorted(x, (nodes + 1) << shift)
            partial = (hi - lo) < (1 << shift)
            at = np.minimum(pos, nodes.size - 1)
            keep = (nodes[at] == (child >> 1)) & partial[at]
            child, pos = child[keep], pos[keep]
        bits[2 * pos + (child & 1)] = 1
        levels.append(bits)
        nodes = child
    return levels


class EmptyTrie:
    """Stand-in for the trie of the empty set (tries cannot encode it)."""

    n = 0

    def __init__(self, u, kind="trie"):
        self.u = u
        self.ell = universe_bits(u)
        self.kind = kind

    def decode(self):
        return SortedSet([], self.u)

    def __len__(self):
        return 0

    def __eq__(self, other):
        return isinstance(other, EmptyTrie) and (self.u, self.kind) == (other.u, other.kind)

    def __repr__(self):
        return f"EmptyTrie(u={self.u}, kind={self.kind!r})"


class _LevelTrie:
    MAGIC = b"????"
    KIND = "?"
    RUNS = False

    def __init__(self, levels, u, n, rank=RankVariant.DENSE,
                 last_level_rank=False, select=False):
        ell = universe_bits(u)
        if len(levels) != ell:
            raise TrieFormatError(f"expected {ell} levels, got {len(levels)}")
        if n < 1:
            raise TrieFormatError("a trie must hold at least one element")
        expect = 1
        for li, bv in enumerate(levels):
            if len(bv) != 2 * expect:
                raise TrieFormatError(
                    f"level {li + 1} has {len(bv)} bits, parent level implies {2 * expect}")
            expect = bv.count_ones()
        self.levels = list(levels)
        self.u = int(u)
        self.ell = ell
        self.n = int(n)
        self.rank_variant = RankVariant.parse(rank)
        self.last_level_rank = bool(last_level_rank)
        self.has_select = bool(select)
        self.dirs = [RankDir(bv, self.rank_variant) for bv in self.levels[:-1]]
        self.dirs.append(RankDir(self.levels[-1], self.rank_variant) if last_level_rank else None)
        self.selects = [SelectDir(bv) for bv in self.levels] if select else None
        self._words = [bv.words for bv in self.levels]

    # construction -------------------------------------------------------

    @classmethod
    def build(cls, elems, u=None, *, rank=RankVariant.DENSE,
              last_level_rank=False, select=False):
        s = SortedSet.of(elems, u)
        if not s.n:
            raise ValueError("cannot build a trie over the empty set")
        bits = level_bits(s.elems, s.ell, runs=cls.RUNS)
        levels = [BitVec.from_bits(b) for b in bits]
        return cls(levels, s.u, s.n, rank=rank,
                   last_level_rank=last_level_rank, select=select)

    def with_options(self, *, rank=None, last_level_rank=None, select=None):
        """Same levels, rebuilt directories."""
        return type(self)(
            self.levels, self.u, self.n,
            rank=self.rank_variant if rank is None else rank,
            last_level_rank=self.last_level_rank if last_level_rank is None else last_level_rank,
            select=self.has_select if select is None else select)

    # navigation primitives ---------------------------------------------

    def code(self, li, p):
        """Raw code of node ``p`` at level ``li`` (``LEFT``/``RIGHT`` bits)."""
        i = p << 1
        return (self._words[li][i >> 6] >> (i & 63)) & 3

    def child(self, li, bitpos):
        """Pair index, in level ``li + 1``, of the child flagged at ``bitpos``."""
        return self.dirs[li].rank_before(bitpos)

    def _zeros_before(self, li, bitpos):
        return 0

    def _last_dir(self):
        d = self.dirs[-1]
        if d is None:
            raise CapabilityError(
                "rank on the last level needs a trie built with last_level_rank=True")
        return d

    def _check_x(self, x):
        if not 0 <= x < self.u:
            raise ValueError(f"query {x} outside universe [0, {self.u})")

    # set primitives -----------------------------------------------------

    def __len__(self):
        return self.n

    def __contains__(self, x):
        return 0 <= x < self.u and self.successor(x) == x

    def rank(self, x):
        """Number of elements ``<= x``."""
        self._check_x(x)
        last = self._last_dir()
        ell = self.ell
        d = 0
        p = 0
        pivot = None
        for li in range(ell):
            c = self.code(li, p)
            shift = ell - li
            if c == 0:
                start = (x >> shift) << shift
                return d + self._mass_before(li, p) + (x - start) + 1
            b = (x >> (shift - 1)) & 1
            if b and c & LEFT:
                pivot = (li, p, d)
            if not c & (RIGHT if b else LEFT):
                break
            if li == ell - 1:
                return d + 2 * self._zeros_before(li, 2 * p) + last.rank1(2 * p + b)
            d += self._zeros_before(li, 2 * p) << shift
            p = self.child(li, 2 * p + b)
        if pivot is None:
            return 0
        # predecessor sits on the rightmost path of the pivot's left subtree
        li, p, d = pivot
        bitpos = 2 * p
        while li < ell - 1:
            d += self._zeros_before(li, 2 * p) << (ell - li)
            p = self.child(li, bitpos)
            li += 1
            c = self.code(li, p)
            if c == 0:
                return d + self._mass_before(li, p) + (1 << (ell - li))
            bitpos = 2 * p + 1 if c & RIGHT else 2 * p
        return d + 2 * self._zeros_before(li, 2 * p) + last.rank1(bitpos)

    def _mass_before(self, li, p):
        """Elements stored at levels ``>= li`` left of node ``p`` of level ``li``."""
        ell = self.ell
        total = 0
        pos = p
        for m in range(li, ell):
            total += self._zeros_before(m, 2 * pos) << (ell - m)
            if m == ell - 1:
                total += self._last_dir().rank_before(2 * pos)
            else:
                pos = self.dirs[m].rank_before(2 * pos)
        return total

    def successor(self, x):
        """Smallest element ``>= x``, or None."""
        self._check_x(x)
        return self._neighbour(x, up=True)

    def predecessor(self, x):
        """Largest element ``<= x``, or None."""
        self._check_x(x)
        return self._neighbour(x, up=False)

    def _neighbour(self, x, up):
        ell = self.ell
        p = 0
        prefix = 0
        alt = None
        # a fallback branch exists where the path goes one way and the
        # other child (right for successor, left for predecessor) is present
        other = RIGHT if up else LEFT
        for li in range(ell):
            c = self.code(li, p)
            if c == 0:
                return x
            b = (x >> (ell - 1 - li)) & 1
            if b != up and c & other:
                alt = (li, p, prefix)
            if not c & (RIGHT if b else LEFT):
                break
            prefix = 2 * prefix + b
            if li == ell - 1:
                return prefix
            p = self.child(li, 2 * p + b)
        if alt is None:
            return None
        li, p, prefix = alt
        return self._extreme(li, p, prefix, 1 if up else 0, low=up)

    def _extreme(self, li, p, prefix, b, low):
        """Enter child ``b`` of node ``(li, p)``, then hug the low/high side."""
        ell = self.ell
        while True:
            prefix = 2 * prefix + b
            if li == ell - 1:
                return prefix
            p = self.child(li, 2 * p + b)
            li += 1
            c = self.code(li, p)
            if c == 0:
                shift = ell - li
                return prefix << shift if low else ((prefix + 1) << shift) - 1
            if low:
                b = 0 if c & LEFT else 1
            else:
                b = 1 if c & RIGHT else 0

    def decode(self):
        """All elements, in increasing order."""
        ell = self.ell
        prefixes = np.zeros(1, dtype=np.int64)
        runs = []
        for li, bv in enumerate(self.levels):
            bits = bv.to_numpy().reshape(-1, 2).astype(bool)
            if self.RUNS:
                shift = ell - li
                for pre in prefixes[~bits.any(axis=1)].tolist():
                    runs.append(np.arange(pre << shift, (pre + 1) << shift, dtype=np.int64))
            prefixes = ((prefixes[:, None] << 1) | np.array([0, 1]))[bits]
        if runs:
            prefixes = np.sort(np.concatenate([prefixes] + runs))
        return SortedSet(prefixes, self.u)

    # accounting ---------------------------------------------------------

    @property
    def payload_bits(self):
        return sum(len(bv) for bv in self.levels)

    @property
    def one_bits(self):
        return sum(bv.count_ones() for bv in self.levels)

    @property
    def directory_bits(self):
        bits = sum(d.overhead_bits for d in self.dirs if d is not None)
        if self.selects is not None:
            bits += sum(WORD * (len(s._samples) + len(s._blk_cum)) for s in self.selects)
        return bits

    def level_strings(self):
        return [bv.to_string() for bv in self.levels]

    def codes(self, li):
        """Node codes of level ``li`` as strings like ``'10'``."""
        s = self.levels[li].to_string()
        return [s[i:i + 2] for i in range(0, len(s), 2)]

    # wire format --------------------------------------------------------

    def _tag(self):
        tag = int(self.rank_variant)
        if self.last_level_rank:
            tag |= _FLAG_LAST_RANK
        if self.has_select:
            tag |= _FLAG_SELECT
        return tag

    def to_bytes(self):
        head = _HEADER.pack(self.MAGIC, FORMAT_VERSION, self.u, self.ell, self.n, self._tag())
        return head + b"".join(bv.to_bytes() for bv in self.levels)

    @classmethod
    def from_buffer(cls, buf, offset=0):
        try:
            magic, version, u, ell, n, tag = _HEADER.unpack_from(buf, offset)
        except struct.error:
            raise TrieFormatError("truncated trie header") from None
        if magic != cls.MAGIC:
            raise TrieFormatError(f"bad magic {magic!r}, expected {cls.MAGIC!r}")
        if version != FORMAT_VERSION:
            raise TrieFormatError(f"unsupported format version {version}")
        try:
            if universe_bits(u) != ell:
                raise TrieFormatError(f"ell={ell} does not match u={u}")
            rank = RankVariant(tag & 0x0F)
            offset += _HEADER.size
            levels = []
            for _ in range(ell):
                bv, offset = BitVec.from_buffer(buf, offset)
                levels.append(bv)
        except TrieFormatError:
            raise
        except (ValueError, struct.error) as exc:
            raise TrieFormatError(str(exc)) from None
        trie = cls(levels, u, n, rank=rank,
                   last_level_rank=bool(tag & _FLAG_LAST_RANK),
                   select=bool(tag & _FLAG_SELECT))
        return trie, offset

    @classmethod
    def from_bytes(cls, data):
        trie, end = cls.from_buffer(data)
        if end != len(data):
            raise TrieFormatError("trailing bytes after trie")
        return trie

    def __eq__(self, other):
        if type(self) is not type(other):
            return NotImplemented
        return (self.u, self.n, self.levels) == (other.u, other.n, other.levels)

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n}, u={self.u}, bits={self.payload_bits})"


class BinaryTrie(_LevelTrie):
    """Compact binary trie: ``2(trie(S) - n + 1)`` payload bits."""

    MAGIC = b"BTRI"
    KIND = "trie"

    def __init__(self, levels, u, n, **options):
        super().__init__(levels, u, n, **options)
        if self.levels[-1].count_ones() != self.n:
            raise TrieFormatError(
                f"last level holds {self.levels[-1].count_ones()} elements, header says {self.n}")

    def select(self, j):
        """The ``j``-th smallest element (1-based)."""
        if self.selects is None:
            raise CapabilityError("select needs a trie built with select=True")
        if not 1 <= j <= self.n:
            raise IndexError(f"select rank {j} out of range [1, {self.n}]")
        i = self.selects[-1].select1(j)
        x = 0
        for li in range(self.ell - 1, -1, -1):
            x |= (i & 1) << (self.ell - 1 - li)
            if li:
                i = self.selects[li - 1].select1((i >> 1) + 1)
        return x

    def validate(self):
        """Raise if any level carries the reserved ``00`` code."""
        for li in range(self.ell):
            for p in range(len(self.levels[li]) // 2):
                if self.code(li, p) == 0:
                    raise TrieFormatError(f"00 code at level {li + 1}, node {p}")


def build(elems, u=None, **options):
    return BinaryTrie.build(elems, u, **options)


def set_rank(t, x):
    return t.rank(x)


def set_select(t, j):
    return t.select(j)


def successor(t, x):
    return t.successor(x)


def predecessor(t, x):
    return t.predecessor(x)


def decode(t):
    return t.decode()
