"""Binary tries with full subtrees elided.

A node whose subtree is full (every leaf of its universe interval present)
keeps its slot but is coded ``00`` and gets no children. A ``00`` stored at
level ``li`` (0-based) stands for ``2 ** (ell - li)`` consecutive elements.
If the whole padded universe is present the root itself is ``00`` and every
deeper level is empty.
"""

from .bintrie import TrieFormatError, _LevelTrie
from .bitvec import PairZeroDir


class RunTrie(_LevelTrie):
    MAGIC = b"RTRI"
    KIND = "rtrie"
    RUNS = True

    def __init__(self, levels, u, n, **options):
        super().__init__(levels, u, n, **options)
        self.zero_dirs = [PairZeroDir(bv) for bv in self.levels]
        stored = sum(self.zero_dirs[li].rank_before(len(bv)) << (self.ell - li)
                     for li, bv in enumerate(self.levels))
        stored += self.levels[-1].count_ones()
        if stored != self.n:
            raise TrieFormatError(f"levels encode {stored} elements, header says {self.n}")

    def _zeros_before(self, li, bitpos):
        return self.zero_dirs[li].rank_before(bitpos)

    @property
    def directory_bits(self):
        return super().directory_bits + sum(z.overhead_bits for z in self.zero_dirs)

    def zero_count(self, li):
        return self.zero_dirs[li].rank_before(len(self.levels[li]))


def build_run(elems, u=None, **options):
    return RunTrie.build(elems, u, **options)


def run_rank(t, x):
    return t.rank(x)


def run_decode(t):
    return t.decode()
