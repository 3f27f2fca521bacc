"""k-way intersection over compact tries, plus array-based reference routines."""

import enum
from bisect import bisect_left
from dataclasses import dataclass, field

import numpy as np

from .bintrie import LEFT, RIGHT, BinaryTrie, CapabilityError, EmptyTrie
from .bitvec import BitVec
from .measures import SortedSet
from .runtrie import RunTrie


class Mode(enum.Enum):
    ARRAY = "array"
    TRIE = "trie"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        return cls(str(value).lower())


class QueryError(ValueError):
    pass


@dataclass
class IntersectionOutput:
    mode: Mode
    result: object
    count: int
    nodes_visited: int = 0
    rank_calls: int = 0
    rank_seqs: list = None

    def elements(self):
        """The intersection as a sorted Python list, whatever the mode."""
        if self.mode is Mode.ARRAY:
            return list(self.result)
        return self.result.decode().tolist()


def check_query(tries):
    tries = list(tries)
    if len(tries) < 2:
        raise QueryError(f"an intersection needs k >= 2 sets, got {len(tries)}")
    kinds = {type(t) for t in tries}
    if len(kinds) != 1 or not kinds <= {BinaryTrie, RunTrie}:
        raise QueryError(f"tries in one query must share a kind, got {sorted(k.__name__ for k in kinds)}")
    if len({t.u for t in tries}) != 1:
        raise QueryError("tries in one query must share a universe")
    return tries


@dataclass
class Sink:
    """Output buffers for one traversal (or one parallel seed)."""

    ell: int
    trie_mode: bool
    levels: list = None
    elems: list = field(default_factory=list)
    ranks: list = None
    count: int = 0

    def __post_init__(self):
        if self.trie_mode and self.levels is None:
            self.levels = [[] for _ in range(self.ell)]


class Traversal:
    """Synchronised depth-first descent over k tries.

    Each visited node ANDs the k current codes; ``00`` prunes, otherwise the
    surviving children are visited left to right. Output codes are appended
    when a node finishes (postorder), which keeps every output level in
    left-to-right order. With run tries a trie sitting on a ``00`` node drops
    out of the AND for that subtree; if one trie is left its subtree is copied.
    """

    def __init__(self, tries, mode=Mode.ARRAY, with_ranks=False):
        self.tries = tries
        self.k = len(tries)
        self.ell = tries[0].ell
        self.mode = Mode.parse(mode)
        self.runs = isinstance(tries[0], RunTrie)
        self.with_ranks = with_ranks
        self.nodes = 0
        self.rank_calls = 0
        if with_ranks and not self.runs:
            self._last = [t._last_dir() for t in tries]

    def new_sink(self):
        return Sink(self.ell, self.mode is Mode.TRIE,
                    ranks=[] if self.with_ranks and not self.runs else None)

    def root_frame(self):
        return (0, (0,) * self.k, tuple(range(self.k)), 0)

    def run(self, frame, sink):
        li, roots, active, prefix = frame
        if self.runs:
            return self._visit_runs(li, roots, active, prefix, sink)
        return self._visit(li, roots, prefix, sink)

    # plain tries --------------------------------------------------------

    def _visit(self, li, roots, prefix, sink):
        self.nodes += 1
        tries = self.tries
        s = 3
        for t, r in zip(tries, roots):
            s &= t.code(li, r)
            if not s:
                return 0
        if li == self.ell - 1:
            self._emit_leaves(li, roots, prefix, s, sink)
            return 1
        k = self.k
        left = right = 0
        lroots = None
        if s & LEFT:
            lroots = [t.dirs[li].rank_before(2 * r) for t, r in zip(tries, roots)]
            self.rank_calls += k
            left = self._visit(li + 1, lroots, 2 * prefix, sink)
        if s & RIGHT:
            if lroots is None:
                rroots = [t.dirs[li].rank_before(2 * r + 1) for t, r in zip(tries, roots)]
                self.rank_calls += k
            else:
                rroots = [c + 1 for c in lroots]
            right = self._visit(li + 1, rroots, 2 * prefix + 1, sink)
        if left or right:
            if sink.levels is not None:
                sink.levels[li].append(left | (right << 1))
            return 1
        return 0

    def _emit_leaves(self, li, roots, prefix, s, sink):
        if sink.levels is not None:
            sink.levels[li].append(s)
        sink.count += (s & 1) + (s >> 1)
        if sink.ranks is not None:
            base = []
            for d, t, r in zip(self._last, self.tries, roots):
                base.append((d.rank_before(2 * r), t.code(li, r)))
            self.rank_calls += self.k
            if s & LEFT:
                sink.ranks.append(tuple(b + 1 for b, _ in base))
            if s & RIGHT:
                sink.ranks.append(tuple(b + (c & 1) + 1 for b, c in base))
        if sink.levels is None:
            if s & LEFT:
                sink.elems.append(2 * prefix)
            if s & RIGHT:
                sink.elems.append(2 * prefix + 1)

    # run tries ----------------------------------------------------------

    def _visit_runs(self, li, roots, active, prefix, sink):
        self.nodes += 1
        tries = self.tries
        s = 3
        live = []
        for i in active:
            c = tries[i].code(li, roots[i])
            if c:
                s &= c
                live.append(i)
        if not live:
            self._emit_run(li, prefix, sink)
            return 1
        if len(live) == 1:
            i = live[0]
            return self._copy(tries[i], li, roots[i], prefix, sink, counted=True)
        if not s:
            return 0
        if li == self.ell - 1:
            if sink.levels is not None:
                sink.levels[li].append(s)
            else:
                if s & LEFT:
                    sink.elems.append(2 * prefix)
                if s & RIGHT:
                    sink.elems.append(2 * prefix + 1)
            sink.count += (s & 1) + (s >> 1)
            return 1
        left = right = 0
        lroots = None
        if s & LEFT:
            lroots = list(roots)
            for i in live:
                lroots[i] = tries[i].dirs[li].rank_before(2 * roots[i])
            self.rank_calls += len(live)
            left = self._visit_runs(li + 1, lroots, live, 2 * prefix, sink)
        if s & RIGHT:
            rroots = list(roots)
            if lroots is None:
                for i in live:
                    rroots[i] = tries[i].dirs[li].rank_before(2 * roots[i] + 1)
                self.rank_calls += len(live)
            else:
                for i in live:
                    rroots[i] = lroots[i] + 1
            right = self._visit_runs(li + 1, rroots, live, 2 * prefix + 1, sink)
        if left or right:
            if sink.levels is not None:
                sink.levels[li].append(left | (right << 1))
            return 1
        return 0

    def _emit_run(self, li, prefix, sink):
        shift = self.ell - li
        size = 1 << shift
        if sink.levels is not None:
            sink.levels[li].append(0)
        else:
            sink.elems.extend(range(prefix << shift, (prefix + 1) << shift))
        sink.count += size

    def _copy(self, t, li, p, prefix, sink, counted=False):
        """Copy the subtree of node ``p`` at level ``li`` of ``t`` verbatim."""
        if not counted:
            self.nodes += 1
        c = t.code(li, p)
        if c == 0:
            self._emit_run(li, prefix, sink)
            return 1
        if li == self.ell - 1:
            if sink.levels is not None:
                sink.levels[li].append(c)
            else:
                if c & LEFT:
                    sink.elems.append(2 * prefix)
                if c & RIGHT:
                    sink.elems.append(2 * prefix + 1)
            sink.count += (c & 1) + (c >> 1)
            return 1
        first = None
        if c & LEFT:
            first = t.dirs[li].rank_before(2 * p)
            self.rank_calls += 1
            self._copy(t, li + 1, first, 2 * prefix, sink)
        if c & RIGHT:
            if first is None:
                second = t.dirs[li].rank_before(2 * p + 1)
                self.rank_calls += 1
            else:
                second = first + 1
            self._copy(t, li + 1, second, 2 * prefix + 1, sink)
        if sink.levels is not None:
            sink.levels[li].append(c)
        return 1

    # results ------------------------------------------------------------

    def finish(self, sink):
        u = self.tries[0].u
        ranks = sink.ranks
        if self.with_ranks and self.runs:
            ranks = None  # filled in below from the decoded result
        if sink.levels is None:
            result = sink.elems
        elif sink.count == 0:
            result = EmptyTrie(u, self.tries[0].KIND)
        else:
            result = trie_from_codes(type(self.tries[0]), sink.levels, u, sink.count,
                                     rank=self.tries[0].rank_variant)
        out = IntersectionOutput(self.mode, result, sink.count, self.nodes,
                                 self.rank_calls, ranks)
        if self.with_ranks and self.runs:
            out.rank_seqs = rank_sequences(self.tries, out)
        return out


def trie_from_codes(cls, code_levels, u, n, **options):
    """Assemble a trie from per-level lists (or arrays) of raw node codes."""
    levels = []
    for codes in code_levels:
        c = np.asarray(codes, dtype=np.uint8)
        bits = np.stack([c & 1, c >> 1], axis=1).ravel()
        levels.append(BitVec.from_bits(bits))
    return cls(levels, u, n, **options)


def ac_intersect(tries, mode=Mode.ARRAY, with_ranks=False):
    """Intersect k plain (or k run) tries by synchronised descent.

    ``mode`` selects a sorted list (ARRAY) or a trie of the same kind (TRIE).
    ``with_ranks`` also returns, for every result element, the tuple of its
    1-based ranks in the inputs; plain tries need ``last_level_rank=True``.
    """
    tries = check_query(tries)
    trav = Traversal(tries, mode, with_ranks)
    sink = trav.new_sink()
    trav.run(trav.root_frame(), sink)
    return trav.finish(sink)


def ac_intersect_runs(tries, mode=Mode.ARRAY, with_ranks=False):
    tries = check_query(tries)
    if not isinstance(tries[0], RunTrie):
        raise QueryError("ac_intersect_runs expects run tries")
    return ac_intersect(tries, mode, with_ranks)


def rank_sequences(tries, output):
    """Per result element, the tuple of its ranks in each input trie."""
    if output.rank_seqs is not None:
        return output.rank_seqs
    for t in tries:
        t._last_dir()
    return [tuple(t.rank(x) for t in tries) for x in output.elements()]


# array-based references ------------------------------------------------

def _gallop(arr, x, lo):
    """Smallest index ``>= lo`` with ``arr[i] >= x`` by doubling search."""
    n = len(arr)
    if lo >= n or arr[lo] >= x:
        return lo
    step = 1
    while lo + step < n and arr[lo + step] < x:
        lo += step
        step <<= 1
    return bisect_left(arr, x, lo + 1, min(lo + step, n))


def bk_intersect(sets):
    """Round-robin adaptive intersection with per-set fingers."""
    sets = [list(s) for s in sets]
    k = len(sets)
    if k < 2:
        raise QueryError(f"an intersection needs k >= 2 sets, got {k}")
    if any(not s for s in sets):
        return []
    fingers = [0] * k
    out = []
    x = sets[0][0]
    i = 1
    occ = 1
    while True:
        s = sets[i]
        f = _gallop(s, x, fingers[i])
        fingers[i] = f
        if f == len(s):
            break
        y = s[f]
        if y == x:
            occ += 1
            if occ == k:
                out.append(x)
                f += 1
                fingers[i] = f
                if f == len(s):
                    break
                x = s[f]
                occ = 1
        else:
            x = y
            occ = 1
        i = (i + 1) % k
    return out


def tp_intersect_naive(sets, universe):
    """Divide-and-conquer on the universe ``[lo, hi)``, splitting by binary search."""
    sets = [list(s) for s in sets]
    if len(sets) < 2:
        raise QueryError(f"an intersection needs k >= 2 sets, got {len(sets)}")
    lo, hi = universe
    out = []

    def rec(bounds, L, R):
        for a, b in bounds:
            if a == b:
                return
        if R - L == 1:
            out.append(L)
            return
        M = (L + R) // 2
        cuts = [bisect_left(s, M, a, b) for s, (a, b) in zip(sets, bounds)]
        rec([(a, c) for (a, _), c in zip(bounds, cuts)], L, M)
        rec([(c, b) for (_, b), c in zip(bounds, cuts)], M, R)

    rec([(bisect_left(s, lo), bisect_left(s, hi)) for s in sets], lo, hi)
    return out


def intersect_sets(sets, u, kind="trie", mode=Mode.ARRAY, **options):
    """Convenience wrapper: build tries for ``sets`` and intersect them."""
    cls = RunTrie if kind == "rtrie" else BinaryTrie
    sets = [SortedSet.of(s, u) for s in sets]
    if len(sets) >= 2 and any(s.n == 0 for s in sets):
        mode = Mode.parse(mode)
        empty = [] if mode is Mode.ARRAY else EmptyTrie(u, cls.KIND)
        return IntersectionOutput(mode, empty, 0)
    return ac_intersect([cls.build(s, **options) for s in sets], mode)
