"""Multithreaded intersection by splitting at a top trie.

The synchronised descent is run breadth-first to depth ``c = floor(lg t)``
(deeper, up to ``2c``, while fewer than ``t`` frames survive). Surviving frames
become seeds; workers run the ordinary traversal from their seeds into private
sinks. The top trie's own codes are then derived bottom-up, every output
level is pre-sized from the per-piece counts, and each worker copies its
pieces into disjoint slices.
"""

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .bintrie import LEFT, RIGHT, EmptyTrie
from .intersect import IntersectionOutput, Mode, Traversal, check_query, rank_sequences, trie_from_codes

_SEED = "seed"
_DEAD = "dead"


def resolve_threads(t):
    if t == 0:
        return os.cpu_count() or 1
    if t < 1:
        raise ValueError(f"thread count must be >= 0, got {t}")
    return t


class ParallelPlan:
    """Top-trie frames for ``t`` workers."""

    def __init__(self, trav, t):
        self.t = t
        self.c = t.bit_length() - 1
        self.frames = [trav.root_frame()]
        self.children = {}      # expanded frame id -> [(bit, child id)]
        self.dead = set()
        self.nodes = 0
        self.rank_calls = 0
        self._grow(trav)
        self.seeds = [f for f in self._frontier]

    def _grow(self, trav):
        frontier = [0]
        settled = set()
        depth = 0
        while depth < self.c or (len(frontier) < self.t and depth < 2 * self.c):
            nxt = []
            grew = False
            for fid in frontier:
                if fid in settled:
                    nxt.append(fid)
                    continue
                status, kids = self._expand(trav, self.frames[fid])
                if status == _SEED:
                    settled.add(fid)
                    nxt.append(fid)
                elif status == _DEAD:
                    self.dead.add(fid)
                    self.children[fid] = []
                    grew = True
                else:
                    ids = []
                    for bit, frame in kids:
                        self.frames.append(frame)
                        ids.append((bit, len(self.frames) - 1))
                    self.children[fid] = ids
                    nxt.extend(i for _, i in ids)
                    grew = True
            frontier = nxt
            if not grew:
                break
            depth += 1
        self._frontier = frontier

    def _expand(self, trav, frame):
        li, roots, active, prefix = frame
        tries = trav.tries
        if li == trav.ell - 1:
            return _SEED, None
        live = active
        if trav.runs:
            live = [i for i in active if tries[i].code(li, roots[i])]
            if len(live) <= 1:
                return _SEED, None
        s = 3
        for i in live:
            s &= tries[i].code(li, roots[i])
        self.nodes += 1
        if not s:
            return _DEAD, None
        kids = []
        lroots = None
        if s & LEFT:
            lroots = list(roots)
            for i in live:
                lroots[i] = tries[i].dirs[li].rank_before(2 * roots[i])
            self.rank_calls += len(live)
            kids.append((0, (li + 1, tuple(lroots), tuple(live), 2 * prefix)))
        if s & RIGHT:
            rroots = list(roots)
            for i in live:
                if lroots is None:
                    rroots[i] = tries[i].dirs[li].rank_before(2 * roots[i] + 1)
                else:
                    rroots[i] = lroots[i] + 1
            if lroots is None:
                self.rank_calls += len(live)
            kids.append((1, (li + 1, tuple(rroots), tuple(live), 2 * prefix + 1)))
        return "expand", kids

    def assignment(self):
        """Contiguous runs of seeds, one per worker (some may be empty)."""
        bounds = np.linspace(0, len(self.seeds), self.t + 1).round().astype(int)
        return [self.seeds[bounds[w]:bounds[w + 1]] for w in range(self.t)]


def par_intersect(tries, t=1, mode=Mode.ARRAY, with_ranks=False):
    """Same contract and output as :func:`ac_intersect`, using ``t`` threads."""
    tries = check_query(tries)
    t = resolve_threads(t)
    mode = Mode.parse(mode)
    trav = Traversal(tries, mode, with_ranks)
    plan = ParallelPlan(trav, t)
    chunks = plan.assignment()
    sinks = {}

    def work(seed_ids):
        w = Traversal(tries, mode, with_ranks)
        local = {}
        for fid in seed_ids:
            sink = w.new_sink()
            w.run(plan.frames[fid], sink)
            local[fid] = sink
        return local, w.nodes, w.rank_calls

    nodes, ranks = plan.nodes, plan.rank_calls
    with ThreadPoolExecutor(max_workers=t) as pool:
        for local, n_w, r_w in pool.map(work, chunks):
            sinks.update(local)
            nodes += n_w
            ranks += r_w

        count = sum(s.count for s in sinks.values())
        if mode is Mode.ARRAY:
            elems = []
            seqs = [] if with_ranks and not trav.runs else None
            for fid in plan.seeds:
                elems.extend(sinks[fid].elems)
                if seqs is not None:
                    seqs.extend(sinks[fid].ranks)
            out = IntersectionOutput(mode, elems, count, nodes, ranks, seqs)
        elif count == 0:
            out = IntersectionOutput(mode, EmptyTrie(tries[0].u, tries[0].KIND), 0, nodes, ranks)
        else:
            levels = _assemble(plan, sinks, chunks, trav.ell, pool)
            result = trie_from_codes(type(tries[0]), levels, tries[0].u, count,
                                     rank=tries[0].rank_variant)
            seqs = None
            if with_ranks and not trav.runs:
                seqs = [r for fid in plan.seeds for r in sinks[fid].ranks]
            out = IntersectionOutput(mode, result, count, nodes, ranks, seqs)
    if with_ranks and trav.runs:
        out.rank_seqs = rank_sequences(tries, out)
    return out


def _assemble(plan, sinks, chunks, ell, pool):
    frames = plan.frames
    nonempty = {fid: sinks[fid].count > 0 for fid in plan.seeds}
    pieces = [[] for _ in range(ell)]     # per level: (key, owner, codes)
    for fid in sorted(plan.children, reverse=True):
        kids = plan.children[fid]
        code = 0
        for bit, cid in kids:
            if nonempty[cid]:
                code |= 1 << bit
        nonempty[fid] = bool(code)
        if code:
            li, _, _, prefix = frames[fid]
            pieces[li].append((prefix << (ell - li), -1, [code]))
    owner = {fid: w for w, ids in enumerate(chunks) for fid in ids}
    for fid in plan.seeds:
        sink = sinks[fid]
        if not sink.count:
            continue
        li, _, _, prefix = frames[fid]
        key = prefix << (ell - li)
        for m in range(li, ell):
            if sink.levels[m]:
                pieces[m].append((key, owner[fid], sink.levels[m]))

    out = []
    jobs = {w: [] for w in range(len(chunks))}
    spans = []
    for m in range(ell):
        pieces[m].sort(key=lambda piece: piece[0])
        total = sum(len(codes) for _, _, codes in pieces[m])
        buf = np.zeros(total, dtype=np.uint8)
        off = 0
        for _, w, codes in pieces[m]:
            end = off + len(codes)
            spans.append((m, off, end))
            if w < 0:
                buf[off:end] = codes
            else:
                jobs[w].append((buf, off, end, codes))
            off = end
        out.append(buf)
    _check_disjoint(spans)

    def write(w):
        for buf, a, b, codes in jobs[w]:
            buf[a:b] = codes

    list(pool.map(write, range(len(chunks))))
    return out


def _check_disjoint(spans):
    last = {}
    for m, a, b in sorted(spans):
        if a < last.get(m, 0):
            raise AssertionError(f"overlapping output slices on level {m}")
        last[m] = b
