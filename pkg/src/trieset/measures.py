"""Compression measures for sorted integer sets.

All measures use ``cost(v) = floor(lg max(v, 1)) + 1`` for a stored integer,
so zero gaps and unit runs cost one bit. Trie measures are taken over the
padded universe ``[0, 2**ell)`` with ``ell = ceil(lg u)``.
"""

import math
from dataclasses import dataclass

import numpy as np

MAX_ELL = 48


def universe_bits(u):
    """Trie depth ``ceil(lg u)``; universes smaller than 2 are rejected."""
    if u < 2:
        raise ValueError(f"universe must hold at least 2 values, got u={u}")
    ell = (u - 1).bit_length()
    if ell > MAX_ELL:
        raise ValueError(f"universe 2**{ell} exceeds the supported 2**{MAX_ELL}")
    return ell


class SortedSet:
    """Strictly increasing integers drawn from ``[0, u)``."""

    __slots__ = ("elems", "u")

    def __init__(self, elems, u):
        arr = np.asarray(elems, dtype=np.int64).ravel()
        if arr.size:
            if arr[0] < 0 or arr[-1] >= u:
                raise ValueError(f"elements must lie in [0, {u})")
            if arr.size > 1 and not np.all(arr[1:] > arr[:-1]):
                bad = int(np.argmax(arr[1:] <= arr[:-1])) + 1
                raise ValueError(
                    f"elements must be strictly increasing (position {bad}: "
                    f"{int(arr[bad - 1])} then {int(arr[bad])})")
        universe_bits(u)
        arr.flags.writeable = False
        self.elems = arr
        self.u = int(u)

    @classmethod
    def of(cls, s, u=None):
        if isinstance(s, cls):
            if u is not None and u != s.u:
                raise ValueError(f"set universe {s.u} does not match u={u}")
            return s
        if u is None:
            raise ValueError("a universe size is required")
        return cls(s, u)

    @property
    def n(self):
        return int(self.elems.size)

    @property
    def ell(self):
        return universe_bits(self.u)

    def __len__(self):
        return self.n

    def __iter__(self):
        return iter(self.elems.tolist())

    def tolist(self):
        return self.elems.tolist()

    def __eq__(self, other):
        if not isinstance(other, SortedSet):
            return NotImplemented
        return self.u == other.u and np.array_equal(self.elems, other.elems)

    def __repr__(self):
        body = self.elems.tolist() if self.n <= 16 else f"{self.n} elements"
        return f"SortedSet({body}, u={self.u})"


@dataclass(frozen=True)
class RunDecomposition:
    """Maximal runs: ``gaps[i]`` zeros precede the ``lengths[i]`` ones of run i."""

    heads: np.ndarray
    gaps: np.ndarray
    lengths: np.ndarray

    @property
    def r(self):
        return int(self.lengths.size)

    def expand(self):
        if not self.r:
            return np.zeros(0, dtype=np.int64)
        return np.concatenate([np.arange(h, h + k) for h, k in
                               zip(self.heads.tolist(), self.lengths.tolist())])


def bit_length(values):
    """Vectorised ``int.bit_length`` for nonnegative int64 arrays below 2**53."""
    v = np.asarray(values, dtype=np.int64)
    return np.frexp(v.astype(np.float64))[1].astype(np.int64)


def _cost(values):
    v = np.maximum(np.asarray(values, dtype=np.int64), 1)
    return bit_length(v)


def gaps(s):
    x = s.elems
    if not x.size:
        return x.copy()
    return np.concatenate([x[:1], np.diff(x) - 1])


def runs(s):
    x = s.elems
    if not x.size:
        z = np.zeros(0, dtype=np.int64)
        return RunDecomposition(z, z, z)
    brk = np.flatnonzero(np.diff(x) != 1) + 1
    starts = np.concatenate([[0], brk])
    ends = np.concatenate([brk, [x.size]])
    heads = x[starts]
    tails = x[ends - 1]
    z = np.concatenate([heads[:1], heads[1:] - tails[:-1] - 1])
    return RunDecomposition(heads, z, ends - starts)


def gap_measure(s):
    if not s.n:
        return 0
    return int(_cost(gaps(s)).sum())


def rle_measure(s):
    if not s.n:
        return 0
    d = runs(s)
    return int(_cost(d.gaps - 1).sum() + _cost(d.lengths - 1).sum())


def trie_measure(s):
    """Edges of the binary trie, via prefix-omission code lengths."""
    if not s.n:
        return 0
    x = s.elems
    return s.ell + int(bit_length(x[1:] ^ x[:-1]).sum())


def rtrie_measure(s):
    """Edges left once every maximal full subtree is cut down to its root."""
    if not s.n:
        return 0
    x = s.elems
    ell = s.ell
    edges = 0
    for depth in range(1, ell + 1):
        shift = ell - depth
        child = np.unique(x >> shift)
        # parent of a depth-d node covers 2**(shift+1) leaves
        parent, counts = np.unique(x >> (shift + 1), return_counts=True)
        full = parent[counts == (1 << (shift + 1))]
        edges += int(np.count_nonzero(~np.isin(child >> 1, full)))
    return edges


def binom_bound(n, u):
    """``ceil(lg C(u, n))`` computed exactly."""
    if not 0 <= n <= u:
        raise ValueError(f"need 0 <= n <= u, got n={n}, u={u}")
    return (math.comb(u, n) - 1).bit_length()


def shift_set(s, a):
    if not 0 <= a < s.u:
        raise ValueError(f"shift {a} out of range [0, {s.u})")
    return SortedSet(np.sort((s.elems + a) % s.u), s.u)
