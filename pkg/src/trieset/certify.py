"""Partition certificates for k-way intersections.

A certificate splits ``[0, u)`` into intervals. An eliminator interval names a
set that misses it entirely; a member interval lies inside the intersection.
In ``delta`` certificates member intervals are singletons, in ``xi``
certificates a member interval may span a run of consecutive results.
"""

from bisect import bisect_left
from dataclasses import dataclass

MEMBER = -1


@dataclass(frozen=True)
class Interval:
    lo: int
    hi: int          # inclusive
    label: int       # MEMBER, or the index of the eliminating set

    @property
    def is_member(self):
        return self.label == MEMBER

    def __len__(self):
        return self.hi - self.lo + 1

    def __str__(self):
        tag = "member" if self.is_member else f"elim S{self.label}"
        return f"[{self.lo}..{self.hi}] {tag}"


@dataclass(frozen=True)
class Certificate:
    kind: str        # "delta" or "xi"
    u: int
    intervals: tuple

    def __len__(self):
        return len(self.intervals)

    def spans(self):
        return [(iv.lo, iv.hi) for iv in self.intervals]


def _sweep(sets, u, merge_runs):
    sets = [list(s) for s in sets]
    if len(sets) < 2:
        raise ValueError(f"a certificate needs k >= 2 sets, got {len(sets)}")
    fingers = [0] * len(sets)
    out = []
    x = 0
    while x < u:
        best = -1
        best_set = 0
        hit_all = True
        for q, s in enumerate(sets):
            f = bisect_left(s, x, fingers[q])
            fingers[q] = f
            y = s[f] if f < len(s) else u
            if y != x:
                hit_all = False
            if y > best:
                best, best_set = y, q
        if hit_all:
            hi = x
            if merge_runs:
                while hi + 1 < u and all(
                        fingers[q] + hi + 1 - x < len(s) and s[fingers[q] + hi + 1 - x] == hi + 1
                        for q, s in enumerate(sets)):
                    hi += 1
            out.append(Interval(x, hi, MEMBER))
            x = hi + 1
        else:
            out.append(Interval(x, best - 1, best_set))
            x = best
    return out


def compute_delta(sets, u):
    """Size and intervals of a smallest partition certificate (greedy sweep).

    At cursor ``x``: if every set holds ``x`` emit ``[x..x]``; otherwise jump
    to the largest successor of ``x`` over the sets (``u`` for an exhausted
    set), labelling the skipped interval with the set that produced it.
    """
    cert = Certificate("delta", u, tuple(_sweep(sets, u, merge_runs=False)))
    return len(cert), cert


def compute_xi(sets, u):
    """Like :func:`compute_delta`, but runs of results share one interval."""
    cert = Certificate("xi", u, tuple(_sweep(sets, u, merge_runs=True)))
    return len(cert), cert


def validate(cert, sets):
    """True iff ``cert`` is a valid certificate of its kind for ``sets``."""
    sets = [list(s) for s in sets]
    pos = 0
    for iv in cert.intervals:
        if iv.lo != pos or iv.hi < iv.lo:
            return False
        pos = iv.hi + 1
        if iv.is_member:
            if cert.kind == "delta" and iv.lo != iv.hi:
                return False
            for s in sets:
                a = bisect_left(s, iv.lo)
                if a + len(iv) > len(s) or s[a + len(iv) - 1] != iv.hi or s[a] != iv.lo:
                    return False
        else:
            if not 0 <= iv.label < len(sets):
                return False
            s = sets[iv.label]
            a = bisect_left(s, iv.lo)
            if a < len(s) and s[a] <= iv.hi:
                return False
    return pos == cert.u
