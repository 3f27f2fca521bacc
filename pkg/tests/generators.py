"""Random set and query generators shared by the test modules."""

import numpy as np

RUNNING_U = 16
S1 = [1, 3, 7, 8, 9, 10, 11, 12]
S2 = [2, 5, 7, 12, 15]
FAMILY4 = [list(range(7, 16)), list(range(5, 15)),
           [4, 5, 6, 7, 8, 9, 11, 12, 13, 14], list(range(8, 16))]


def uniform_set(rng, n, u):
    n = min(n, u)
    return np.sort(rng.choice(u, size=n, replace=False)).tolist()


def clustered_set(rng, n, u, mean_run=8):
    """Roughly ``n`` values grouped into runs of consecutive integers."""
    n = min(n, u)
    out = set()
    while len(out) < n:
        start = int(rng.integers(0, u))
        length = int(rng.geometric(1 / mean_run))
        out.update(range(start, min(u, start + length)))
    return sorted(out)[:n] if len(out) > n else sorted(out)


def random_set(rng, u, max_n=200, clustered=None):
    n = int(rng.integers(1, max(2, min(max_n, u)) + 1))
    if clustered is None:
        clustered = bool(rng.integers(2))
    return clustered_set(rng, n, u) if clustered else uniform_set(rng, n, u)


def random_query(rng, u, k, max_n=200, clustered=False, overlap=0.5):
    """``k`` sets sharing a planted common core so results are rarely empty."""
    gen = clustered_set if clustered else uniform_set
    core = gen(rng, int(rng.integers(1, max(2, max_n // 4))), u)
    sets = []
    for _ in range(k):
        keep = [x for x in core if rng.random() < 0.5 + overlap / 2]
        extra = gen(rng, int(rng.integers(1, max_n)), u)
        sets.append(sorted(set(keep) | set(extra)))
    return sets
