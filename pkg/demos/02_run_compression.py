"""Runs of consecutive values collapse into single 00 nodes."""

import numpy as np

from trieset import build, build_run
from trieset.measures import (SortedSet, binom_bound, gap_measure, rle_measure,
                              rtrie_measure, trie_measure)

S = [1, 3, 7, 8, 9, 10, 11, 12]
plain, runs = build(S, 16), build_run(S, 16)
print("plain:", plain.level_strings())
print("runs: ", runs.level_strings())   # the 8..11 block is one 00 node
print("one-bits", plain.one_bits, "->", runs.one_bits)

# a clustered set of ~2000 values in a million-element universe
rng = np.random.default_rng(0)
starts = np.sort(rng.choice(1 << 20, 60, replace=False))
xs = np.unique(np.concatenate([np.arange(s, s + rng.integers(5, 60)) for s in starts]))
xs = xs[xs < 1 << 20]
s = SortedSet(xs, 1 << 20)

print(f"\nn = {s.n}, bits per integer:")
for name, bits in [("gap", gap_measure(s)), ("rle", rle_measure(s)),
                   ("trie", trie_measure(s)), ("rtrie", rtrie_measure(s)),
                   ("B(n,u)", binom_bound(s.n, 1 << 20))]:
    print(f"  {name:7s} {bits / s.n:6.3f}")

t = build_run(s, last_level_rank=True)
print("rank of the 1000th element:", t.rank(int(xs[999])))
assert t.decode().tolist() == xs.tolist()
