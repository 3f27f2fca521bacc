"""Synchronised descent over k tries, with instrumentation."""

import math

import numpy as np

from trieset import BinaryTrie, Mode, RunTrie, ac_intersect, bk_intersect, compute_delta

S1 = [1, 3, 7, 8, 9, 10, 11, 12]
S2 = [2, 5, 7, 12, 15]
tries = [BinaryTrie.build(s, 16, last_level_rank=True) for s in (S1, S2)]

out = ac_intersect(tries, with_ranks=True)
print("result:", out.elements())
print("ranks in (S1, S2):", out.rank_seqs)
print("nodes visited:", out.nodes_visited, "rank calls:", out.rank_calls)

# the result can also come back as a trie
print("as a trie:", ac_intersect(tries, Mode.TRIE).result.level_strings())

# work tracks the certificate size, not the input sizes
rng = np.random.default_rng(1)
u = 1 << 20
common = np.sort(rng.choice(u, 50, replace=False))
for n in (1_000, 10_000, 100_000):
    sets = [np.union1d(common, rng.choice(u, n, replace=False)).tolist() for _ in range(3)]
    delta, _ = compute_delta(sets, u)
    res = ac_intersect([BinaryTrie.build(s, u) for s in sets])
    assert res.elements() == bk_intersect(sets)
    print(f"n~{n:>6}: |result|={res.count:>3} delta={delta:>6} nodes={res.nodes_visited:>6} "
          f"nodes/(delta lg(u/delta))={res.nodes_visited / (delta * math.log2(u / delta)):.2f}")

# clustered data: run tries skip whole blocks
a = list(range(1000, 9000)) + list(range(20000, 30000))
b = list(range(5000, 25000))
plain = ac_intersect([BinaryTrie.build(x, 1 << 16) for x in (a, b)])
runs = ac_intersect([RunTrie.build(x, 1 << 16) for x in (a, b)])
print("plain nodes", plain.nodes_visited, "vs run nodes", runs.nodes_visited)
