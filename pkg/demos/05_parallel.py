"""Split the descent across worker threads; output bytes do not change."""

import numpy as np

from trieset import BinaryTrie, Mode, ParallelPlan, ac_intersect, par_intersect
from trieset.intersect import Traversal

rng = np.random.default_rng(2)
u = 1 << 20
sets = [np.unique(rng.integers(0, u, 40_000)).tolist() for _ in range(3)]
tries = [BinaryTrie.build(s, u) for s in sets]

plan = ParallelPlan(Traversal(tries), 8)
print("top-trie depth c =", plan.c, "seeds =", len(plan.seeds))
print("seeds per worker:", [len(c) for c in plan.assignment()])

reference = ac_intersect(tries, Mode.TRIE).result.to_bytes()
for t in (1, 2, 4, 8):
    out = par_intersect(tries, t, Mode.TRIE)
    print(f"t={t}: {out.count} results, identical bytes: {out.result.to_bytes() == reference}")
