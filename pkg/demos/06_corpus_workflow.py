"""Ingest a set file, persist the family, replay queries, report space."""

import subprocess
import sys
import tempfile
from pathlib import Path

import numpy as np

from trieset import SetFamily, ingest, run_queries, stats
from trieset.corpus import stats_records, write_binary_sets

rng = np.random.default_rng(3)
u = 1 << 18
# every set shares a small planted core so that queries have answers
core = rng.choice(u, 64, replace=False)
sets = [(f"term{i}",
         np.union1d(core, rng.integers(0, u, int(rng.integers(100, 5000)))).tolist())
        for i in range(40)]

with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    (tmp / "sets.bin").write_bytes(write_binary_sets(sets, u))
    fam = ingest(tmp / "sets.bin", kind="trie", rank="sparse", min_size=200)
    print(len(fam), "sets kept of", len(sets))

    fam.save(tmp / "index.tfam")
    again = SetFamily.load(tmp / "index.tfam")
    print("round trip identical:", again.to_bytes() == fam.to_bytes())

    names = list(fam)
    log = [list(rng.choice(names, 3, replace=False)) for _ in range(20)]
    report = run_queries(again, log, certificates=True)
    print({k: round(v, 1) for k, v in report.summary().items()})

    rows, agg = stats(again)
    total = stats_records(rows, agg)[-1]
    print(f"trie {total['trie_bpi']:.2f} bpi, stored {total['stored_bpi']:.2f} bpi, "
          f"B(n,u) {total['binom_bpi']:.2f} bpi")

    # the same through the command line
    (tmp / "q.txt").write_text("\n".join(" ".join(q) for q in log[:3]) + "\n")
    cmd = [sys.executable, "-m", "trieset", "query", str(tmp / "index.tfam"), str(tmp / "q.txt"),
           "--threads", "2", "--repeats", "1"]
    print(subprocess.run(cmd, capture_output=True, text=True, check=True).stdout)
