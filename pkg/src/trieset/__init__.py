"""Integer sets stored as compact level-wise binary tries.

Plain tries spend two bits per internal node; run tries additionally collapse
every maximal full subtree into a single ``00`` node. Both support rank,
successor, predecessor and decoding, and intersect adaptively with a
synchronised descent (sequential or multithreaded).
"""

from .bintrie import (CapabilityError, EmptyTrie, BinaryTrie, TrieFormatError, build,
                      decode, predecessor, set_rank, set_select, successor)
from .bitvec import BitVec, PairZeroDir, RankDir, RankVariant, SelectDir, rank1, rank_pairs00, select1
from .certify import Certificate, Interval, MEMBER, compute_delta, compute_xi, validate
from .corpus import DataError, SetFamily, ingest, load_family, parse_query_log, run_queries, stats
from .intersect import (IntersectionOutput, Mode, QueryError, ac_intersect, ac_intersect_runs,
                        bk_intersect, intersect_sets, tp_intersect_naive)
from .measures import (SortedSet, binom_bound, gap_measure, rle_measure, rtrie_measure,
                       shift_set, trie_measure, universe_bits)
from .parallel import ParallelPlan, par_intersect
from .runtrie import RunTrie, build_run, run_decode, run_rank

__all__ = [
    "BinaryTrie", "BitVec", "CapabilityError", "Certificate", "DataError", "EmptyTrie",
    "IntersectionOutput", "Interval", "MEMBER", "Mode", "PairZeroDir", "ParallelPlan",
    "QueryError", "RankDir", "RankVariant", "RunTrie", "SelectDir", "SetFamily", "SortedSet",
    "TrieFormatError", "ac_intersect", "ac_intersect_runs", "binom_bound", "bk_intersect",
    "build", "build_run", "compute_delta", "compute_xi", "decode", "gap_measure", "ingest",
    "intersect_sets", "load_family", "par_intersect", "parse_query_log", "predecessor",
    "rank1", "rank_pairs00", "rle_measure", "rtrie_measure", "run_decode", "run_queries",
    "run_rank", "select1", "set_rank", "set_select", "shift_set", "stats", "successor",
    "tp_intersect_naive", "trie_measure", "universe_bits", "validate",
]
