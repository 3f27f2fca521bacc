"""Set families: ingestion, persistence, query replay and space statistics.

Text sets: one set per line, ``name: v1 v2 ...`` in strictly increasing order.
Binary sets: ``SETF``, u64 count, u64 universe, then per set a u16 name
length, the UTF-8 name, u64 n and n little-endian u32 values.
Family files: ``TFAM``, u16 version, u64 universe, u8 kind, u8 directory tag,
u32 count, then per set a u16 name length, the name, a u64 blob length and the
serialized trie (length 0 marks an empty set).
Query logs: one query per line, whitespace-separated set names.
"""

import struct
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .bintrie import BinaryTrie, TrieFormatError
from .bitvec import RankVariant
from .certify import compute_delta, compute_xi
from .intersect import Mode, ac_intersect
from .measures import (SortedSet, binom_bound, gap_measure, rle_measure,
                       rtrie_measure, trie_measure, universe_bits)
from .parallel import par_intersect, resolve_threads
from .runtrie import RunTrie

SETS_MAGIC = b"SETF"
FAMILY_MAGIC = b"TFAM"
FAMILY_VERSION = 1
KINDS = {"trie": BinaryTrie, "rtrie": RunTrie}
_KIND_TAGS = {"trie": 0, "rtrie": 1}


class DataError(ValueError):
    """Bad input data (as opposed to bad command-line usage)."""


# raw set formats ---------------------------------------------------------

def parse_text_sets(lines, u=None):
    """Yield ``(name, values)`` pairs; ``u`` bounds the values if given."""
    for no, line in enumerate(lines, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        name, sep, rest = line.partition(":")
        name = name.strip()
        if not sep or not name:
            raise DataError(f"line {no}: expected 'name: v1 v2 ...'")
        try:
            values = [int(tok) for tok in rest.split()]
        except ValueError as exc:
            raise DataError(f"line {no}: {exc}") from None
        for a, b in zip(values, values[1:]):
            if b <= a:
                raise DataError(f"line {no}: values must be strictly increasing ({a} then {b})")
        if values and values[0] < 0:
            raise DataError(f"line {no}: negative value {values[0]}")
        if u is not None and values and values[-1] >= u:
            raise DataError(f"line {no}: value {values[-1]} outside universe [0, {u})")
        yield name, values


def write_binary_sets(sets, u):
    out = [SETS_MAGIC, struct.pack("<QQ", len(sets), u)]
    for name, values in sets:
        raw = name.encode()
        arr = np.asarray(values, dtype="<u4")
        out.append(struct.pack("<H", len(raw)) + raw + struct.pack("<Q", arr.size) + arr.tobytes())
    return b"".join(out)


def read_binary_sets(data):
    """Return ``(u, [(name, values), ...])`` from the binary set format."""
    if data[:4] != SETS_MAGIC:
        raise DataError("not a binary set file")
    try:
        count, u = struct.unpack_from("<QQ", data, 4)
        off = 20
        sets = []
        for idx in range(count):
            (nlen,) = struct.unpack_from("<H", data, off)
            off += 2
            name = data[off:off + nlen].decode()
            off += nlen
            (n,) = struct.unpack_from("<Q", data, off)
            off += 8
            if off + 4 * n > len(data):
                raise DataError(f"set {idx}: truncated values")
            values = np.frombuffer(data, dtype="<u4", count=n, offset=off).astype(np.int64)
            off += 4 * n
            if n > 1 and not np.all(values[1:] > values[:-1]):
                raise DataError(f"set {idx} ({name}): values must be strictly increasing")
            if n and values[-1] >= u:
                raise DataError(f"set {idx} ({name}): value {values[-1]} outside universe [0, {u})")
            sets.append((name, values.tolist()))
    except struct.error as exc:
        raise DataError(f"truncated binary set file: {exc}") from None
    if off != len(data):
        raise DataError("trailing bytes after binary set file")
    return u, sets


def default_universe(sets):
    top = max((v[-1] for _, v in sets if v), default=0)
    return max(2, 1 << (top).bit_length())


# families ---------------------------------------------------------------

class SetFamily:
    """Named sets over one universe, stored as tries of a single kind."""

    def __init__(self, u, kind="trie", rank=RankVariant.DENSE, last_level_rank=False):
        if kind not in KINDS:
            raise ValueError(f"unknown trie kind {kind!r}")
        universe_bits(u)
        self.u = int(u)
        self.kind = kind
        self.rank = RankVariant.parse(rank)
        self.last_level_rank = bool(last_level_rank)
        self.entries = {}

    @property
    def trie_class(self):
        return KINDS[self.kind]

    def add(self, name, values):
        if name in self.entries:
            raise DataError(f"duplicate set name {name!r}")
        s = SortedSet.of(values, self.u)
        self.entries[name] = self._build(s) if s.n else None

    def _build(self, s):
        return self.trie_class.build(s, rank=self.rank, last_level_rank=self.last_level_rank)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __contains__(self, name):
        return name in self.entries

    def __getitem__(self, name):
        return self.entries[name]

    def decode(self, name):
        t = self.entries[name]
        return SortedSet([], self.u) if t is None else t.decode()

    def with_options(self, rank=None, last_level_rank=None):
        fam = SetFamily(self.u, self.kind,
                        self.rank if rank is None else rank,
                        self.last_level_rank if last_level_rank is None else last_level_rank)
        for name, t in self.entries.items():
            fam.entries[name] = None if t is None else t.with_options(
                rank=fam.rank, last_level_rank=fam.last_level_rank)
        return fam

    def to_bytes(self):
        tag = int(self.rank) | (0x10 if self.last_level_rank else 0)
        out = [FAMILY_MAGIC, struct.pack("<HQBBI", FAMILY_VERSION, self.u,
                                         _KIND_TAGS[self.kind], tag, len(self.entries))]
        for name, t in self.entries.items():
            raw = name.encode()
            blob = b"" if t is None else t.to_bytes()
            out.append(struct.pack("<H", len(raw)) + raw + struct.pack("<Q", len(blob)) + blob)
        return b"".join(out)

    @classmethod
    def from_bytes(cls, data):
        if data[:4] != FAMILY_MAGIC:
            raise DataError("not a family file")
        try:
            version, u, kind_tag, tag, count = struct.unpack_from("<HQBBI", data, 4)
            if version != FAMILY_VERSION:
                raise DataError(f"unsupported family version {version}")
            kind = {v: k for k, v in _KIND_TAGS.items()}.get(kind_tag)
            if kind is None:
                raise DataError(f"unknown kind tag {kind_tag}")
            fam = cls(u, kind, RankVariant(tag & 0x0F), bool(tag & 0x10))
            off = 4 + struct.calcsize("<HQBBI")
            for _ in range(count):
                (nlen,) = struct.unpack_from("<H", data, off)
                off += 2
                name = data[off:off + nlen].decode()
                off += nlen
                (blen,) = struct.unpack_from("<Q", data, off)
                off += 8
                blob = data[off:off + blen]
                if len(blob) != blen:
                    raise DataError(f"set {name!r}: truncated trie")
                off += blen
                t = fam.trie_class.from_bytes(blob) if blen else None
                if t is not None and t.u != u:
                    raise DataError(f"set {name!r}: universe {t.u} differs from family {u}")
                fam.entries[name] = t
        except (struct.error, TrieFormatError) as exc:
            raise DataError(f"corrupt family file: {exc}") from None
        if off != len(data):
            raise DataError("trailing bytes after family file")
        return fam

    def save(self, path):
        with open(path, "wb") as fh:
            fh.write(self.to_bytes())

    @classmethod
    def load(cls, path):
        with open(path, "rb") as fh:
            return cls.from_bytes(fh.read())


def build_family(sets, u=None, kind="trie", rank=RankVariant.DENSE, min_size=1,
                 last_level_rank=False, jobs=1):
    """Family from ``(name, values)`` pairs; sets smaller than ``min_size`` are dropped."""
    sets = [(name, v) for name, v in sets if len(v) >= min_size]
    if u is None:
        u = default_universe(sets)
    fam = SetFamily(u, kind, rank, last_level_rank)
    names = [name for name, _ in sets]
    if len(set(names)) != len(names):
        dup = next(n for n in names if names.count(n) > 1)
        raise DataError(f"duplicate set name {dup!r}")
    try:
        ordered = [SortedSet(v, u) for _, v in sets]
    except ValueError as exc:
        raise DataError(str(exc)) from None
    build = lambda s: fam._build(s) if s.n else None  # noqa: E731
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            tries = list(pool.map(build, ordered))
    else:
        tries = [build(s) for s in ordered]
    fam.entries = dict(zip(names, tries))
    return fam


def ingest(path, u=None, kind="trie", rank=RankVariant.DENSE, min_size=1,
           last_level_rank=False, jobs=1):
    """Read a text or binary set file and build a family."""
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:4] == SETS_MAGIC:
        file_u, sets = read_binary_sets(data)
        if u is not None and u != file_u:
            raise DataError(f"universe {u} does not match the file's {file_u}")
        u = file_u
    else:
        try:
            text = data.decode()
        except UnicodeDecodeError:
            raise DataError("set file is neither text nor the binary set format") from None
        sets = list(parse_text_sets(text.splitlines(), u))
    return build_family(sets, u, kind, rank, min_size, last_level_rank, jobs)


def load_family(path, **ingest_options):
    """A saved family, or a raw set file ingested on the fly."""
    with open(path, "rb") as fh:
        magic = fh.read(4)
    if magic == FAMILY_MAGIC:
        return SetFamily.load(path)
    return ingest(path, **ingest_options)


def parse_query_log(lines):
    queries = []
    for no, line in enumerate(lines, 1):
        names = line.split()
        if not names:
            continue
        if len(names) < 2:
            raise DataError(f"line {no}: a query needs at least two set names")
        queries.append(names)
    return queries


# query replay -------------------------------------------------------------

@dataclass
class QueryResult:
    names: list
    size: int = 0
    time_ns: int = 0
    nodes_visited: int = 0
    rank_calls: int = 0
    delta: int = None
    xi: int = None
    elements: list = None
    rank_seqs: list = None
    error: str = None


@dataclass
class QueryReport:
    results: list = field(default_factory=list)

    @property
    def ok(self):
        return [r for r in self.results if r.error is None]

    def summary(self):
        times = np.array([r.time_ns for r in self.ok], dtype=np.float64)
        if not times.size:
            return {"queries": len(self.results), "errors": len(self.results)}
        return {
            "queries": len(self.results),
            "errors": len(self.results) - len(self.ok),
            "mean_ns": float(times.mean()),
            "p50_ns": float(np.percentile(times, 50)),
            "p90_ns": float(np.percentile(times, 90)),
            "p99_ns": float(np.percentile(times, 99)),
            "mean_nodes": float(np.mean([r.nodes_visited for r in self.ok])),
            "total_results": int(sum(r.size for r in self.ok)),
        }

    def to_dict(self):
        return {"summary": self.summary(), "queries": [asdict(r) for r in self.results]}


def run_query(family, names, mode=Mode.ARRAY, threads=1, with_ranks=False,
              certificates=False, keep_results=True, warmup=0, repeats=1):
    res = QueryResult(list(names))
    missing = [n for n in names if n not in family]
    if missing:
        res.error = f"unknown set name(s): {', '.join(missing)}"
        return res
    tries = [family[n] for n in names]
    if with_ranks and not family.last_level_rank:
        tries = [t if t is None else t.with_options(last_level_rank=True) for t in tries]
    if certificates:
        sets = [family.decode(n).tolist() for n in names]
        res.delta, _ = compute_delta(sets, family.u)
        res.xi, _ = compute_xi(sets, family.u)
    if any(t is None for t in tries):
        if keep_results:
            res.elements = []
        return res
    if threads == 1:
        call = lambda: ac_intersect(tries, mode, with_ranks)  # noqa: E731
    else:
        call = lambda: par_intersect(tries, threads, mode, with_ranks)  # noqa: E731
    for _ in range(warmup):
        call()
    samples = []
    for _ in range(max(1, repeats)):
        t0 = time.perf_counter_ns()
        out = call()
        samples.append(time.perf_counter_ns() - t0)
    res.time_ns = int(np.median(samples))
    res.size = out.count
    res.nodes_visited = out.nodes_visited
    res.rank_calls = out.rank_calls
    if keep_results:
        res.elements = out.elements()
        res.rank_seqs = out.rank_seqs
    return res


def run_queries(family, queries, mode=Mode.ARRAY, threads=1, with_ranks=False,
                certificates=False, keep_results=True, warmup=3, repeats=5,
                parallel_queries=1):
    """Replay ``queries`` against ``family``; failures become error entries."""
    mode = Mode.parse(mode)
    threads = resolve_threads(threads)

    def one(names):
        return run_query(family, names, mode, threads, with_ranks, certificates,
                         keep_results, warmup, repeats)

    if parallel_queries > 1:
        with ThreadPoolExecutor(max_workers=parallel_queries) as pool:
            return QueryReport(list(pool.map(one, queries)))
    return QueryReport([one(q) for q in queries])


# statistics ---------------------------------------------------------------

@dataclass
class SetStats:
    name: str
    n: int
    gap: int
    rle: int
    trie: int
    rtrie: int
    binom: int
    payload_bits: int
    directory_bits: int
    serialized_bytes: int

    @property
    def stored_bits(self):
        return self.payload_bits + self.directory_bits

    def bpi(self):
        n = self.n
        if not n:
            return None
        return {
            "gap": self.gap / n, "rle": self.rle / n, "trie": self.trie / n,
            "rtrie": self.rtrie / n, "binom": self.binom / n,
            "payload": self.payload_bits / n, "stored": self.stored_bits / n,
        }


def set_stats(name, trie, u):
    if trie is None:
        return SetStats(name, 0, 0, 0, 0, 0, 0, 0, 0, 0)
    s = trie.decode()
    ell = universe_bits(u)
    return SetStats(
        name=name, n=s.n, gap=gap_measure(s), rle=rle_measure(s),
        trie=trie_measure(s), rtrie=rtrie_measure(s), binom=binom_bound(s.n, 1 << ell),
        payload_bits=trie.payload_bits, directory_bits=trie.directory_bits,
        serialized_bytes=len(trie.to_bytes()))


def stats(family):
    """Per-set rows plus an aggregate row (totals over all nonempty sets)."""
    rows = [set_stats(name, t, family.u) for name, t in family.entries.items()]
    agg = SetStats("TOTAL", *(sum(getattr(r, f) for r in rows) for f in
                              ("n", "gap", "rle", "trie", "rtrie", "binom",
                               "payload_bits", "directory_bits", "serialized_bytes")))
    return rows, agg


STATS_COLUMNS = ("name", "n", "gap_bpi", "rle_bpi", "trie_bpi", "rtrie_bpi",
                 "binom_bpi", "payload_bpi", "stored_bpi", "payload_bits",
                 "directory_bits", "serialized_bytes")


def stats_records(rows, agg):
    records = []
    for r in list(rows) + [agg]:
        b = r.bpi() or {}
        records.append({
            "name": r.name, "n": r.n,
            "gap_bpi": b.get("gap"), "rle_bpi": b.get("rle"), "trie_bpi": b.get("trie"),
            "rtrie_bpi": b.get("rtrie"), "binom_bpi": b.get("binom"),
            "payload_bpi": b.get("payload"), "stored_bpi": b.get("stored"),
            "payload_bits": r.payload_bits, "directory_bits": r.directory_bits,
            "serialized_bytes": r.serialized_bytes,
        })
    return records
