"""Command-line front end: build, stats, query, certify, bench.

Exit status is 0 on success, 1 for usage errors and 2 for bad input data.
"""

import argparse
import json
import sys

from .bintrie import CapabilityError, TrieFormatError
from .certify import compute_delta, compute_xi
from .corpus import (STATS_COLUMNS, DataError, ingest, load_family,
                     parse_query_log, run_queries, stats, stats_records)
from .intersect import Mode, QueryError

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _threads(text):
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError("must be >= 0 (0 picks the CPU count)")
    return n


def _family_options(p, build=False):
    p.add_argument("--kind", choices=("trie", "rtrie"), default="trie")
    p.add_argument("--rank", choices=("dense", "sparse", "interleaved"), default=None,
                   help="rank directory layout (default dense; overrides a saved family)")
    p.add_argument("--min-size", type=int, default=1, metavar="K",
                   help="drop sets with fewer than K elements when ingesting")
    p.add_argument("--universe", type=int, default=None, metavar="U",
                   help="universe size (default: next power of two above the largest value)")
    if build:
        p.add_argument("--jobs", type=int, default=1, help="threads used to build tries")


def _query_options(p):
    p.add_argument("--mode", choices=("array", "trie"), default="array")
    p.add_argument("--threads", type=_threads, default=1, metavar="N")
    p.add_argument("--with-ranks", action="store_true",
                   help="also report the per-set rank of every result")


def make_parser():
    parser = _Parser(prog="trieset", description="Binary-trie integer sets.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("build", help="ingest a set file and save a family")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True)
    _family_options(p, build=True)
    p.add_argument("--with-ranks", action="store_true",
                   help="store a rank directory on the last level too")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("stats", help="space usage in bits per integer")
    p.add_argument("family")
    _family_options(p)
    p.add_argument("--json", action="store_true")

    for name, text in (("query", "replay a query log"),
                       ("bench", "time a query log (warmup plus median of repeats)")):
        p = sub.add_parser(name, help=text)
        p.add_argument("family")
        p.add_argument("log")
        _family_options(p)
        _query_options(p)
        p.add_argument("--parallel-queries", type=int, default=1, metavar="N")
        p.add_argument("--warmup", type=int, default=3)
        p.add_argument("--repeats", type=int, default=5)
        p.add_argument("--json", action="store_true")
        if name == "query":
            p.add_argument("--certify", action="store_true", help="also compute delta and xi")
            p.add_argument("--dump", metavar="FILE", help="write result elements, one query per line")

    p = sub.add_parser("certify", help="partition certificates for one query")
    p.add_argument("family")
    p.add_argument("names", nargs="+")
    _family_options(p)
    p.add_argument("--json", action="store_true")
    return parser


def _load(args):
    fam = load_family(args.family, u=args.universe, kind=args.kind,
                      rank=args.rank or "dense", min_size=args.min_size)
    if args.rank and fam.rank.name.lower() != args.rank:
        fam = fam.with_options(rank=args.rank)
    return fam


def _fmt(v):
    if v is None:
        return "-"
    if isinstance(v, float):
        return f"{v:.4f}"
    return str(v)


def _table(records, columns, out):
    out.write("\t".join(columns) + "\n")
    for rec in records:
        out.write("\t".join(_fmt(rec[c]) for c in columns) + "\n")


def cmd_build(args, out):
    fam = ingest(args.input, u=args.universe, kind=args.kind, rank=args.rank or "dense",
                 min_size=args.min_size, last_level_rank=args.with_ranks, jobs=args.jobs)
    data = fam.to_bytes()
    with open(args.output, "wb") as fh:
        fh.write(data)
    info = {"sets": len(fam), "universe": fam.u, "kind": fam.kind,
            "rank": fam.rank.name.lower(), "bytes": len(data)}
    if args.json:
        json.dump(info, out)
        out.write("\n")
    else:
        out.write(" ".join(f"{k}={v}" for k, v in info.items()) + "\n")


def cmd_stats(args, out):
    fam = _load(args)
    records = stats_records(*stats(fam))
    if args.json:
        json.dump({"universe": fam.u, "kind": fam.kind, "rank": fam.rank.name.lower(),
                   "sets": records}, out, indent=1)
        out.write("\n")
    else:
        _table(records, STATS_COLUMNS, out)


def _replay(args, certificates=False, keep=False):
    fam = _load(args)
    with open(args.log) as fh:
        queries = parse_query_log(fh)
    return run_queries(fam, queries, mode=Mode.parse(args.mode), threads=args.threads,
                       with_ranks=args.with_ranks, certificates=certificates,
                       keep_results=keep, warmup=args.warmup, repeats=args.repeats,
                       parallel_queries=args.parallel_queries)


def _emit_report(report, args, out, columns):
    if args.json:
        json.dump(report.to_dict(), out, indent=1)
        out.write("\n")
        return
    out.write("\t".join(columns) + "\n")
    for r in report.results:
        row = {"query": " ".join(r.names), "size": r.size, "time_ns": r.time_ns,
               "nodes": r.nodes_visited, "rank_calls": r.rank_calls,
               "delta": r.delta, "xi": r.xi, "error": r.error}
        out.write("\t".join(_fmt(row[c]) for c in columns) + "\n")
    for k, v in report.summary().items():
        out.write(f"# {k}\t{_fmt(v)}\n")


def cmd_query(args, out):
    report = _replay(args, certificates=args.certify, keep=True)
    if args.dump:
        with open(args.dump, "w") as fh:
            for r in report.results:
                fh.write(" ".join(map(str, r.elements or [])) + "\n")
    cols = ["query", "size", "time_ns", "nodes", "rank_calls"]
    if args.certify:
        cols += ["delta", "xi"]
    _emit_report(report, args, out, cols + ["error"])


def cmd_bench(args, out):
    report = _replay(args)
    _emit_report(report, args, out, ["query", "size", "time_ns", "nodes", "error"])


def cmd_certify(args, out):
    if len(args.names) < 2:
        raise UsageError("a query needs at least two set names")
    fam = _load(args)
    missing = [n for n in args.names if n not in fam]
    if missing:
        raise DataError(f"unknown set name(s): {', '.join(missing)}")
    sets = [fam.decode(n).tolist() for n in args.names]
    delta, dcert = compute_delta(sets, fam.u)
    xi, xcert = compute_xi(sets, fam.u)
    result = sorted(set.intersection(*map(set, sets)))
    label = lambda iv: "member" if iv.is_member else args.names[iv.label]  # noqa: E731
    if args.json:
        json.dump({"delta": delta, "xi": xi, "result_size": len(result),
                   "delta_intervals": [[iv.lo, iv.hi, label(iv)] for iv in dcert.intervals],
                   "xi_intervals": [[iv.lo, iv.hi, label(iv)] for iv in xcert.intervals]},
                  out, indent=1)
        out.write("\n")
        return
    out.write(f"delta\t{delta}\nxi\t{xi}\nresult_size\t{len(result)}\n")
    for tag, cert in (("delta", dcert), ("xi", xcert)):
        for iv in cert.intervals:
            out.write(f"{tag}\t{iv.lo}\t{iv.hi}\t{label(iv)}\n")


COMMANDS = {"build": cmd_build, "stats": cmd_stats, "query": cmd_query,
            "certify": cmd_certify, "bench": cmd_bench}


def main(argv=None, out=None):
    out = out or sys.stdout
    args = make_parser().parse_args(argv)
    try:
        COMMANDS[args.command](args, out)
    except (DataError, TrieFormatError, QueryError, OSError, ValueError) as exc:
        print(f"trieset: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (UsageError, CapabilityError) as exc:
        print(f"trieset: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
