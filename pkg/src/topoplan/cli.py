"""Command-line front end: ``topoplan build|query|verify|gen|bench|stats``.

Exit codes: 0 ok, 1 usage, 2 invalid input or index file, 3 verification
mismatch.
"""

import argparse
import json
import random
import statistics
import sys
import time
from concurrent.futures import ThreadPoolExecutor

from .embedding import EmbeddingError, parse_rotation_system
from .generate import grid, random_deletion, triangulation, with_extras
from .index import QUERIES, BuildOptions, IndexFormatError, TopoIndex
from .levels import ParameterError
from .probes import counted_topology, probes_per_item
from .verify import run_battery

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_MISMATCH = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _add_build_flags(p):
    g = p.add_argument_group("index parameters")
    g.add_argument("--f", type=_positive, help="level threshold f (default 9, or larger for huge m)")
    g.add_argument("--k", type=_positive, help="number of contraction levels (default as f)")
    g.add_argument("--f-inc", type=_positive, help="node-on-face threshold (default ceil(log2(m)^2))")
    g.add_argument("--f-cnt", type=_positive, default=16, help="explicit-count threshold (default 16)")
    g.add_argument("--f-hp", type=_positive, help="heavy-pair threshold (default ceil(sqrt(m) log2 m))")
    g.add_argument(
        "--heavy-pairs",
        nargs="?",
        const="yes",
        choices=["yes", "with-witness"],
        help="store heavy-pair matrices; =with-witness also stores witness ids",
    )
    g.add_argument("--allow-small-f", action="store_true", help="accept f < 9 (level size bounds no longer hold)")


def _options(args) -> BuildOptions:
    return BuildOptions(
        f=args.f,
        k=args.k,
        f_inc=args.f_inc,
        f_cnt=args.f_cnt,
        f_hp=args.f_hp,
        heavy_pairs=args.heavy_pairs is not None,
        with_witness=args.heavy_pairs == "with-witness",
        strict=not args.allow_small_f,
    )


def _read_input(path):
    if path == "-":
        return parse_rotation_system(sys.stdin.read())
    with open(path, encoding="utf-8") as fh:
        return parse_rotation_system(fh.read())


def _build(rs, args):
    try:
        return TopoIndex.build(rs, _options(args))
    except ParameterError as exc:
        raise UsageError(str(exc)) from exc


def _summary(ix: TopoIndex, out):
    o = ix.options
    print(f"n: {ix.n}", file=out)
    print(f"m: {ix.m}", file=out)
    print(f"faces: {ix.nfaces}", file=out)
    print(f"core payload: 4m+8 = {4 * ix.m + 8} bits (stored {ix.core.payload_bits()})", file=out)
    print(f"params: f={o.f} k={o.k} f_inc={o.f_inc} f_cnt={o.f_cnt} f_hp={o.f_hp} heavy_pairs={o.heavy_pairs} witness={o.with_witness}", file=out)
    for name, bits in ix.space_report().items():
        if name != "core_payload":
            print(f"{name}: {bits:.0f} bits" if isinstance(bits, float) else f"{name}: {bits} bits", file=out)
    for name, ml in (("primal", ix.primal), ("dual", ix.dual)):
        print(f"{name} levels (i, n_i, m_i, |S_i|, angle pairs):", file=out)
        for i, (n_i, m_i, s_i, a_i) in enumerate(ml.level_sizes()):
            print(f"  {i} {n_i} {m_i} {s_i} {a_i}", file=out)
        state = "truncated (no survivors)" if ml.stats["truncated"] else f"{ml.stats['top_edges']} edges in top dictionary"
        print(f"  top: {state}", file=out)


# -- commands -------------------------------------------------------------------------
def cmd_build(args):
    rs = _read_input(args.input)
    ix = _build(rs, args)
    ix.save(args.output)
    _summary(ix, sys.stdout)
    return EXIT_OK


def _format(name, result):
    shape = QUERIES[name][1]
    if shape == "bool":
        return ["true" if result else "false"]
    if shape == "edge":
        return ["none" if result is None else str(result)]
    if shape == "witness":
        ans, wit = result
        return ["true" if ans else "false"] + ([str(wit)] if ans and wit is not None else [])
    if shape == "tuple":
        return [str(v) for v in result]
    if shape == "pairs":
        return [f"{a} {b}" for a, b in result]
    if shape == "list":
        return [str(v) for v in result]
    return [str(result)]


def _run_query(ix, name, qargs, distinct):
    if name not in QUERIES:
        raise UsageError(f"unknown query {name!r}; known: {', '.join(sorted(QUERIES))}")
    try:
        return _format(name, ix.query(name, *qargs, distinct=distinct))
    except (TypeError, ValueError, IndexError, KeyError) as exc:
        raise UsageError(f"{name}: {exc}") from exc


def cmd_query(args):
    ix = TopoIndex.load(args.index)
    if args.batch:
        with open(args.batch, encoding="utf-8") as fh:
            jobs = [line.split() for line in fh if line.strip() and not line.startswith("#")]
        # the loaded index is immutable, so readers can share it
        with ThreadPoolExecutor(max_workers=args.workers) as pool:
            outs = list(pool.map(lambda j: _run_query(ix, j[0], j[1:], args.distinct), jobs))
        for lines in outs:
            print("\n".join(lines))
        return EXIT_OK
    if not args.op:
        raise UsageError("query needs an operation name or --batch")
    print("\n".join(_run_query(ix, args.op, args.args, args.distinct)))
    return EXIT_OK


def cmd_verify(args):
    rs = _read_input(args.input)
    ix = TopoIndex.load(args.index) if args.index else _build(rs, args)
    rep = run_battery(ix, rs, budget=args.budget, seed=args.seed)
    for line in rep.lines(details=args.details):
        print(line)
    print(f"overall: {'PASS' if rep.ok else 'FAIL'} ({rep.total_checked} checks)")
    return EXIT_OK if rep.ok else EXIT_MISMATCH


def cmd_gen(args):
    p = args.params
    try:
        if args.kind == "grid":
            if len(p) != 2:
                raise UsageError("gen grid ROWS COLS")
            rs = grid(p[0], p[1])
        elif args.kind == "triangulation":
            if len(p) != 1:
                raise UsageError("gen triangulation N")
            rs = triangulation(p[0], args.seed)
        else:
            if len(p) != 2:
                raise UsageError("gen random-deletion ROWS COLS [--fraction F]")
            rs = random_deletion(p[0], p[1], args.fraction, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.loops or args.parallels:
        rs = with_extras(rs, args.loops, args.parallels, args.seed)
    text = rs.to_text()
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


_BENCH_PAIR_OPS = {"neighbor": "primal", "faces-adjacent": "dual"}
_BENCH_LIST_OPS = ("list-node-edges", "list-node-faces", "list-face-nodes", "list-face-edges", "list-face-faces")


def cmd_bench(args):
    ix = TopoIndex.load(args.index)
    ops = [o for o in args.ops.split(",") if o] if args.ops else []
    rng = random.Random(args.seed)
    rows = []
    ctopo, counter = counted_topology(ix.core)
    for op in ops:
        lat, probes = [], []
        if op in _BENCH_PAIR_OPS:
            ml = getattr(ix, _BENCH_PAIR_OPS[op])
            N = ml.base.count
            for _ in range(args.queries):
                a, b = rng.randint(1, N), rng.randint(1, N)
                t = time.perf_counter()
                _, pr = ml.trace(a, b)
                lat.append(time.perf_counter() - t)
                probes.append(pr)
        elif op in _BENCH_LIST_OPS:
            N = ix.n if "node" in op.split("-")[1] else ix.nfaces
            name = op.replace("-", "_")
            for _ in range(args.queries):
                v = rng.randint(1, N)
                t = time.perf_counter()
                items, worst = probes_per_item(ctopo, counter, name, v)
                lat.append(time.perf_counter() - t)
                probes.append(worst)
        elif op in QUERIES:
            kinds = QUERIES[op][0]
            for _ in range(args.queries):
                qa = [_random_arg(ix, k, rng) for k in kinds]
                t = time.perf_counter()
                ix.query(op, *qa)
                lat.append(time.perf_counter() - t)
        else:
            raise UsageError(f"unknown bench operation {op!r}")
        rows.append(
            {
                "op": op,
                "queries": len(lat),
                "mean_us": round(1e6 * statistics.fmean(lat), 3) if lat else None,
                "median_us": round(1e6 * statistics.median(lat), 3) if lat else None,
                "mean_probes": round(statistics.fmean(probes), 3) if probes else None,
                "max_probes": max(probes) if probes else None,
                "probe_unit": "per item" if op in _BENCH_LIST_OPS else "per query",
            }
        )
    o = ix.options
    bound = 8 * (o.k + o.f)
    if args.json:
        print(json.dumps({"bound_8_k_plus_f": bound, "rows": rows}))
    else:
        print("op\tqueries\tmean_us\tmedian_us\tmean_probes\tmax_probes\tprobe_unit")
        for r in rows:
            print("\t".join(str(r[k]) for k in ("op", "queries", "mean_us", "median_us", "mean_probes", "max_probes", "probe_unit")))
        if rows:
            print(f"# probe bound 8(k+f) = {bound}")
    return EXIT_OK


def _random_arg(ix, kind, rng):
    if kind == "n":
        return rng.randint(1, ix.n)
    if kind == "x":
        return rng.randint(1, ix.nfaces)
    if kind == "k":
        return rng.choice(("edges", "nodes", "faces"))
    return rng.randint(3, ix.core.length - 2)


def cmd_stats(args):
    ix = TopoIndex.load(args.index)
    _summary(ix, sys.stdout)
    return EXIT_OK


def make_parser():
    p = _Parser(prog="topoplan", description="Compact planar-embedding index with topological queries.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("build", help="build an index file from a PLANAREMB input")
    b.add_argument("input", help="PLANAREMB file, or - for stdin")
    b.add_argument("output", help="index file to write")
    _add_build_flags(b)
    b.set_defaults(func=cmd_build)

    q = sub.add_parser("query", help="answer one query (or a batch) from an index file")
    q.add_argument("index")
    q.add_argument("op", nargs="?", help=f"one of: {', '.join(QUERIES)}")
    q.add_argument("args", nargs="*")
    q.add_argument("--distinct", action="store_true", help="count distinct nodes/faces in count-node/count-face")
    q.add_argument("--batch", help="file with one 'op args...' per line")
    q.add_argument("--workers", type=_positive, default=4, help="reader threads for --batch")
    q.set_defaults(func=cmd_query)

    v = sub.add_parser("verify", help="compare every query family with the brute-force oracle")
    v.add_argument("input", help="PLANAREMB file")
    v.add_argument("--index", help="check this saved index instead of building one")
    v.add_argument("--budget", type=_positive, default=100_000, help="exhaustive up to this many tuples, else sample this many")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--details", type=int, default=3, help="mismatches shown per family")
    _add_build_flags(v)
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("gen", help="write a synthetic planar embedding")
    g.add_argument("kind", choices=["grid", "triangulation", "random-deletion"])
    g.add_argument("params", type=int, nargs="+", help="ROWS COLS for grids, N for triangulations")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--fraction", type=float, default=0.3, help="share of non-tree edges deleted (random-deletion)")
    g.add_argument("--loops", type=int, default=0, help="self-loops to add")
    g.add_argument("--parallels", type=int, default=0, help="parallel edges to add")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    be = sub.add_parser("bench", help="latency and probe statistics for a query workload")
    be.add_argument("index")
    be.add_argument("--ops", default="neighbor,faces-adjacent", help="comma-separated operations (empty for none)")
    be.add_argument("--queries", type=int, default=1000, help="queries per operation")
    be.add_argument("--seed", type=int, default=0)
    be.add_argument("--json", action="store_true", help="one JSON document instead of TSV")
    be.set_defaults(func=cmd_bench)

    s = sub.add_parser("stats", help="print sizes and space accounting of an index file")
    s.add_argument("index")
    s.set_defaults(func=cmd_stats)
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"topoplan: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (EmbeddingError, IndexFormatError) as exc:
        print(f"topoplan: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except FileNotFoundError as exc:
        print(f"topoplan: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
