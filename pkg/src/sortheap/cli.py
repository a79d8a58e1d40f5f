"""Command line: ``sortheap bench | gen | dijkstra``."""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import workload as wl
from .bench import RunConfig, bench
from .graph import ingest_dimacs, reference_dijkstra, run_dijkstra
from .rank import RankParams


def _rank(text: str) -> RankParams:
    try:
        w, t = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected --rank w,t") from None
    return RankParams(w, t)


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"{text} is not positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sortheap", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bench", help="run a workload and write per-operation CSV")
    b.add_argument("--heap", choices=["sort", "pairing"], default="sort")
    b.add_argument("--strategy", choices=["eager", "model"], default="eager")
    b.add_argument("--workload", default="rounds",
                   help="rounds | monotonic | heapsort | dijkstra | file:<path>")
    b.add_argument("--n", type=_positive, default=1024)
    b.add_argument("--rounds", type=int, default=1000)
    b.add_argument("--seed", type=int, default=1)
    b.add_argument("--audit", action="store_true", help="price every op with the potential")
    b.add_argument("--vm", action="store_true", help="run Extract-Min as a VM program")
    b.add_argument("--rank", type=_rank, metavar="W,T", help="track ranks and marks")
    b.add_argument("--c", type=float, default=64.0, help="audit constant")
    b.add_argument("--csv", dest="csv_path", required=True)
    b.add_argument("--save-workload", dest="workload_out")

    g = sub.add_parser("gen", help="write a workload file")
    g.add_argument("--workload", choices=["rounds", "monotonic", "heapsort"], default="rounds")
    g.add_argument("--n", type=_positive, default=1024)
    g.add_argument("--rounds", type=int, default=1000)
    g.add_argument("--seed", type=int, default=1)
    g.add_argument("--out", required=True)

    d = sub.add_parser("dijkstra", help="shortest paths on a DIMACS .gr file")
    d.add_argument("graph")
    d.add_argument("--source", type=_positive, default=1)
    d.add_argument("--heap", choices=["sort", "pairing", "reference"], default="sort")
    d.add_argument("--strategy", choices=["eager", "model"], default="eager")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "bench":
        try:
            cfg = RunConfig(heap=args.heap, strategy=args.strategy, workload=args.workload,
                            n=args.n, rounds=args.rounds, seed=args.seed, audit=args.audit,
                            vm=args.vm, rank=args.rank, csv_path=args.csv_path,
                            workload_out=args.workload_out, c=args.c)
        except ValueError as exc:
            print(f"sortheap: {exc}", file=sys.stderr)
            return 2
        res = bench(cfg)
        print(json.dumps(res.summary, sort_keys=True))
        return 0 if res.summary["ok"] else 1
    if args.command == "gen":
        if args.workload == "rounds":
            ops = wl.gen_rounds(args.n, args.rounds, args.seed)
        elif args.workload == "monotonic":
            ops = wl.gen_monotonic(args.n, args.rounds, args.seed)
        else:
            ops = wl.gen_heapsort(args.n, args.seed)
        wl.write_workload(ops, args.out)
        return 0
    g = ingest_dimacs(args.graph)
    if args.heap == "reference":
        dist = reference_dijkstra(g, args.source)
    else:
        dist = run_dijkstra(g, args.source, args.heap, args.strategy)
    for v, dv in enumerate(dist, 1):
        print(v, "inf" if dv == float("inf") else dv)
    return 0


if __name__ == "__main__":
    sys.exit(main())
