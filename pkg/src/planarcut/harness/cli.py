"""Command line: ``solve``, ``gen``, ``rdiv`` and ``bench``.

Exit status is 0 on success, 2 on bad input or I/O failure and 1 when an
internal invariant check fails.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys

from ..errors import InputError, InvariantViolation, PlanarCutError
from ..mincut import Stats, min_st_cut
from ..plane_graph import format_weight
from ..rdivision import fast_r_division, r_division
from . import bench
from .generators import FAMILIES, generate
from .graph_io import read_instance, write_instance
from .oracle import maxflow_oracle


def _weight_json(value, scale):
    return value if scale == 0 and isinstance(value, int) else format_weight(value, scale)


def cmd_solve(args) -> int:
    inst = read_instance(args.input)
    g = inst.graph
    stats = Stats()
    cut = min_st_cut(g, inst.s, inst.t, mode=args.mode, r=args.r, stats=stats,
                     division=args.division)
    out = {"weight": _weight_json(cut.weight, g.scale), "cut_edges": cut.edges,
           "s_side": cut.s_side}
    print(json.dumps(out))
    if args.check_oracle:
        flow = maxflow_oracle(g, inst.s, inst.t)
        if flow != cut.weight:
            print(f"oracle: mismatch (cut {cut.weight}, flow {flow})", file=sys.stderr)
            return 1
        print("oracle: match", file=sys.stderr)
    return 0


def cmd_gen(args) -> int:
    inst = generate(args.family, args.n, args.seed, args.wmin, args.wmax)
    try:
        write_instance(args.out, inst.graph, inst.s, inst.t)
    except OSError as exc:
        raise InputError(f"cannot write {args.out}: {exc}") from exc
    return 0


def cmd_rdiv(args) -> int:
    g = read_instance(args.input).graph
    div = fast_r_division(g, args.r) if args.fast else r_division(g, args.r)
    bad = div.violations()
    if args.stats:
        try:
            with open(args.stats, "w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(["piece_id", "vertices", "edges", "boundary", "holes"])
                w.writerows(div.stats_rows())
        except OSError as exc:
            raise InputError(f"cannot write {args.stats}: {exc}") from exc
    print(f"pieces={len(div.pieces)} total_boundary={div.total_boundary()} "
          f"max_holes={max((p.num_holes for p in div.pieces), default=0)}")
    for line in bad:
        print(f"violation: {line}", file=sys.stderr)
    return 1 if bad else 0


def cmd_bench(args) -> int:
    if args.manifest:
        specs, modes, r = bench.load_manifest(args.manifest)
    else:
        if not args.family or not args.sizes:
            raise InputError("bench needs --manifest or --family with --sizes")
        specs = bench.corpus_specs([args.family], bench.parse_sizes(args.sizes),
                                   [args.seed], args.wmin, args.wmax)
        modes, r = ["baseline", "twophase"], None
    if args.modes:
        modes = [m.strip() for m in args.modes.split(",")]
    if args.r is not None:
        r = args.r
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.writer(out)
        w.writerow(bench.CSV_HEADER)

        def emit(rec):
            w.writerow(rec.row())
            out.flush()

        bench.run_bench(specs, modes, r, on_record=emit)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="planarcut", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="minimum s-t cut of a graph file")
    s.add_argument("--input", required=True)
    s.add_argument("--mode", choices=["baseline", "twophase"], default="twophase")
    s.add_argument("--r", type=int, default=None)
    s.add_argument("--division", choices=["fast", "lemma3"], default="fast")
    s.add_argument("--check-oracle", action="store_true")
    s.set_defaults(func=cmd_solve)

    gp = sub.add_parser("gen", help="write a generated instance")
    gp.add_argument("--family", choices=FAMILIES, required=True)
    gp.add_argument("--n", type=int, required=True)
    gp.add_argument("--seed", type=int, default=0)
    gp.add_argument("--wmin", type=int, default=1)
    gp.add_argument("--wmax", type=int, default=100)
    gp.add_argument("--out", required=True)
    gp.set_defaults(func=cmd_gen)

    rp = sub.add_parser("rdiv", help="r-division statistics of a graph file")
    rp.add_argument("--input", required=True)
    rp.add_argument("--r", type=int, required=True)
    kind = rp.add_mutually_exclusive_group()
    kind.add_argument("--fast", action="store_true")
    kind.add_argument("--lemma3", action="store_true")
    rp.add_argument("--stats")
    rp.set_defaults(func=cmd_rdiv)

    bp = sub.add_parser("bench", help="time both modes over a manifest or a size list")
    bp.add_argument("--manifest")
    bp.add_argument("--family", choices=FAMILIES)
    bp.add_argument("--sizes")
    bp.add_argument("--modes")
    bp.add_argument("--seed", type=int, default=0)
    bp.add_argument("--wmin", type=int, default=1)
    bp.add_argument("--wmax", type=int, default=100)
    bp.add_argument("--r", type=int, default=None)
    bp.add_argument("--out")
    bp.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InvariantViolation as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 1
    except PlanarCutError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
