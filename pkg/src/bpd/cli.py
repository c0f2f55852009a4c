"""Command-line front end.

Subcommands: solve, kernelize, detect, generate, verify, bench.  Every
command prints a JSON report to stdout (sorted keys, stable except for
timing fields) and uses exit codes 0 = yes/ok, 1 = no/failed,
2 = usage or input error.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import sys

from . import __version__
from .detect import (
    StructureKind,
    classify,
    enumerate_bicolored_p3,
    enumerate_diamonds,
    enumerate_endangered_k3,
    enumerate_hourglasses,
    enumerate_mono_k3,
    enumerate_mono_p3,
    enumerate_multi_conflict_edges,
    enumerate_bicolored_k3,
    is_nice,
)
from .generate import (
    GADGET_KINDS,
    FormulaError,
    gadget,
    parse_dimacs,
    random_instance,
    reduce_sat_to_bpd,
)
from .graph import FormatError, Instance, format_bpd, instance_stats, parse_bpd
from .kernel import kernelize
from .solve import (
    PreconditionError,
    SearchStats,
    SolveResult,
    oracle_min_deletions,
    solve_auto,
    solve_branching,
    solve_degree_two,
    solve_endangered_free,
    solve_mono_free,
    verify_solution,
)

EXIT_YES = 0
EXIT_NO = 1
EXIT_ERROR = 2


def _read_graph(path: str):
    with open(path) as fh:
        text = fh.read()
    return parse_bpd(text)


def _digest(g) -> str:
    return hashlib.sha256(format_bpd(g).encode()).hexdigest()


def _emit(report: dict) -> None:
    json.dump(report, sys.stdout, sort_keys=True, indent=2)
    sys.stdout.write("\n")


def _report(command: str, payload: dict, digest=None, seed=None) -> dict:
    out = {"command": command, "version": __version__, **payload}
    if digest is not None:
        out["input_digest"] = digest
    if seed is not None:
        out["seed"] = seed
    return out


def _solve_payload(result: SolveResult, k) -> dict:
    return {
        "answer": result.answer,
        "k": k,
        "optimum": result.optimum,
        "deleted_edges": [list(e) for e in result.solution] if result.solution is not None else None,
        "method": result.method,
        "stats": result.stats.to_json_dict(),
    }


def cmd_solve(args) -> int:
    g = _read_graph(args.input)
    k = g.m if args.k is None else args.k
    inst = Instance(g, k)
    optimize = args.optimize
    if args.method == "auto":
        result = solve_auto(inst, optimize=optimize, parallel=args.parallel)
    elif args.method == "branch":
        result = solve_branching(inst, optimize=optimize, parallel=args.parallel)
    elif args.method == "oracle":
        optimum, witness = oracle_min_deletions(g, cap=None if optimize else k)
        stats = SearchStats(nodes_expanded=1)
        if optimum is None:
            result = SolveResult(False, None, None, stats, "oracle")
        else:
            answer = optimum <= k
            result = SolveResult(answer, witness if answer else None,
                                 optimum, stats, "oracle")
    else:
        solver = {"vc": solve_endangered_free, "deg2": solve_degree_two,
                  "monofree": solve_mono_free}[args.method]
        result = solver(inst)
    payload = _solve_payload(result, None if args.k is None else args.k)
    if args.json:
        _emit(payload)
    else:
        _emit(_report("solve", payload, digest=_digest(g)))
    return EXIT_YES if result.answer else EXIT_NO


def cmd_kernelize(args) -> int:
    g = _read_graph(args.input)
    kinst, trace = kernelize(Instance(g, args.k),
                             use_bridge_rule=args.bridge_rule)
    kernel_text = format_bpd(kinst.graph)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(kernel_text)
    payload = {
        "kernel_bpd": kernel_text,
        "k_kernel": kinst.k,
        "no_instance": kinst.k < 0,
        "trace": trace.to_json_dict(),
    }
    _emit(_report("kernelize", payload, digest=_digest(g)))
    return EXIT_NO if kinst.k < 0 else EXIT_YES


def cmd_detect(args) -> int:
    g = _read_graph(args.input)
    enumerators = {
        StructureKind.BICOLORED_P3: enumerate_bicolored_p3,
        StructureKind.MONO_P3: enumerate_mono_p3,
        StructureKind.MONO_K3: enumerate_mono_k3,
        StructureKind.BICOLORED_K3: enumerate_bicolored_k3,
        StructureKind.ENDANGERED_K3: enumerate_endangered_k3,
        StructureKind.LC_DIAMOND: lambda h: enumerate_diamonds(h, StructureKind.LC_DIAMOND),
        StructureKind.LO_DIAMOND: lambda h: enumerate_diamonds(h, StructureKind.LO_DIAMOND),
        StructureKind.IIZ_DIAMOND: lambda h: enumerate_diamonds(h, StructureKind.IIZ_DIAMOND),
        StructureKind.CC_HOURGLASS: enumerate_hourglasses,
        StructureKind.MULTI_CONFLICT_EDGE: enumerate_multi_conflict_edges,
    }
    structures = {}
    for kind, enumerate_kind in enumerators.items():
        found = enumerate_kind(g)
        structures[kind.value] = {
            "count": len(found),
            "first": found[0].to_json_dict() if found else None,
        }
    payload = {
        "structures": structures,
        "classes": classify(g).to_json_dict(),
        "nice": is_nice(g),
        "stats": dataclasses.asdict(instance_stats(g)),
    }
    _emit(_report("detect", payload, digest=_digest(g)))
    return EXIT_YES


def _write_or_embed(payload: dict, text: str, path) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text)
        payload["output"] = path
    else:
        payload["bpd"] = text


def cmd_generate(args) -> int:
    if args.family == "sat":
        with open(args.cnf) as fh:
            formula = parse_dimacs(fh.read())
        inst, layout = reduce_sat_to_bpd(formula)
        payload = {"k": inst.k, "n": inst.graph.n, "m": inst.graph.m}
        text = format_bpd(inst.graph, comment=f"sat reduction, k={inst.k}")
        _write_or_embed(payload, text, args.output)
        if args.layout:
            with open(args.layout, "w") as fh:
                json.dump(layout.to_json_dict(), fh, sort_keys=True, indent=2)
            payload["layout"] = args.layout
        _emit(_report("generate", payload))
        return EXIT_YES
    if args.family == "gadget":
        g = gadget(args.kind, length=args.length)
        payload = {"kind": args.kind, "n": g.n, "m": g.m}
        _write_or_embed(payload, format_bpd(g, comment=f"gadget {args.kind}"), args.output)
        _emit(_report("generate", payload))
        return EXIT_YES
    g = random_instance(args.n, args.p, args.blue, args.seed)
    payload = {"n": g.n, "m": g.m}
    text = format_bpd(g, comment=f"random n={args.n} p={args.p} blue={args.blue} seed={args.seed}")
    _write_or_embed(payload, text, args.output)
    _emit(_report("generate", payload, seed=args.seed))
    return EXIT_YES


def cmd_verify(args) -> int:
    g = _read_graph(args.input)
    with open(args.solution) as fh:
        data = json.load(fh)
    if isinstance(data, dict):
        if "deleted_edges" not in data or not isinstance(data["deleted_edges"], list):
            raise ValueError("solution object lacks a 'deleted_edges' list")
        raw = data["deleted_edges"]
    elif isinstance(data, list):
        raw = data
    else:
        raise ValueError("solution must be a JSON list or object")
    deletions = []
    for item in raw:
        if not (isinstance(item, list) and len(item) == 2
                and all(isinstance(x, int) for x in item)):
            raise ValueError(f"bad edge entry {item!r}")
        deletions.append(tuple(item))
    ok, reason = verify_solution(g, deletions, args.k)
    _emit(_report("verify", {"valid": ok, "reason": reason,
                             "size": len(deletions), "k": args.k},
                  digest=_digest(g)))
    return EXIT_YES if ok else EXIT_NO


def cmd_bench(args) -> int:
    from . import report as report_mod

    jobs = []
    if args.corpus:
        import glob
        import os
        paths = sorted(glob.glob(os.path.join(args.corpus, "*.bpd")))
        if not paths:
            raise ValueError(f"no .bpd files in corpus directory {args.corpus!r}")
        for path in paths:
            jobs.append((os.path.basename(path), _read_graph(path)))
    else:
        if args.count is None or args.count <= 0:
            raise ValueError("empty random corpus: --count must be positive")
        for i in range(args.count):
            g = random_instance(args.n, args.p, args.blue, args.seed + i)
            jobs.append((f"random-{args.seed + i}", g))
    rows = []
    for name, g in jobs:
        result = solve_branching(Instance(g, g.m), optimize=True)
        rows.append(report_mod.bench_row(
            name, g.n, g.m, result.optimum,
            result.stats.nodes_expanded, result.stats.time_ms))
    payload = {
        "rows": rows,
        "instances": len(rows),
        "total_nodes": sum(r["nodes_expanded"] for r in rows),
        "max_optimum": max(r["optimum"] for r in rows),
    }
    if args.out_dir:
        payload["files"] = report_mod.write_bench_outputs(rows, args.out_dir)
    _emit(_report("bench", payload,
                  seed=args.seed if not args.corpus else None))
    return EXIT_YES


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bpd",
        description="Exact solvers for bicolored P3 deletion on "
                    "two-edge-colored graphs.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="decide or optimize an instance")
    p.add_argument("--input", required=True, help="graph in bpd v1 format")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--k", type=int, help="deletion budget")
    group.add_argument("--optimize", action="store_true",
                       help="compute the minimum deletion count")
    p.add_argument("--method", default="auto",
                   choices=["auto", "branch", "vc", "deg2", "monofree", "oracle"])
    p.add_argument("--parallel", action="store_true",
                   help="explore sibling subtrees concurrently (BPD_THREADS caps workers)")
    p.add_argument("--json", action="store_true",
                   help="print the bare result object without the report wrapper")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("kernelize", help="apply the reduction rules")
    p.add_argument("--input", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--bridge-rule", action="store_true",
                   help="also apply the optional bridge rule")
    p.add_argument("-o", "--output", help="write the kernel graph to a file")
    p.set_defaults(func=cmd_kernelize)

    p = sub.add_parser("detect", help="count forbidden structures")
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("generate", help="produce instances")
    gen = p.add_subparsers(dest="family", required=True)
    q = gen.add_parser("sat", help="reduction from a (3,4)-CNF formula")
    q.add_argument("--cnf", required=True, help="DIMACS CNF input")
    q.add_argument("-o", "--output", help="write the graph to a file")
    q.add_argument("--layout", help="write the vertex-role layout JSON")
    q.set_defaults(func=cmd_generate)
    q = gen.add_parser("gadget", help="named fixture graphs")
    q.add_argument("kind", choices=list(GADGET_KINDS))
    q.add_argument("--length", type=int, default=0,
                   help="cycle length for alternating_cycle")
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_generate)
    q = gen.add_parser("random", help="seeded random instance")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--p", type=float, default=0.5, help="edge probability")
    q.add_argument("--blue", type=float, default=0.5, help="blue probability")
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_generate)

    p = sub.add_parser("verify", help="check a deletion set")
    p.add_argument("--input", required=True)
    p.add_argument("--solution", required=True, help="JSON file with deleted_edges")
    p.add_argument("--k", type=int, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="branching-solver benchmark")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--corpus", help="directory of .bpd files")
    src.add_argument("--count", type=int,
                     help="number of random instances")
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--blue", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", help="write bench.csv and bench.png here")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FormatError, FormulaError, PreconditionError, ValueError,
            OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
