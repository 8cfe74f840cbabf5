"""Command line entry point: ``cubictsp <command> ...``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import __version__
from .errors import CubicTSPError, GraphFormatError, InvariantError
from .graph import Graph, generate, parse_graph, to_dot, validate
from .pipeline import SCHEMA_VERSION, solve
from .tour import tour_bound

log = logging.getLogger("cubictsp")

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


def family_graph(spec: str, seed: int | None = None) -> Graph:
    """``petersen``, ``prism:5``, ``gp:8:3``, ``random:20`` (uses --seed) or ``random:20:7``."""
    name, *rest = spec.split(":")
    params = [int(p) for p in rest]
    if name in ("random", "random_cubic_bridgeless") and len(params) == 1:
        params.append(seed or 0)
    return generate(name, *params)


def read_graphs(source: str, fmt: str) -> list[tuple[str, Graph]]:
    """Graphs from a file, ``-`` for stdin; graph6 input may hold one graph per line."""
    text = sys.stdin.read() if source == "-" else Path(source).read_text()
    label = "stdin" if source == "-" else Path(source).name
    if fmt in ("g6", "graph6"):
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise GraphFormatError("empty graph6 input", 0)
        if len(lines) == 1:
            return [(label, parse_graph(lines[0], "g6"))]
        return [(f"{label}:{i + 1}", parse_graph(ln, "g6")) for i, ln in enumerate(lines)]
    return [(label, parse_graph(text, "edges"))]


def load_one(args) -> Graph:
    if args.family:
        return family_graph(args.family, args.seed)
    if not args.input:
        raise CubicTSPError("give an input path, '-' for stdin, or --family")
    graphs = read_graphs(args.input, args.format)
    if len(graphs) != 1:
        raise CubicTSPError(f"expected one graph, found {len(graphs)}; use the corpus command")
    return graphs[0][1]


def emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=2, default=str)
    sys.stdout.write("\n")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_tour(args) -> int:
    g = load_one(args)
    trace = None
    if args.trace:
        def trace(rec):
            sys.stderr.write(json.dumps(rec.to_json()) + "\n")
    result = solve(g, mode=args.mode, check=args.check, trace=trace)
    emit(result.to_json(dump_reductions=args.dump_reductions, trace=args.trace))
    return EXIT_OK if result.ok else EXIT_FAIL


def _corpus_row(job) -> dict:
    name, g6, mode, oracle_limit = job
    from .graph import from_graph6
    from .oracle import optimal_graphic_tsp

    g = from_graph6(g6)
    row = {"name": name, "n": g.n, "length": "", "bound": str(tour_bound(g.n)), "optimum": "",
           "ratio": "", "swaps": "", "reductions": "", "route": "", "ok": False, "audit": "",
           "error": ""}
    try:
        res = solve(g, mode=mode)
        row.update(length=res.tour.length, swaps=len(res.swaps), reductions=len(res.records),
                   route=res.route, ok=res.ok, audit=res.audit_ok)
        if g.n <= oracle_limit:
            opt = optimal_graphic_tsp(g)
            row["optimum"] = opt
            row["ratio"] = f"{res.tour.length / opt:.6f}"
            if res.tour.length < opt:
                row.update(ok=False, error="tour shorter than the optimum")
    except CubicTSPError as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


CORPUS_FIELDS = ["name", "n", "length", "bound", "optimum", "ratio", "swaps", "reductions", "route", "ok", "audit", "error"]


def cmd_corpus(args) -> int:
    jobs = []
    for source in args.inputs:
        for name, g in read_graphs(source, args.format):
            jobs.append((name, g))
    for spec in args.family or []:
        jobs.append((spec, family_graph(spec, args.seed)))
    from .graph import to_graph6

    work = [(name, to_graph6(g), args.mode, args.oracle_limit) for name, g in jobs]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_corpus_row, work))
    else:
        rows = [_corpus_row(w) for w in work]
    passed = sum(1 for r in rows if r["ok"])
    summary = {"schema": SCHEMA_VERSION, "graphs": len(rows), "passed": passed, "failed": len(rows) - passed,
               "audit_failed": sum(1 for r in rows if r["audit"] is False)}
    if args.json:
        emit({**summary, "rows": rows})
    else:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=CORPUS_FIELDS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        sys.stdout.write(buf.getvalue())
        sys.stderr.write(json.dumps(summary) + "\n")
    return EXIT_OK if passed == len(rows) else EXIT_FAIL


def cmd_analyze(args) -> int:
    from .structure import analyze, enumerate_3_edge_cuts, reducible_instances

    g = load_one(args)
    val = validate(g)
    out: dict = {"schema": SCHEMA_VERSION, "n": g.n, "m": g.m, "validation": vars(val) | {"ok": val.ok}}
    if val.ok:
        found = reducible_instances(g)
        out["reducible"] = [{"type": r.type, "roles": r.role_map} for r in found]
        if not found:
            s = analyze(g)
            lengths: dict[int, int] = {}
            for c in s.circuits:
                lengths[c.length] = lengths.get(c.length, 0) + 1
            out["circuits"] = {str(k): v for k, v in sorted(lengths.items())}
            out["diamonds"] = [{"kind": d.kind, "vertices": sorted(d.vertices)} for d in s.diamonds]
            out["collections"] = {c.kind: {"members": len(c.members), "weight": str(c.weight)}
                                  for c in s.collections}
        if g.n <= 24:
            out["three_edge_cuts"] = [[list(e) for e in cut] for cut in enumerate_3_edge_cuts(g)]
    emit(out)
    return EXIT_OK


def cmd_decompose(args) -> int:
    from .matching import decompose_uniform_third

    g = load_one(args)
    method = {"auto": "auto", "exhaustive": "enumerate", "decomposition": "generate"}[args.mode]
    dec = decompose_uniform_third(g, method=method)
    emit({"schema": SCHEMA_VERSION, "n": g.n, "terms": len(dec), "verified": True,
          "decomposition": dec.to_json()})
    return EXIT_OK


def cmd_oracle(args) -> int:
    from .oracle import min_cost_even_factor, optimal_graphic_tsp

    g = load_one(args)
    factor, cost = min_cost_even_factor(g)
    emit({"schema": SCHEMA_VERSION, "n": g.n, "optimal_tour": optimal_graphic_tsp(g),
          "min_even_factor_cost": cost, "min_even_factor": factor.to_json()})
    return EXIT_OK


def cmd_dot(args) -> int:
    g = load_one(args)
    highlight = []
    if args.tour:
        res = solve(g, mode=args.mode)
        highlight = list(zip(res.tour.walk, res.tour.walk[1:]))
    sys.stdout.write(to_dot(g, highlight))
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cubictsp", description="Short closed walks in bridgeless cubic graphs.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def graph_args(sp, multi=False):
        if not multi:
            sp.add_argument("input", nargs="?", help="graph file, or '-' for stdin")
            sp.add_argument("--family", help="generated graph, e.g. petersen, prism:5, gp:8:3, random:20")
        sp.add_argument("--format", choices=["g6", "edges"], default="g6")
        sp.add_argument("--seed", type=int, default=0, help="seed for random families")
        sp.add_argument("--mode", choices=["auto", "exhaustive", "decomposition"], default="auto",
                        help="2-factor selection strategy")

    sp = sub.add_parser("tour", help="compute a tour with certificates")
    graph_args(sp)
    sp.add_argument("--trace", action="store_true", help="log every swap as a JSON line on stderr")
    sp.add_argument("--dump-reductions", action="store_true", help="include reduction records")
    sp.add_argument("--check", action="store_true", help="re-validate state after every step")
    sp.set_defaults(func=cmd_tour)

    sp = sub.add_parser("corpus", help="run many graphs and print a CSV summary")
    sp.add_argument("inputs", nargs="*", help="graph files (graph6: one graph per line)")
    graph_args(sp, multi=True)
    sp.add_argument("--family", action="append", help="generated graph spec; repeatable")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--oracle-limit", type=int, default=14, help="run the exact oracle up to this n")
    sp.add_argument("--json", action="store_true", help="JSON instead of CSV")
    sp.set_defaults(func=cmd_corpus)

    for name, func, text in (
        ("analyze", cmd_analyze, "validation, reducible patterns, diamonds and collections"),
        ("decompose", cmd_decompose, "exact uniform-third perfect matching decomposition"),
        ("oracle", cmd_oracle, "optimal tour and cheapest even factor by brute force"),
    ):
        sp = sub.add_parser(name, help=text)
        graph_args(sp)
        sp.set_defaults(func=func)

    sp = sub.add_parser("dot", help="Graphviz output")
    graph_args(sp)
    sp.add_argument("--tour", action="store_true", help="mark tour edges with traversal counts")
    sp.set_defaults(func=cmd_dot)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except InvariantError as exc:
        emit({"ok": False, "error": "InvariantError", "message": str(exc),
              "witness": getattr(exc, "witness", None)})
        return EXIT_INTERNAL
    except (CubicTSPError, OSError, ValueError) as exc:
        emit({"ok": False, "error": type(exc).__name__, "message": str(exc)})
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
