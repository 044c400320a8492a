"""Command-line front end.

Exit status: 0 success, 1 verification disagreement, 2 input or validation
error, 3 an exact solver refused the instance.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from collections import Counter

from . import __version__
from .connectivity import (
    DEFAULT_BRUTE_FORCE_LIMIT,
    DEFAULT_CYCLE_BOUND,
    connectivity_report,
    format_cut_value,
)
from .errors import InstanceTooLargeForExact, PowerGraphLabError
from .families import (
    DEFAULT_BOUNDS,
    build,
    catalog,
    format_cayley_table,
    parse_cayley_json,
    parse_cayley_text,
    parse_family,
)
from .graph import Graph, to_dot, to_edge_list
from .groups import FiniteGroup, difference_number, is_p_group
from .powergraph import build_graph
from .theorems import Options, SurveyReport, survey

EXIT_OK, EXIT_DISAGREE, EXIT_INPUT, EXIT_LIMIT = 0, 1, 2, 3

CSV_COLUMNS = ("name", "order", "p", "delta", "kappa", "ckappa", "separable", "thm1", "thm2", "lemmas")


class InputError(Exception):
    pass


# --- helpers -------------------------------------------------------------------------


def _read_table_file(path: str) -> FiniteGroup:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    name = os.path.splitext(os.path.basename(path))[0]
    if text.lstrip().startswith("{"):
        return parse_cayley_json(text, name)
    return parse_cayley_text(text, name)


def _read_edge_list(path: str) -> Graph:
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    edges = []
    for lineno, line in enumerate(lines, 1):
        body = line.split("#", 1)[0].split()
        if not body:
            continue
        if len(body) != 2 or not all(t.isdigit() for t in body):
            raise InputError(f"{path}:{lineno}: expected 'u v', got {line!r}")
        edges.append((int(body[0]), int(body[1])))
    n = max((max(e) for e in edges), default=-1) + 1
    return Graph.from_edges(n, edges)


def _group_from_args(args) -> FiniteGroup:
    if args.family and args.table:
        raise InputError("give either --family or --table, not both")
    if args.family:
        return build(parse_family(args.family))
    if args.table:
        return _read_table_file(args.table)
    raise InputError("one of --family or --table is required")


def _parse_bounds(items: list[str] | None) -> dict[int, int]:
    if not items:
        return dict(DEFAULT_BOUNDS)
    bounds = {}
    for item in items:
        p, sep, n = item.partition("=")
        if not sep or not p.strip().isdigit() or not n.strip().isdigit():
            raise InputError(f"--max-order expects p=N, got {item!r}")
        if int(n) < 1:
            raise InputError(f"--max-order bound must be positive, got {item!r}")
        bounds[int(p)] = int(n)
    return bounds


def _jobs(args) -> int:
    if args.jobs is not None:
        return max(1, args.jobs)
    env = os.environ.get("POWERGRAPH_LAB_JOBS", "")
    return max(1, int(env)) if env.isdigit() else 1


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


# --- commands ------------------------------------------------------------------------


def group_info(G: FiniteGroup) -> dict:
    mcs = G.maximal_cyclic_subgroups
    return {
        "name": G.name,
        "order": G.n,
        "p": is_p_group(G),
        "cyclic": G.is_cyclic,
        "element_orders": {str(k): v for k, v in sorted(G.order_histogram.items())},
        "maximal_cyclic_subgroups": {
            "count": len(mcs),
            "orders": {str(k): v for k, v in sorted(Counter(M.order for M in mcs).items())},
        },
        "difference_number": difference_number(G),
    }


def cmd_group_info(args) -> int:
    info = group_info(_group_from_args(args))
    if args.format == "json":
        _emit(_dumps(info), args.out)
        return EXIT_OK
    mcs = info["maximal_cyclic_subgroups"]
    lines = [
        f"group: {info['name']}",
        f"order: {info['order']}",
        f"p-group: {'p=' + str(info['p']) if info['p'] else 'no'}",
        "element orders: " + ", ".join(f"{k}:{v}" for k, v in info["element_orders"].items()),
        f"maximal cyclic subgroups: {mcs['count']} ("
        + ", ".join(f"{v} of order {k}" for k, v in mcs["orders"].items())
        + ")",
        f"difference number: {info['difference_number']}",
    ]
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_graph_export(args) -> int:
    G = _group_from_args(args)
    g = build_graph(G, args.kind).graph
    if args.format == "dot":
        text = to_dot(g, f"{args.kind} graph of {G.name}")
    else:
        text = to_edge_list(g)
    _emit(text, args.out)
    return EXIT_OK


def cmd_connectivity(args) -> int:
    if args.graph:
        if args.family or args.table:
            raise InputError("--graph cannot be combined with --family or --table")
        g, name = _read_edge_list(args.graph), os.path.basename(args.graph)
    else:
        G = _group_from_args(args)
        g, name = build_graph(G, args.kind).graph, G.name
    if g.n == 0:
        raise InputError("graph has no vertices")
    try:
        rep = connectivity_report(g, args.cycle_bound, args.brute_limit)
    except InstanceTooLargeForExact as exc:
        sys.stderr.write(f"error: solver limit exceeded in stage '{exc.stage}': {exc}\n")
        return EXIT_LIMIT
    d = {"schema": 1, "name": name, "vertices": g.n, "edges": g.num_edges, **rep.to_dict()}
    if args.format == "json":
        _emit(_dumps(d), args.out)
    else:
        lines = [f"{k}: {'infinite' if v == 'infinite' else v}" for k, v in d.items() if k != "schema"]
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def survey_config(args) -> dict:
    return {
        "bounds": {str(p): n for p, n in sorted(_parse_bounds(args.max_order).items())},
        "brute_force_limit": args.brute_limit,
        "cycle_bound": args.cycle_bound,
        "seed": args.seed,
        "adjacency_samples": args.samples,
        "tables": list(args.table or []),
    }


def render_survey(report: SurveyReport, config: dict, fmt: str) -> str:
    if fmt == "json":
        return _dumps(
            {
                "schema": 1,
                "config": config,
                "summary": report.summary(),
                "rows": [r.to_dict() for r in report.rows],
            }
        )
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in report.rows:
            w.writerow(
                [
                    r.name,
                    r.order,
                    "" if r.p is None else r.p,
                    r.delta,
                    "" if r.kappa is None else r.kappa,
                    "" if r.ckappa is None else format_cut_value(r.ckappa),
                    "" if r.separable is None else str(r.separable).lower(),
                    r.thm1_tag,
                    r.thm2_tag,
                    r.lemma_tag,
                ]
            )
        return buf.getvalue()
    lines = [f"{'group':<22}{'order':>6}{'p':>4}{'delta':>6}{'kappa':>6}{'ckappa':>9}  thm1        thm2"]
    for r in report.rows:
        ck = "" if r.ckappa is None else str(format_cut_value(r.ckappa))
        lines.append(
            f"{r.name:<22}{r.order:>6}{r.p or '-':>4}{r.delta:>6}{'' if r.kappa is None else r.kappa:>6}{ck:>9}"
            f"  {r.thm1_tag:<11} {r.thm2_tag}"
        )
    s = report.summary()
    lines.append("")
    lines.append(f"groups: {s['groups']}, failures: {s['failures']}, skipped: {len(s['skipped'])}")
    for name, failure in report.failures:
        lines.append(f"FAIL {name}: {failure}")
    return "\n".join(lines) + "\n"


def cmd_survey(args) -> int:
    config = survey_config(args)
    tables = [_read_table_file(p) for p in args.table or []]
    entries = catalog(_parse_bounds(args.max_order), tables=tables)
    opts = Options(args.cycle_bound, args.brute_limit, args.samples, args.seed)
    report = survey(entries, opts, jobs=_jobs(args))
    _emit(render_survey(report, config, args.format), args.out)
    return EXIT_OK if report.ok else EXIT_DISAGREE


def cmd_ingest_check(args) -> int:
    G = _read_table_file(args.table)
    if args.format in ("table", "json"):
        _emit(format_cayley_table(G, args.format), args.out)
    else:
        info = group_info(G)
        _emit(f"ok: valid group of order {info['order']}, identity normalized to 0\n", args.out)
    return EXIT_OK


# --- parser --------------------------------------------------------------------------


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="powergraph-lab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def group_source(p, table_help="Cayley table file (text or JSON)"):
        p.add_argument("--family", help='family spec, e.g. "dicyclic:2" or "product(cyclic:3,cyclic:9)"')
        p.add_argument("--table", metavar="FILE", help=table_help)

    def solver_flags(p):
        p.add_argument("--brute-limit", type=_positive, default=DEFAULT_BRUTE_FORCE_LIMIT, metavar="N")
        p.add_argument("--cycle-bound", type=_positive, default=DEFAULT_CYCLE_BOUND, metavar="N")

    p = sub.add_parser("group-info", help="order, element orders, maximal cyclic subgroups, difference number")
    group_source(p)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_group_info)

    p = sub.add_parser("graph-export", help="export the (enhanced) power graph")
    group_source(p)
    p.add_argument("--kind", choices=("power", "enhanced"), default="power")
    p.add_argument("--format", choices=("dot", "edges"), default="dot")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_graph_export)

    p = sub.add_parser("connectivity", help="kappa, edge connectivity, cyclic vertex connectivity")
    group_source(p)
    p.add_argument("--graph", metavar="FILE", help="edge-list file instead of a group")
    p.add_argument("--kind", choices=("power", "enhanced"), default="power")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--out", metavar="FILE")
    solver_flags(p)
    p.set_defaults(func=cmd_connectivity)

    p = sub.add_parser("survey", help="verify the characterizations over a catalog")
    p.add_argument("--max-order", action="append", metavar="p=N", help="catalog bound per prime (repeatable)")
    p.add_argument("--table", action="append", metavar="FILE", help="extra Cayley table to include (repeatable)")
    p.add_argument("--format", choices=("json", "csv", "text"), default="json")
    p.add_argument("--out", metavar="FILE")
    p.add_argument("--jobs", type=_positive, metavar="N")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=_positive, default=256, help="adjacency-lemma samples per group")
    solver_flags(p)
    p.set_defaults(func=cmd_survey)

    p = sub.add_parser("ingest-check", help="validate a Cayley table file and re-emit it normalized")
    p.add_argument("--table", metavar="FILE", required=True)
    p.add_argument("--format", choices=("table", "json", "text"), default="text")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_ingest_check)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InstanceTooLargeForExact as exc:
        sys.stderr.write(f"error: solver limit exceeded in stage '{exc.stage}': {exc}\n")
        return EXIT_LIMIT
    except (InputError, PowerGraphLabError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
