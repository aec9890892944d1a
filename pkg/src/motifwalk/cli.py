"""Command line interface: ``motifwalk estimate|exact|compare|count|catalog|bound``.

Exit codes: 0 success, 1 runtime failure, 2 usage error. Output goes to
``--out`` or stdout; set ``MOTIFWALK_VERBOSE=1`` for progress and timing
on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from .catalog import build_catalog
from .estimators import BoundInputs, NoSamplesError, required_steps, top_degree_product
from .exact import DEFAULT_CIS_BUDGET, CISBudgetExceeded
from .experiment import COMPARE_COLUMNS, METHODS, ExperimentSpec, compare, run_experiment
from .graph import EmptyGraphError, GraphFormatError, largest_connected_component, load_edge_list
from .report import EstimateReport, ReportSchemaError, jsonable, rows_to_csv
from .validation import check_motif, parse_motif
from .walk import DEFAULT_BURN_IN

log = logging.getLogger("motifwalk")

CATALOG_COLUMNS = ("k", "m", "name", "canonical_code", "edge_count", "l", "L", "Z", "pr_table",
                   "pw")
BOUND_COLUMNS = ("mixing_time", "degree_sum", "top_degree_product", "motif_count", "delta",
                 "alpha", "xi", "c_const", "t_min", "lower_factor", "upper_factor", "confidence")


HEAD_COLUMNS = ("graph", "method", "Q", "runs")


class UsageError(Exception):
    pass


def _motif_arg(text):
    try:
        return parse_motif(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {v}")
    return v


def _non_negative(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative: {v}")
    return v


def _add_output(p):
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", help="output file (default stdout)")


def _add_walk(p, graph_required=True):
    p.add_argument("--graph", required=graph_required, help="edge list (.txt, .gz)")
    p.add_argument("--k", type=int, choices=(3, 4, 5))
    p.add_argument("--method", choices=METHODS, default="wrw")
    budget = p.add_mutually_exclusive_group()
    budget.add_argument("--queries", type=_positive, help="query budget per run")
    budget.add_argument("--steps", type=_positive, help="post-burn-in steps per run")
    p.add_argument("--query-mode", choices=("distinct", "total"), default="distinct",
                   help="count distinct fetched nodes (default) or every fetch")
    p.add_argument("--runs", type=_positive, default=1)
    p.add_argument("--burn-in", type=_non_negative, default=DEFAULT_BURN_IN)
    p.add_argument("--seed", type=_non_negative, default=0)
    p.add_argument("--motif", type=_motif_arg, action="append", default=[],
                   help="k,m; repeatable; restricts the output rows")
    p.add_argument("--node-count", type=_positive, help="|V| for count estimates")
    p.add_argument("--cis-budget", type=_positive, default=DEFAULT_CIS_BUDGET)
    p.add_argument("--timing", action="store_true", help="include wall time in JSON output")
    _add_output(p)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="motifwalk",
                                     description="Random-walk motif concentration estimates.")
    sub = parser.add_subparsers(dest="command", required=True)

    _add_walk(sub.add_parser("estimate", help="estimate concentrations by random walks"))

    p = sub.add_parser("exact", help="exact concentrations and counts by enumeration")
    p.add_argument("--graph", required=True)
    p.add_argument("--k", type=int, choices=(3, 4, 5))
    p.add_argument("--motif", type=_motif_arg, action="append", default=[])
    p.add_argument("--cis-budget", type=_positive, default=DEFAULT_CIS_BUDGET)
    p.add_argument("--timing", action="store_true")
    _add_output(p)

    p = sub.add_parser("compare", help="relative errors of an estimate against exact values")
    _add_walk(p, graph_required=False)
    p.add_argument("--estimate", help="saved estimate report (JSON) instead of running one")
    p.add_argument("--exact", help="saved exact report (JSON) instead of enumerating")

    _add_walk(sub.add_parser("count", help="estimate motif counts; needs --node-count"))

    p = sub.add_parser("catalog", help="dump the motif table")
    p.add_argument("--k", type=int, choices=(3, 4, 5))
    _add_output(p)

    p = sub.add_parser("bound", help="steps needed for a relative error band")
    p.add_argument("--mixing-time", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--motif-count", type=float, required=True,
                   help="|S(k,m)| or a lower bound on it")
    p.add_argument("--degree-sum", type=float)
    p.add_argument("--top-degree-product", type=float)
    p.add_argument("--graph", help="read the degree sum and top-k degree product from a graph")
    p.add_argument("--k", type=int, choices=(3, 4, 5))
    p.add_argument("--xi", type=float, default=72.0)
    p.add_argument("--c-const", type=float, default=1.0)
    _add_output(p)
    return parser


# -- helpers -------------------------------------------------------------------

def _load(path):
    g = load_edge_list(path)
    lcc = largest_connected_component(g)
    if lcc is not g:
        log.info("using largest component: %d of %d nodes", lcc.node_count, g.node_count)
    return lcc


def _resolve_k(args):
    ks = {k for k, _ in args.motif}
    if args.k is None:
        if len(ks) != 1:
            raise UsageError("--k is required (or --motif flags of a single size)")
        args.k = ks.pop()
    elif ks - {args.k}:
        raise UsageError(f"--motif sizes {sorted(ks)} do not match --k {args.k}")
    catalog = build_catalog(5)
    try:
        for k, m in args.motif:
            check_motif(k, m, catalog)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return [m for _, m in args.motif]


def _spec(args, method=None) -> ExperimentSpec:
    method = method or args.method
    motifs = _resolve_k(args)
    if method != "exact" and args.queries is None and args.steps is None:
        raise UsageError("one of --queries and --steps is required")
    return ExperimentSpec(graph=os.path.basename(args.graph), k=args.k, method=method,
                          queries=args.queries, steps=args.steps, runs=args.runs,
                          burn_in=args.burn_in, seed=args.seed, motifs=motifs,
                          query_mode=args.query_mode, node_count=args.node_count,
                          cis_budget=args.cis_budget)


def _emit(args, text):
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_report(args, report: EstimateReport):
    log.info("wall time %.3f s", report.wall_time or 0.0)
    if args.format == "csv":
        _emit(args, report.to_csv())
    else:
        _emit(args, report.to_json(timing=getattr(args, "timing", False)))


def _read_report(path) -> EstimateReport:
    with open(path) as fh:
        return EstimateReport.from_json(fh.read())


# -- subcommands ---------------------------------------------------------------

def cmd_estimate(args):
    spec = _spec(args)
    _emit_report(args, run_experiment(_load(args.graph), spec))


def cmd_exact(args):
    motifs = _resolve_k(args)
    spec = ExperimentSpec(graph=os.path.basename(args.graph), k=args.k, method="exact",
                          motifs=motifs, cis_budget=args.cis_budget)
    _emit_report(args, run_experiment(_load(args.graph), spec))


def cmd_count(args):
    if args.node_count is None:
        raise UsageError("count needs --node-count")
    if args.method == "exact":
        raise UsageError("count needs a sampling method")
    cmd_estimate(args)


def cmd_compare(args):
    graph = None
    if args.estimate:
        report = _read_report(args.estimate)
    else:
        if not args.graph:
            raise UsageError("compare needs --graph or --estimate")
        if args.method == "exact":
            raise UsageError("compare needs a sampling method")
        spec = _spec(args)
        graph = _load(args.graph)
        report = run_experiment(graph, spec)
    if args.exact:
        exact = _read_report(args.exact)
    else:
        if not args.graph:
            raise UsageError("compare needs --graph or --exact")
        graph = graph or _load(args.graph)
        exact = run_experiment(graph, ExperimentSpec(graph=report.graph, k=report.k,
                                                     method="exact", cis_budget=args.cis_budget))
    rows = compare(report, exact)
    if args.format == "csv":
        _emit(args, rows_to_csv(rows, COMPARE_COLUMNS))
    else:
        head = {"graph": report.graph, "k": report.k, "method": report.method, "Q": report.Q,
                "runs": report.runs, "burn_in": report.burn_in, "seed": report.seed,
                "motifs": [{c: r[c] for c in COMPARE_COLUMNS if c not in HEAD_COLUMNS}
                           for r in rows]}
        _emit(args, json.dumps(jsonable(head), indent=2) + "\n")


def cmd_catalog(args):
    rows = build_catalog(5).to_records()
    if args.k is not None:
        rows = [r for r in rows if r["k"] == args.k]
    if args.format == "csv":
        flat = [dict(r, pr_table=";".join(f"{s}:{v}" for s, v in r["pr_table"].items()))
                for r in rows]
        _emit(args, rows_to_csv(flat, CATALOG_COLUMNS))
    else:
        _emit(args, json.dumps(rows, indent=2) + "\n")


def cmd_bound(args):
    d, q = args.degree_sum, args.top_degree_product
    if args.graph:
        if args.k is None:
            raise UsageError("--graph needs --k for the top-k degree product")
        g = _load(args.graph)
        d = d if d is not None else float(g.degree_sum)
        q = q if q is not None else float(top_degree_product(g, args.k))
    if d is None or q is None:
        raise UsageError("give --degree-sum and --top-degree-product, or --graph and --k")
    try:
        b = BoundInputs(args.mixing_time, d, q, args.motif_count, args.delta, args.alpha,
                        args.xi, args.c_const)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    row = {"mixing_time": b.mixing_time, "degree_sum": b.degree_sum,
           "top_degree_product": b.top_degree_product, "motif_count": b.motif_count,
           "delta": b.delta, "alpha": b.alpha, "xi": b.xi, "c_const": b.c_const}
    row.update(required_steps(b).to_dict())
    if args.format == "csv":
        _emit(args, rows_to_csv([row], BOUND_COLUMNS))
    else:
        _emit(args, json.dumps(jsonable(row), indent=2) + "\n")


COMMANDS = {"estimate": cmd_estimate, "exact": cmd_exact, "compare": cmd_compare,
            "count": cmd_count, "catalog": cmd_catalog, "bound": cmd_bound}

RUNTIME_ERRORS = (OSError, GraphFormatError, EmptyGraphError, NoSamplesError, CISBudgetExceeded,
                  ReportSchemaError, ValueError)


def main(argv=None) -> int:
    if os.environ.get("MOTIFWALK_VERBOSE"):
        logging.basicConfig(level=logging.INFO, format="%(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"motifwalk {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except RUNTIME_ERRORS as exc:
        print(f"motifwalk {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
