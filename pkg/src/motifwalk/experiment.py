"""Seeded multi-run experiments and comparisons against exact counts."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .catalog import build_catalog
from .estimators import (EstimateAccumulator, estimate_no_waddle, estimate_wrw,
                         estimate_wrw_generic)
from .exact import DEFAULT_CIS_BUDGET, enumerate_exact
from .report import EstimateReport, ReportSchemaError, exact_report, finalize
from .walk import DEFAULT_BURN_IN, WalkConfig

METHODS = ("wrw", "wrw-generic", "no-waddle", "exact")


@dataclass
class ExperimentSpec:
    """Parameters of one estimation experiment; set exactly one of ``queries`` and ``steps``."""

    graph: Optional[str] = None
    k: int = 4
    method: str = "wrw"
    queries: Optional[int] = None
    steps: Optional[int] = None
    runs: int = 1
    burn_in: int = DEFAULT_BURN_IN
    seed: int = 0
    motifs: list = field(default_factory=list)
    query_mode: str = "distinct"
    node_count: Optional[int] = None
    cis_budget: int = DEFAULT_CIS_BUDGET

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {', '.join(METHODS)}")
        if self.k not in (3, 4, 5):
            raise ValueError("k must be 3, 4 or 5")
        if self.runs < 1:
            raise ValueError("runs must be at least 1")
        if self.method != "exact" and (self.queries is None) == (self.steps is None):
            raise ValueError("give exactly one of queries and steps")

    def config(self) -> WalkConfig:
        return WalkConfig(seed=self.seed, burn_in=self.burn_in, query_budget=self.queries,
                          step_budget=self.steps, query_mode=self.query_mode)


def run_once(graph, k: int, method: str, config: WalkConfig, run_index: int = 0,
             catalog=None) -> EstimateAccumulator:
    """Run ``run_index`` of a seeded batch; depends only on the config seed and the index."""
    if method == "wrw":
        acc = estimate_wrw(graph, k, config, catalog, run_index)
    elif method == "wrw-generic":
        acc = estimate_wrw_generic(graph, k, config, catalog, run_index)
    elif method == "no-waddle":
        acc = estimate_no_waddle(graph, k, config, catalog, run_index)
    else:
        raise ValueError(f"not a sampling method: {method!r}")
    acc.method = method
    return acc


def run_many(graph, k: int, method: str, config: WalkConfig, runs: int, catalog=None,
             first_run: int = 0) -> list[EstimateAccumulator]:
    return [run_once(graph, k, method, config, r, catalog)
            for r in range(first_run, first_run + runs)]


def run_experiment(graph, spec: ExperimentSpec, catalog=None) -> EstimateReport:
    """Execute ``spec`` on an already loaded graph and aggregate the runs."""
    catalog = catalog or build_catalog(5)
    start = time.perf_counter()
    if spec.method == "exact":
        report = exact_report(enumerate_exact(graph, spec.k, catalog, spec.cis_budget),
                              catalog, spec.graph)
    else:
        accs = run_many(graph, spec.k, spec.method, spec.config(), spec.runs, catalog)
        meta = {"query_mode": spec.query_mode if spec.queries is not None else None,
                "steps": spec.steps}
        report = finalize(accs, catalog, graph=spec.graph, method=spec.method, Q=spec.queries,
                          burn_in=spec.burn_in, seed=spec.seed, node_count=spec.node_count,
                          meta=meta)
    if spec.motifs:
        report = report.select(spec.motifs)
    report.wall_time = time.perf_counter() - start
    return report


def relative_error(estimate: float, actual: float) -> Optional[float]:
    """Signed ``(estimate - actual) / actual``; ``None`` when ``actual`` is 0."""
    if actual == 0:
        return None
    return (estimate - actual) / actual


COMPARE_COLUMNS = ("graph", "k", "m", "canonical_code", "method", "Q", "runs", "estimate",
                   "actual", "relative_error", "ci95_lo", "ci95_hi", "covered")


def compare(report: EstimateReport, exact: EstimateReport) -> list[dict]:
    """Per-motif signed relative error of ``report`` against ``exact``.

    Motifs are matched by ``(k, m)`` and must carry the same canonical code in
    both reports, otherwise the two used different id conventions and
    :class:`ReportSchemaError` is raised. ``covered`` tells whether the
    exact value lies inside the 95% CI (``None`` without a CI).
    """
    if report.k != exact.k:
        raise ReportSchemaError(f"k differs: {report.k} vs {exact.k}")
    truth = {r.m: r for r in exact.motifs}
    rows = []
    for r in report.motifs:
        t = truth.get(r.m)
        if t is None:
            raise ReportSchemaError(f"motif ({r.k},{r.m}) missing from exact report")
        if t.canonical_code != r.canonical_code:
            raise ReportSchemaError(
                f"motif ({r.k},{r.m}) has code {r.canonical_code} but {t.canonical_code} "
                "in the exact report")
        covered = None
        if r.ci95_lo is not None and r.ci95_hi is not None:
            covered = r.ci95_lo <= t.concentration <= r.ci95_hi
        rows.append({"graph": report.graph, "k": r.k, "m": r.m,
                     "canonical_code": r.canonical_code, "method": report.method,
                     "Q": report.Q, "runs": report.runs, "estimate": r.concentration,
                     "actual": t.concentration,
                     "relative_error": relative_error(r.concentration, t.concentration),
                     "ci95_lo": r.ci95_lo, "ci95_hi": r.ci95_hi, "covered": covered})
    return rows


def error_curve(graph, k: int, m: int, actual: float, budgets, runs: int, method: str = "wrw",
                seed: int = 0, burn_in: int = DEFAULT_BURN_IN, query_mode: str = "distinct",
                catalog=None) -> list[float]:
    """Mean |relative error| of single-run estimates of ``C(k, m)`` at each query budget."""
    out = []
    for q in budgets:
        config = WalkConfig(seed=seed, burn_in=burn_in, query_budget=q, query_mode=query_mode)
        errs = []
        for acc in run_many(graph, k, method, config, runs, catalog):
            est = acc.c[m - 1] / acc.c_total if acc.c_total > 0 else 0.0
            errs.append(abs(est - actual) / actual)
        out.append(float(np.mean(errs)))
    return out
