"""Aggregation of per-run accumulators into reports, and their JSON/CSV forms."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import stats

from .catalog import build_catalog
from .estimators import EstimateAccumulator, NoSamplesError, degree_sum_from, estimate_motif_count

CSV_COLUMNS = ("graph", "k", "m", "canonical_code", "method", "Q", "runs", "concentration",
               "stderr", "ci95_lo", "ci95_hi", "count_estimate")
MOTIF_FIELDS = ("k", "m", "canonical_code", "concentration", "count_estimate", "stderr",
                "ci95_lo", "ci95_hi")
HEADER_FIELDS = ("graph", "k", "method", "Q", "runs", "burn_in", "seed")


class ReportSchemaError(ValueError):
    """A serialized report does not have the expected shape."""


@dataclass
class MotifRow:
    k: int
    m: int
    canonical_code: int
    concentration: float
    count_estimate: Optional[float] = None
    stderr: Optional[float] = None
    ci95_lo: Optional[float] = None
    ci95_hi: Optional[float] = None

    def to_dict(self):
        return {f: getattr(self, f) for f in MOTIF_FIELDS}


@dataclass
class EstimateReport:
    """Concentrations, optional counts and across-run uncertainty for one graph and k."""

    graph: Optional[str]
    k: int
    method: str
    Q: Optional[int]
    runs: Optional[int]
    burn_in: Optional[int]
    seed: Optional[int]
    motifs: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)
    wall_time: Optional[float] = None

    def concentration(self, m: int) -> float:
        return self.row(m).concentration

    def row(self, m: int) -> MotifRow:
        for r in self.motifs:
            if r.m == m:
                return r
        raise KeyError(f"motif ({self.k},{m}) not in report")

    def select(self, motif_ids) -> "EstimateReport":
        """Copy restricted to the given ``m`` values, in the given order."""
        rows = [self.row(m) for m in motif_ids]
        return EstimateReport(self.graph, self.k, self.method, self.Q, self.runs, self.burn_in,
                              self.seed, rows, dict(self.meta), self.wall_time)

    def to_dict(self, timing: bool = False) -> dict:
        out = {f: getattr(self, f) for f in HEADER_FIELDS}
        out["motifs"] = [r.to_dict() for r in self.motifs]
        if self.meta:
            out["meta"] = dict(self.meta)
        if timing and self.wall_time is not None:
            out["wall_time"] = self.wall_time
        return out

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(jsonable(self.to_dict(timing)), indent=2) + "\n"

    def csv_rows(self) -> list[dict]:
        return [{"graph": self.graph, "k": r.k, "m": r.m, "canonical_code": r.canonical_code,
                 "method": self.method, "Q": self.Q, "runs": self.runs,
                 "concentration": r.concentration, "stderr": r.stderr, "ci95_lo": r.ci95_lo,
                 "ci95_hi": r.ci95_hi, "count_estimate": r.count_estimate}
                for r in self.motifs]

    def to_csv(self) -> str:
        return rows_to_csv(self.csv_rows(), CSV_COLUMNS)

    @classmethod
    def from_dict(cls, d: dict) -> "EstimateReport":
        try:
            rows = [MotifRow(**{f: r[f] for f in MOTIF_FIELDS}) for r in d["motifs"]]
            head = {f: d[f] for f in HEADER_FIELDS}
        except (KeyError, TypeError) as exc:
            raise ReportSchemaError(f"malformed report: missing {exc}") from None
        for r in rows:
            if r.k != head["k"]:
                raise ReportSchemaError(f"motif ({r.k},{r.m}) in a k={head['k']} report")
        return cls(**head, motifs=rows, meta=dict(d.get("meta", {})), wall_time=d.get("wall_time"))

    @classmethod
    def from_json(cls, text: str) -> "EstimateReport":
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise ReportSchemaError(f"not JSON: {exc}") from None


def jsonable(x):
    # JSON has no NaN/inf and numpy scalars do not serialize
    if isinstance(x, dict):
        return {k: jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else None
    return x


def rows_to_csv(rows: Sequence[dict], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({c: "" if r.get(c) is None else jsonable(r.get(c)) for c in columns})
    return buf.getvalue()


def mean_ci(samples, level: float = 0.95):
    """Mean, standard error and two-sided CI of the mean of ``samples``.

    Uses Student's t below 30 samples and the normal quantile otherwise;
    stderr and bounds are ``None`` for a single sample.
    """
    x = np.asarray(samples, dtype=float)
    n = len(x)
    if n == 0:
        raise ValueError("no samples")
    mean = float(x.mean())
    if n < 2:
        return mean, None, None, None
    se = float(x.std(ddof=1) / math.sqrt(n))
    q = 1 - (1 - level) / 2
    z = float(stats.t.ppf(q, n - 1)) if n < 30 else float(stats.norm.ppf(q))
    return mean, se, mean - z * se, mean + z * se


def finalize(accs, catalog=None, graph: Optional[str] = None, method: Optional[str] = None,
             Q: Optional[int] = None, burn_in: Optional[int] = None, seed: Optional[int] = None,
             node_count: Optional[int] = None, meta: Optional[dict] = None) -> EstimateReport:
    """Report from one accumulator per run.

    The concentration of each motif is the mean over runs of the per-run
    ratio ``c_m / c_t`` (a single run gives exactly ``c_m / c_t``); stderr and
    95% CI come from the spread of those ratios. Runs without any motif hit
    have no defined ratio and are left out, their number recorded in
    ``meta["empty_runs"]``. With ``node_count`` every run also estimates the
    degree sum from its visited degrees and the motif counts from it; a run
    without hits is a valid zero count, so counts average over all runs.
    """
    if isinstance(accs, EstimateAccumulator):
        accs = [accs]
    accs = list(accs)
    if not accs:
        raise ValueError("no accumulators")
    k = accs[0].k
    if any(a.k != k for a in accs):
        raise ValueError("accumulators disagree on k")
    catalog = catalog or build_catalog(5)
    entries = catalog.motifs(k)
    live = [a for a in accs if a.c_total > 0]
    if not live:
        raise NoSamplesError(f"none of {len(accs)} runs sampled a {k}-node motif")
    conc = np.array([a.concentrations() for a in live])
    counts = None
    if node_count is not None:
        counts = np.array([[estimate_motif_count(a, degree_sum_from(a, node_count), (k, e.m))
                            for e in entries] for a in accs])
    rows = []
    for j, e in enumerate(entries):
        mean, se, lo, hi = mean_ci(conc[:, j])
        count = float(counts[:, j].mean()) if counts is not None else None
        rows.append(MotifRow(k, e.m, e.canonical_code, mean, count, se, lo, hi))
    info = {"empty_runs": len(accs) - len(live),
            "queries_mean": float(np.mean([a.queries for a in accs])),
            "fetches_mean": float(np.mean([a.fetches for a in accs])),
            "steps_mean": float(np.mean([a.t for a in accs]))}
    if node_count is not None:
        info["node_count"] = node_count
        info["degree_sum_mean"] = float(np.mean([degree_sum_from(a, node_count) for a in accs]))
    info.update(meta or {})
    return EstimateReport(graph, k, method or accs[0].method, Q, len(accs), burn_in, seed,
                          rows, info)


def exact_report(counts, catalog=None, graph: Optional[str] = None) -> EstimateReport:
    """Report holding exact concentrations and counts; uncertainty fields are null."""
    catalog = catalog or build_catalog(5)
    conc = counts.concentrations()
    rows = [MotifRow(counts.k, e.m, e.canonical_code, conc[e.m - 1], counts.count(e.m))
            for e in catalog.motifs(counts.k)]
    return EstimateReport(graph, counts.k, "exact", None, None, None, None, rows,
                          {"total": counts.total}, counts.wall_time)
