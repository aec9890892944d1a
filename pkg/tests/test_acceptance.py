"""Acceptance suite: one test per criterion, each recording a PASS/FAIL/SKIP line.

Dataset-backed criteria read edge lists from ``$MOTIFWALK_DATA_DIR`` and skip
when the files are absent. Expected file names (plain or ``.gz``):
``com-amazon.ungraph.txt``, ``soc-Slashdot0811.txt``, ``socfb-Penn94.mtx``.
"""

import glob
import math
import os
import subprocess
import sys
import time

import networkx as nx
import numpy as np
import pytest

from motifwalk.catalog import SPECIALIZED_DIVISORS, build_catalog
from motifwalk.estimators import (degree_sum_from, estimate_degree_sum, estimate_motif_count,
                                  estimate_no_waddle, estimate_wrw, estimate_wrw_generic)
from motifwalk.exact import CISBudgetExceeded, brute_force_subsets, enumerate_exact
from motifwalk.experiment import error_curve, run_many
from motifwalk.graph import Graph, largest_connected_component, load_edge_list, write_edge_list
from motifwalk.walk import WalkConfig

from conftest import ACCEPTANCE_LINES, nx_graph

DATA_DIR = os.environ.get("MOTIFWALK_DATA_DIR", "")

# reference values for the public datasets, used where exact enumeration is out of reach
REFERENCE_CONCENTRATIONS = {
    "com-amazon": {(4, 1): 6.99e-01, (4, 6): 1.55e-03, (5, 3): 7.45e-01, (5, 21): 7.24e-06},
    "soc-Slashdot": {(4, 1): 6.86e-01, (4, 6): 9.19e-05, (5, 3): 6.15e-01, (5, 21): 1.15e-06},
    "socfb-Penn94": {(4, 1): 6.52e-01, (4, 6): 3.59e-04, (5, 3): 6.18e-01, (5, 21): 2.30e-06},
}
REFERENCE_COUNTS_SLASHDOT = {(4, 1): 1.49e10, (4, 6): 1.99e6, (5, 3): 5.73e12, (5, 21): 1.07e7}
DATASET_FILES = {"com-amazon": "com-amazon.ungraph.txt*", "soc-Slashdot": "soc-Slashdot0811*",
                 "socfb-Penn94": "socfb-Penn94*"}
# exact enumeration above this many CISs falls back to the reference values
EXACT_BUDGET = 5 * 10 ** 7


def record(n, ok, text):
    status = "PASS" if ok else "FAIL"
    ACCEPTANCE_LINES.append(f"criterion {n}: {status}  {text}")
    return ok


def record_skip(n, text):
    ACCEPTANCE_LINES.append(f"criterion {n}: SKIP  {text}")
    pytest.skip(text)


def dataset(name):
    if not DATA_DIR:
        return None
    hits = sorted(glob.glob(os.path.join(DATA_DIR, DATASET_FILES[name])))
    return largest_connected_component(load_edge_list(hits[0], name=name)) if hits else None


# -- 1 -------------------------------------------------------------------------

def test_criterion_1_catalog_golden_values():
    # time a cold build in a fresh interpreter so no cache is warm
    probe = ("import time; from motifwalk.catalog import build_catalog; "
             "t = time.perf_counter(); build_catalog(5); print(time.perf_counter() - t)")
    elapsed = float(subprocess.run([sys.executable, "-c", probe], capture_output=True,
                                   text=True, check=True).stdout)
    cat = build_catalog(5)
    e = cat.entry
    checks = {
        "T3": len(cat.motifs(3)) == 2, "T4": len(cat.motifs(4)) == 6,
        "T5": len(cat.motifs(5)) == 21,
        "Pr(3,1,3)": e(3, 1).pr(3) == 2, "Pr(3,2,3)": e(3, 2).pr(3) == 6,
        "Pr(4,1,5)": e(4, 1).pr(5) == 6, "Pr(4,2,4)": e(4, 2).pr(4) == 2,
        "Pr(4,6,4)": e(4, 6).pr(4) == 24,
        "l(4,1)": e(4, 1).l == 5, "L(4,1)": e(4, 1).L == 3,
        "l(4,2)=L(4,2)=4": e(4, 2).l == e(4, 2).L == 4,
        "Pr(4,1,3)": e(4, 1).pr(3) == 6, "Pw(4,1,3)": e(4, 1).pw == 1, "Z(4,1)": e(4, 1).Z == 1,
    }
    for (k, m), want in {(4, 1): 6, (5, 2): 2, (5, 6): 4, (5, 3): 24}.items():
        ent = e(k, m)
        checks[f"divisor M({k},{m})"] = (ent.waddle_divisor == want
                                         and ent.pr(ent.L) * ent.pw // ent.Z == want
                                         and SPECIALIZED_DIVISORS[(k, m)] == want)
    failed = [name for name, ok in checks.items() if not ok]
    ok = record(1, not failed and elapsed < 1.0,
                f"catalog golden values, {len(checks) - len(failed)}/{len(checks)} exact, "
                f"cold catalog build {elapsed:.2f} s (< 1 s)" + (f"; wrong: {failed}" if failed else ""))
    assert ok


# -- 2 -------------------------------------------------------------------------

def test_criterion_2_oracle_equivalence():
    rng = np.random.default_rng(2)
    start = time.perf_counter()
    mismatches = 0
    compared = 0
    for i in range(200):
        n = int(rng.integers(5, 13))
        h = nx.gnp_random_graph(n, float(rng.uniform(0.15, 0.6)), seed=int(rng.integers(1 << 31)))
        g = nx_graph(h)
        if g.edge_count == 0:
            g = Graph.from_edges([(0, 1)], n_nodes=n)
        for k in (3, 4, 5):
            compared += 1
            if enumerate_exact(g, k).counts != brute_force_subsets(g, k).counts:
                mismatches += 1
    elapsed = time.perf_counter() - start
    ok = record(2, mismatches == 0 and elapsed < 120,
                f"ESU vs brute force on 200 random graphs (n <= 12, k = 3,4,5): "
                f"{compared - mismatches}/{compared} identical, {elapsed:.1f} s (< 120 s)")
    assert ok


# -- 3 -------------------------------------------------------------------------

SAMPLERS = {
    "no-waddle": lambda g, k, c, r: estimate_no_waddle(g, k, c, run_index=r),
    "wrw": lambda g, k, c, r: estimate_wrw(g, k, c, run_index=r),
    "wrw-generic": lambda g, k, c, r: estimate_wrw_generic(g, k, c, run_index=r),
    "wrw-random": lambda g, k, c, r: estimate_wrw_generic(g, k, c, run_index=r,
                                                          protocol="random"),
}


def test_criterion_3_trivial_exactness():
    cases = []
    for name, h in (("K4", nx.complete_graph(4)), ("K5", nx.complete_graph(5)),
                    ("star", nx.star_graph(4))):
        g = nx_graph(h)
        for k in (3, 4, 5):
            if k > g.node_count:
                continue
            counts = enumerate_exact(g, k).counts
            present = [m for m, c in enumerate(counts, 1) if c]
            assert len(present) == 1
            cases.append((name, g, k, present[0]))
    start = time.perf_counter()
    bad = []
    runs = 0
    for name, g, k, m in cases:
        want = np.zeros(len(build_catalog(5).motifs(k)))
        want[m - 1] = 1
        for method, fn in SAMPLERS.items():
            for seed in range(5):
                for r in range(4):
                    runs += 1
                    c = WalkConfig(seed=seed, burn_in=100, step_budget=300)
                    if not np.array_equal(fn(g, k, c, r).concentrations(), want):
                        bad.append((name, k, method, seed, r))
    elapsed = time.perf_counter() - start
    ok = record(3, not bad, f"K4/K5/star unique motif gets 1, others 0: {runs - len(bad)}/{runs} "
                f"seeded runs over {len(cases)} (graph, k) cases and 4 samplers, {elapsed:.1f} s")
    assert ok


# -- 4 -------------------------------------------------------------------------

def unbiasedness_fixtures():
    return {
        "gnp16": largest_connected_component(nx_graph(nx.gnp_random_graph(16, 0.3, seed=1))),
        "plc20": nx_graph(nx.powerlaw_cluster_graph(20, 2, 0.5, seed=2)),
        "lollipop": nx_graph(nx.lollipop_graph(5, 4)),
    }


def test_criterion_4_unbiasedness():
    runs, steps, z99 = 500, 2000, 2.5758293035489004
    start = time.perf_counter()
    checks = []
    misses = []
    for fname, g in unbiasedness_fixtures().items():
        for k in (3, 4, 5):
            exact = np.array(enumerate_exact(g, k).concentrations())
            for method in ("wrw", "no-waddle"):
                config = WalkConfig(seed=2024, step_budget=steps)
                conc = np.array([a.concentrations()
                                 for a in run_many(g, k, method, config, runs)])
                mean = conc.mean(axis=0)
                half = z99 * conc.std(axis=0, ddof=1) / math.sqrt(runs)
                for m in np.flatnonzero(exact >= 0.01):
                    inside = abs(mean[m] - exact[m]) <= half[m]
                    checks.append(inside)
                    if not inside:
                        z = (mean[m] - exact[m]) / (half[m] / z99)
                        misses.append(f"{fname} {method} ({k},{m + 1}) z={z:+.2f}")
    elapsed = time.perf_counter() - start
    ok = record(4, not misses and elapsed < 600,
                f"grand mean of 500 runs inside 99% CI of exact value: "
                f"{sum(checks)}/{len(checks)} (motif, estimator) checks over 3 fixtures x "
                f"k=3,4,5, {elapsed:.0f} s (< 600 s)" + (f"; outside: {misses}" if misses else ""))
    assert ok


# -- 5 -------------------------------------------------------------------------

def test_criterion_5_reference_datasets():
    found = {name: dataset(name) for name in REFERENCE_CONCENTRATIONS}
    found = {k: v for k, v in found.items() if v is not None}
    if not found:
        record_skip(5, "reference datasets not found (set MOTIFWALK_DATA_DIR)")
    lines = []
    ok = True
    for name, g in found.items():
        ref = dict(REFERENCE_CONCENTRATIONS[name])
        for k in (4, 5):
            source = "reference"
            try:
                exact = enumerate_exact(g, k, cis_budget=EXACT_BUDGET).concentrations()
                star = 1 if k == 4 else 3
                # the oracle must reproduce the reference star concentration to 3 digits
                want = REFERENCE_CONCENTRATIONS[name][(k, star)]
                ok &= f"{exact[star - 1]:.3g}" == f"{want:.3g}"
                for m in (1, 6) if k == 4 else (3, 21):
                    ref[(k, m)] = exact[m - 1]
                source = "exact"
            except CISBudgetExceeded:
                pass
            q = 8000 if k == 4 else 18000
            config = WalkConfig(seed=5, query_budget=q)
            accs = run_many(g, k, "wrw", config, 200)
            conc = np.array([a.concentrations() for a in accs]).mean(axis=0)
            for m, limit in ((1, 0.05), (6, 0.30)) if k == 4 else ((3, 0.05), (21, 0.30)):
                err = abs(conc[m - 1] - ref[(k, m)]) / ref[(k, m)]
                ok &= err < limit
                lines.append(f"{name} C({k},{m}) err {err:.2%} vs {source} (< {limit:.0%})")
    assert record(5, ok, "; ".join(lines))


# -- 6 -------------------------------------------------------------------------

def test_criterion_6_degree_sum():
    graphs = {"BA(77360, 6)": largest_connected_component(
        nx_graph(nx.barabasi_albert_graph(77360, 6, seed=5)))}
    real = dataset("soc-Slashdot")
    if real is not None:
        graphs["soc-Slashdot"] = real
    parts = []
    ok = True
    for name, g in graphs.items():
        samples = math.ceil(0.01 * g.node_count)
        errs = [abs(estimate_degree_sum(g, samples=samples,
                                        config=WalkConfig(seed=6, step_budget=samples),
                                        run_index=r) - g.degree_sum) / g.degree_sum
                for r in range(20)]
        ok &= float(np.mean(errs)) < 0.02
        parts.append(f"{name} |V|={g.node_count} D={g.degree_sum}: {samples} samples, "
                     f"mean |rel err| {np.mean(errs):.2%} over 20 runs (< 2%)")
    assert record(6, ok, "; ".join(parts))


# -- 7 -------------------------------------------------------------------------

def test_criterion_7_motif_counts():
    g = dataset("soc-Slashdot")
    if g is None:
        record_skip(7, "soc-Slashdot not found (set MOTIFWALK_DATA_DIR)")
    q = math.ceil(0.01 * g.node_count)
    parts = []
    ok = True
    for k, motifs in ((4, (1, 6)), (5, (3, 21))):
        config = WalkConfig(seed=7, query_budget=q)
        accs = run_many(g, k, "wrw", config, 20)
        for m in motifs:
            truth = REFERENCE_COUNTS_SLASHDOT[(k, m)]
            errs = [abs(estimate_motif_count(a, degree_sum_from(a, g.node_count), (k, m))
                        - truth) / truth for a in accs]
            ok &= float(np.mean(errs)) < 0.15
            parts.append(f"|S({k},{m})| mean err {np.mean(errs):.1%}")
    assert record(7, ok, f"soc-Slashdot counts at Q={q} (1% of nodes), 20 runs, each < 15%: "
                  + "; ".join(parts))


# -- 8 -------------------------------------------------------------------------

def test_criterion_8_cli_determinism(tmp_path):
    path = tmp_path / "karate.txt"
    write_edge_list(nx_graph(nx.karate_club_graph()), path)
    g = ["--graph", str(path)]
    commands = [
        ["estimate", *g, "--k", "4", "--queries", "25", "--runs", "5", "--seed", "3"],
        ["estimate", *g, "--k", "5", "--steps", "500", "--runs", "3", "--format", "csv"],
        ["estimate", *g, "--k", "3", "--method", "no-waddle", "--steps", "500", "--runs", "3"],
        ["exact", *g, "--k", "4"],
        ["compare", *g, "--k", "4", "--steps", "500", "--runs", "4", "--format", "csv"],
        ["count", *g, "--motif", "4,1", "--steps", "500", "--runs", "3", "--node-count", "34"],
        ["catalog", "--format", "csv"],
        ["bound", *g, "--k", "4", "--mixing-time", "20", "--delta", "0.1", "--alpha", "0.05",
         "--motif-count", "1000"],
    ]
    same = 0
    for argv in commands:
        outs = [subprocess.run([sys.executable, "-m", "motifwalk", *argv], capture_output=True,
                               check=False).stdout for _ in range(2)]
        same += outs[0] == outs[1] and len(outs[0]) > 0
    ok = record(8, same == len(commands), f"byte-identical output on repeat: {same}/"
                f"{len(commands)} invocations covering all 6 subcommands")
    assert ok


# -- 9 -------------------------------------------------------------------------

def test_criterion_9_error_decreases_with_budget():
    g = nx_graph(nx.powerlaw_cluster_graph(5000, 2, 0.3, seed=11))
    actual = enumerate_exact(g, 4).concentrations()[0]
    budgets = [1000, 2000, 4000, 8000]
    errs = error_curve(g, 4, 1, actual, budgets, runs=200, seed=9, query_mode="total")
    ok = all(b <= a for a, b in zip(errs, errs[1:]))
    shown = ", ".join(f"Q={q}: {e:.2%}" for q, e in zip(budgets, errs))
    assert record(9, ok, f"mean |rel err| of C(4,1) on a {g.node_count}-node graph, 200 runs "
                  f"per budget, non-increasing: {shown}")
