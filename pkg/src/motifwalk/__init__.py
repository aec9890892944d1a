"""Motif concentration and count estimation with waddling random walks."""

from .catalog import MotifCatalog, MotifEntry, build_catalog, canonical_code
from .estimators import (BoundInputs, EstimateAccumulator, NoSamplesError, degree_sum_from,
                         estimate_degree_sum, estimate_motif_count, estimate_no_waddle,
                         estimate_wrw, estimate_wrw_4, estimate_wrw_5, estimate_wrw_generic,
                         required_steps)
from .exact import CISBudgetExceeded, ExactCounts, brute_force_subsets, enumerate_exact
from .experiment import ExperimentSpec, compare, relative_error, run_experiment
from .graph import Graph, largest_connected_component, load_edge_list
from .report import EstimateReport, exact_report, finalize
from .walk import LocalNeighborProvider, NeighborProvider, RandomWalk, WalkConfig

__version__ = "0.1.0"

_SKLEARN_API = ("ExactMotifCounter", "NoWaddleWalk", "WaddlingRandomWalk")


def __getattr__(name):
    # the estimator classes pull in scikit-learn; load them on first use
    if name in _SKLEARN_API:
        from . import base
        return getattr(base, name)
    raise AttributeError(f"module 'motifwalk' has no attribute {name!r}")

__all__ = [
    "BoundInputs", "CISBudgetExceeded", "EstimateAccumulator", "EstimateReport", "ExactCounts",
    "ExactMotifCounter", "ExperimentSpec", "Graph", "LocalNeighborProvider", "MotifCatalog",
    "MotifEntry", "NeighborProvider", "NoSamplesError", "NoWaddleWalk", "RandomWalk",
    "WaddlingRandomWalk", "WalkConfig", "brute_force_subsets", "build_catalog", "canonical_code",
    "compare", "degree_sum_from", "enumerate_exact", "estimate_degree_sum",
    "estimate_motif_count", "estimate_no_waddle", "estimate_wrw", "estimate_wrw_4",
    "estimate_wrw_5", "estimate_wrw_generic", "exact_report", "finalize",
    "largest_connected_component", "load_edge_list", "relative_error", "required_steps",
    "run_experiment",
]
