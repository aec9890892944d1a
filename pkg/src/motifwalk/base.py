"""Scikit-learn style wrappers: graphs in, motif-concentration feature vectors out."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .catalog import build_catalog
from .exact import DEFAULT_CIS_BUDGET, enumerate_exact
from .experiment import run_many
from .report import exact_report, finalize
from .validation import check_budget, check_graphs, check_k, check_positive_int
from .walk import DEFAULT_BURN_IN, WalkConfig


class _MotifTransformer(TransformerMixin, BaseEstimator):
    """Shared fit/transform logic.

    ``fit`` estimates the concentrations of the given graph (or list of
    graphs) and stores them in ``concentrations_`` and ``reports_``;
    ``transform`` maps graphs to rows of ``T_k`` concentrations without
    touching the fitted state. There is no ``predict``: the output is a
    feature vector, not a target.
    """

    def _report(self, g):
        raise NotImplementedError

    def _check_params(self):
        check_k(self.k)

    def fit(self, X, y=None):
        self._check_params()
        graphs = check_graphs(X)
        self.reports_ = [self._report(g) for g in graphs]
        self.concentrations_ = np.array([[r.concentration for r in rep.motifs]
                                         for rep in self.reports_])
        self.n_motifs_ = self.concentrations_.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "concentrations_")
        self._check_params()
        return np.array([[r.concentration for r in self._report(g).motifs]
                         for g in check_graphs(X)])

    def fit_transform(self, X, y=None, **fit_params):
        return self.fit(X).concentrations_

    def get_feature_names_out(self, input_features=None):
        return np.array([f"M({self.k},{e.m})" for e in build_catalog(5).motifs(self.k)],
                        dtype=object)


class WaddlingRandomWalk(_MotifTransformer):
    """Motif concentrations from ``runs`` seeded waddling random walks.

    Parameters
    ----------
    k : int
        Motif size, 3 to 5.
    queries, steps : int
        Per-run budget; set exactly one.
    runs : int
        Independent walks; the estimate is the mean of their ratios.
    node_count : int, optional
        Known ``|V|``; enables count estimates in ``reports_``.
    """

    _method = "wrw"

    def __init__(self, k=4, queries=None, steps=None, runs=1, burn_in=DEFAULT_BURN_IN, seed=0,
                 query_mode="distinct", node_count=None):
        self.k = k
        self.queries = queries
        self.steps = steps
        self.runs = runs
        self.burn_in = burn_in
        self.seed = seed
        self.query_mode = query_mode
        self.node_count = node_count

    def _check_params(self):
        super()._check_params()
        check_budget(self.queries, self.steps)
        check_positive_int("runs", self.runs)

    def _report(self, g):
        config = WalkConfig(seed=self.seed, burn_in=self.burn_in, query_budget=self.queries,
                            step_budget=self.steps, query_mode=self.query_mode)
        accs = run_many(g, self.k, self._method, config, self.runs)
        return finalize(accs, graph=g.name, method=self._method, Q=self.queries,
                        burn_in=self.burn_in, seed=self.seed, node_count=self.node_count)


class NoWaddleWalk(WaddlingRandomWalk):
    """Baseline: motifs recognized from walk windows alone, without waddle queries."""

    _method = "no-waddle"


class ExactMotifCounter(_MotifTransformer):
    """Exact concentrations by full enumeration; for graphs of a few thousand nodes at most."""

    def __init__(self, k=4, cis_budget=DEFAULT_CIS_BUDGET):
        self.k = k
        self.cis_budget = cis_budget

    def _report(self, g):
        counts = enumerate_exact(g, self.k, cis_budget=self.cis_budget)
        return exact_report(counts, graph=g.name)
