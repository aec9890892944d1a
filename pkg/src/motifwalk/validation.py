"""Input checks shared by the estimator classes and the CLI."""

from __future__ import annotations

import numbers

import numpy as np

from .graph import Graph, graph_from_networkx, largest_connected_component


def check_graph(X, connected: str = "raise") -> Graph:
    """Coerce ``X`` to a :class:`Graph`.

    Accepts a ``Graph``, an ``(m, 2)`` integer edge array, a square scipy
    sparse adjacency matrix or a networkx graph. ``connected`` decides what
    happens with a disconnected graph: ``"raise"``, ``"lcc"`` (keep the
    largest component) or ``"ignore"``.
    """
    if isinstance(X, Graph):
        g = X
    elif hasattr(X, "tocoo") and hasattr(X, "shape"):
        if X.shape[0] != X.shape[1]:
            raise ValueError(f"adjacency matrix must be square, got shape {X.shape}")
        coo = X.tocoo()
        g = Graph.from_edges(np.column_stack([coo.row, coo.col]), n_nodes=X.shape[0])
    elif hasattr(X, "nodes") and hasattr(X, "edges"):
        g = graph_from_networkx(X)
    else:
        arr = np.asarray(X)
        if arr.ndim != 2 or arr.shape[1] != 2 or not np.issubdtype(arr.dtype, np.integer):
            raise ValueError("expected a Graph, an (m, 2) integer edge array, a sparse "
                             "adjacency matrix or a networkx graph")
        g = Graph.from_edges(arr)
    if g.node_count == 0 or g.edge_count == 0:
        raise ValueError("graph has no edges")
    if connected == "lcc":
        return largest_connected_component(g)
    if connected == "raise" and not g.connected:
        raise ValueError("graph is not connected")
    return g


def check_graphs(X) -> list[Graph]:
    """A single graph-like object or a list of them, as a list of graphs."""
    if isinstance(X, (list, tuple)) and X and not _is_edge_pair(X[0]):
        return [check_graph(x) for x in X]
    return [check_graph(X)]


def _is_edge_pair(x) -> bool:
    return isinstance(x, (list, tuple, np.ndarray)) and len(x) == 2 and all(
        isinstance(v, numbers.Integral) for v in x)


def check_k(k) -> int:
    if isinstance(k, bool) or not isinstance(k, numbers.Integral) or k not in (3, 4, 5):
        raise ValueError(f"k must be 3, 4 or 5, got {k!r}")
    return int(k)


def check_positive_int(name: str, value, allow_none: bool = False):
    if value is None and allow_none:
        return None
    if isinstance(value, bool) or not isinstance(value, numbers.Integral) or value < 1:
        raise ValueError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


def check_budget(queries, steps) -> tuple:
    if (queries is None) == (steps is None):
        raise ValueError("set exactly one of queries and steps")
    return (check_positive_int("queries", queries, True),
            check_positive_int("steps", steps, True))


def parse_motif(text: str) -> tuple[int, int]:
    """``"4,1"`` -> ``(4, 1)``."""
    parts = text.replace(" ", "").split(",")
    if len(parts) != 2:
        raise ValueError(f"motif must look like k,m, got {text!r}")
    try:
        k, m = int(parts[0]), int(parts[1])
    except ValueError:
        raise ValueError(f"motif must look like k,m, got {text!r}") from None
    return k, m


def check_motif(k: int, m: int, catalog) -> tuple[int, int]:
    check_k(k)
    n = len(catalog.motifs(k))
    if not 1 <= m <= n:
        raise ValueError(f"motif id m for k={k} must be in 1..{n}, got {m}")
    return k, m
