"""Undirected simple graphs in CSR form, edge-list I/O and component extraction."""

from __future__ import annotations

import io
import os
from bisect import bisect_left
from functools import cached_property
from typing import Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

CACHE_FORMAT_VERSION = 1
COMMENT_PREFIXES = ("#", "%")


class GraphFormatError(ValueError):
    """Raised on a malformed edge-list line."""

    def __init__(self, message, line_number=None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class EmptyGraphError(ValueError):
    pass


class Graph:
    """Immutable undirected simple graph.

    Neighbor lists are stored sorted in CSR arrays (``indptr``, ``indices``).
    ``labels[i]`` is the external id of internal node ``i``.

    Build one with :func:`load_edge_list` or :meth:`Graph.from_edges`; the
    constructor expects already-normalized CSR arrays.
    """

    def __init__(self, indptr, indices, labels=None, name=None):
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.indices = np.asarray(indices, dtype=np.int64)
        n = len(self.indptr) - 1
        if labels is None:
            labels = np.arange(n, dtype=np.int64)
        self.labels = np.asarray(labels, dtype=np.int64)
        self.name = name
        self.indptr.setflags(write=False)
        self.indices.setflags(write=False)
        self.labels.setflags(write=False)

    @classmethod
    def from_edges(cls, edges, n_nodes=None, labels=None, name=None) -> "Graph":
        """Build a graph from an ``(m, 2)`` array of internal ids.

        Self-loops are dropped, duplicates removed and every edge symmetrized.
        """
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if edges.size and edges.min() < 0:
            raise ValueError("node ids must be non-negative")
        if n_nodes is None:
            n_nodes = int(edges.max()) + 1 if edges.size else 0
        u, v = edges[:, 0], edges[:, 1]
        keep = u != v
        u, v = u[keep], v[keep]
        rows = np.concatenate([u, v])
        cols = np.concatenate([v, u])
        if rows.size:
            key = np.unique(rows * n_nodes + cols)
            rows, cols = np.divmod(key, n_nodes)
        indptr = np.zeros(n_nodes + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=n_nodes), out=indptr[1:])
        # np.unique sorted by (row, col): indices are already grouped and sorted
        return cls(indptr, cols, labels=labels, name=name)

    @property
    def node_count(self) -> int:
        return len(self.indptr) - 1

    @property
    def edge_count(self) -> int:
        return len(self.indices) // 2

    @cached_property
    def degrees(self) -> np.ndarray:
        d = np.diff(self.indptr)
        d.setflags(write=False)
        return d

    @property
    def degree_sum(self) -> int:
        return len(self.indices)

    @cached_property
    def connected(self) -> bool:
        return self.node_count > 0 and largest_connected_component(self) is self

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    @cached_property
    def adjacency(self) -> list[tuple[int, ...]]:
        """Sorted neighbor tuples as plain Python ints, for tight loops."""
        flat = self.indices.tolist()
        bounds = self.indptr.tolist()
        return [tuple(flat[bounds[i]:bounds[i + 1]]) for i in range(self.node_count)]

    @cached_property
    def adjacency_sets(self) -> list[frozenset]:
        """Neighbor sets for O(1) membership tests in sampling loops."""
        return [frozenset(a) for a in self.adjacency]

    @cached_property
    def degree_list(self) -> list[int]:
        return self.degrees.tolist()

    def has_edge(self, u: int, v: int) -> bool:
        # search the shorter sorted list
        adj = self.adjacency
        a, b = adj[u], adj[v]
        if len(a) > len(b):
            a, v = b, u
        i = bisect_left(a, v)
        return i < len(a) and a[i] == v

    def edges(self) -> np.ndarray:
        """Each undirected edge once as ``(u, v)`` with ``u < v``."""
        rows = np.repeat(np.arange(self.node_count), self.degrees)
        mask = rows < self.indices
        return np.column_stack([rows[mask], self.indices[mask]])

    def subgraph(self, nodes) -> "Graph":
        """Induced subgraph on ``nodes``; ids re-densified in ascending order."""
        nodes = np.unique(np.asarray(nodes, dtype=np.int64))
        remap = np.full(self.node_count, -1, dtype=np.int64)
        remap[nodes] = np.arange(len(nodes))
        e = self.edges()
        e = remap[e]
        e = e[(e >= 0).all(axis=1)]
        return Graph.from_edges(e, n_nodes=len(nodes), labels=self.labels[nodes], name=self.name)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices))

    __hash__ = None

    def __repr__(self):
        name = f"{self.name!r}, " if self.name else ""
        return f"Graph({name}nodes={self.node_count}, edges={self.edge_count})"


def _open_text(source):
    if isinstance(source, (str, os.PathLike)):
        path = os.fspath(source)
        if path.endswith(".gz"):
            import gzip
            return gzip.open(path, "rt"), True
        return open(path, "r"), True
    if isinstance(source, io.TextIOBase) or hasattr(source, "readline"):
        return source, False
    # an iterable of lines
    return iter(source), False


def load_edge_list(source, delimiter=None, comments=COMMENT_PREFIXES, name=None) -> Graph:
    """Parse a SNAP/KONECT style edge list into a simple undirected graph.

    Parameters
    ----------
    source : path, open text file, or iterable of lines
        ``.gz`` paths are decompressed transparently.
    delimiter : str, optional
        Token separator; any whitespace when ``None``.
    comments : tuple of str
        Lines starting with one of these prefixes are skipped.

    Only the first two tokens of a line are read, so KONECT files with
    weight/timestamp columns load as well. External ids are remapped to
    dense internal ids in first-seen order; ``Graph.labels`` keeps the
    originals.

    Raises
    ------
    GraphFormatError
        Fewer than two tokens or a token that is not a non-negative integer.
    EmptyGraphError
        No edge survives normalization.
    """
    handle, owned = _open_text(source)
    if name is None and isinstance(source, (str, os.PathLike)):
        name = os.path.basename(os.fspath(source))
    ids: dict[int, int] = {}
    us: list[int] = []
    vs: list[int] = []
    try:
        for lineno, line in enumerate(handle, start=1):
            line = line.strip()
            if not line or line.startswith(tuple(comments)):
                continue
            parts = line.split(delimiter)
            if len(parts) < 2:
                raise GraphFormatError(f"expected two node ids, got {line!r}", lineno)
            try:
                a, b = int(parts[0]), int(parts[1])
            except ValueError:
                raise GraphFormatError(f"non-integer node id in {line!r}", lineno) from None
            if a < 0 or b < 0:
                raise GraphFormatError(f"negative node id in {line!r}", lineno)
            if a == b:
                continue
            for x in (a, b):
                if x not in ids:
                    ids[x] = len(ids)
            us.append(ids[a])
            vs.append(ids[b])
    finally:
        if owned:
            handle.close()
    if not us:
        raise EmptyGraphError("edge list contains no edges")
    labels = np.fromiter(ids.keys(), dtype=np.int64, count=len(ids))
    edges = np.column_stack([np.asarray(us, dtype=np.int64), np.asarray(vs, dtype=np.int64)])
    return Graph.from_edges(edges, n_nodes=len(ids), labels=labels, name=name)


def write_edge_list(g: Graph, target, use_labels=True) -> None:
    """Write each undirected edge once, ``u v`` per line."""
    e = g.edges()
    if use_labels:
        e = g.labels[e]
    own = isinstance(target, (str, os.PathLike))
    fh = open(target, "w") if own else target
    try:
        fh.write(f"# nodes {g.node_count} edges {g.edge_count}\n")
        for u, v in e.tolist():
            fh.write(f"{u} {v}\n")
    finally:
        if own:
            fh.close()


def save_cache(g: Graph, path) -> None:
    np.savez_compressed(path, version=np.int64(CACHE_FORMAT_VERSION), indptr=g.indptr,
                        indices=g.indices, labels=g.labels, name=np.str_(g.name or ""))


def load_cache(path) -> Graph:
    with np.load(path) as data:
        version = int(data["version"])
        if version != CACHE_FORMAT_VERSION:
            raise GraphFormatError(f"unsupported cache version {version}")
        return Graph(data["indptr"], data["indices"], data["labels"], name=str(data["name"]) or None)


def largest_connected_component(g: Graph) -> Graph:
    """Induced subgraph on the largest component.

    Ties go to the component holding the smallest internal id.
    """
    if g.node_count == 0:
        raise EmptyGraphError("graph has no nodes")
    n = g.node_count
    rows = np.repeat(np.arange(n), g.degrees)
    adj = coo_matrix((np.ones(len(rows), dtype=np.int8), (rows, g.indices)), shape=(n, n))
    n_comp, comp = connected_components(adj, directed=False)
    if n_comp == 1:
        return g
    sizes = np.bincount(comp, minlength=n_comp)
    first = np.full(n_comp, n, dtype=np.int64)
    np.minimum.at(first, comp, np.arange(n))
    # largest size first, then smallest contained id
    best = min(range(n_comp), key=lambda c: (-sizes[c], first[c]))
    return g.subgraph(np.flatnonzero(comp == best))


def is_connected(g: Graph) -> bool:
    return g.connected


def pair_index(k: int) -> list[tuple[int, int]]:
    """Bit order used by edge bitmasks: (0,1), (0,2), ..., (k-2,k-1)."""
    return [(i, j) for i in range(k) for j in range(i + 1, k)]


def induced_subgraph_edges(g: Graph, nodes: Sequence[int]) -> int:
    """Edge bitmask of the subgraph induced by ``nodes``, in the given order.

    Bit ``b`` is set when the ``b``-th pair of :func:`pair_index` is an edge,
    pairs being positions in ``nodes``. Reordering ``nodes`` permutes the bits.
    """
    k = len(nodes)
    if not 2 <= k <= 5:
        raise ValueError("induced_subgraph_edges supports 2 to 5 nodes")
    code = 0
    bit = 1
    has_edge = g.has_edge
    for i in range(k):
        for j in range(i + 1, k):
            if has_edge(nodes[i], nodes[j]):
                code |= bit
            bit <<= 1
    return code


def graph_from_networkx(nx_graph, name=None) -> Graph:
    """Convert a networkx graph; node objects are relabeled in iteration order."""
    index = {v: i for i, v in enumerate(nx_graph.nodes())}
    edges = [(index[a], index[b]) for a, b in nx_graph.edges()]
    labels = None
    if all(isinstance(v, (int, np.integer)) and v >= 0 for v in index):
        labels = np.fromiter(index.keys(), dtype=np.int64, count=len(index))
    return Graph.from_edges(np.asarray(edges, dtype=np.int64).reshape(-1, 2), n_nodes=len(index),
                            labels=labels, name=name)
