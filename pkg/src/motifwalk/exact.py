"""Exact motif counts by enumerating every connected induced k-subgraph."""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import combinations

from .catalog import build_catalog
from .graph import Graph, pair_index

DEFAULT_CIS_BUDGET = 10 ** 9


class CISBudgetExceeded(RuntimeError):
    def __init__(self, budget, roots_done, roots_total, found):
        super().__init__(
            f"more than {budget} connected subgraphs; aborted after {roots_done}/{roots_total} "
            f"root vertices with {found} found")
        self.budget = budget
        self.roots_done = roots_done
        self.roots_total = roots_total
        self.found = found


@dataclass
class ExactCounts:
    k: int
    counts: list          # counts[m - 1] = |S(k, m)|, Python ints
    wall_time: float = 0.0

    @property
    def total(self) -> int:
        return sum(self.counts)

    def count(self, m: int) -> int:
        return self.counts[m - 1]

    def concentrations(self) -> list[float]:
        total = self.total
        if total == 0:
            raise ValueError(f"graph has no connected {self.k}-node subgraphs")
        return [c / total for c in self.counts]

    def __add__(self, other):
        if other.k != self.k:
            raise ValueError("cannot add counts for different motif sizes")
        return ExactCounts(self.k, [a + b for a, b in zip(self.counts, other.counts)],
                           self.wall_time + other.wall_time)


def _classifier(k, catalog, adj_sets):
    table = (catalog or build_catalog(5)).tables[k]
    bits = [(i, j, 1 << b) for b, (i, j) in enumerate(pair_index(k))]

    def classify(nodes):
        code = 0
        for i, j, bit in bits:
            if nodes[j] in adj_sets[nodes[i]]:
                code |= bit
        return table[code]

    return classify


def enumerate_exact(g: Graph, k: int, catalog=None, cis_budget: int = DEFAULT_CIS_BUDGET,
                    roots=None, visit=None) -> ExactCounts:
    """Count connected induced ``k``-subgraphs by motif, each exactly once.

    Uses exclusive-neighborhood expansion (ESU): a subgraph rooted at its
    smallest vertex ``v`` only grows by vertices larger than ``v`` that are
    not already adjacent to the current subgraph, which yields every
    connected vertex set once. ``roots`` restricts the enumeration to the
    given root vertices, so disjoint root sets can be counted separately and
    added. ``visit`` is called with each emitted vertex list.
    """
    if k not in (3, 4, 5):
        raise ValueError("k must be 3, 4 or 5")
    start = time.perf_counter()
    adj = [frozenset(a) for a in g.adjacency]
    classify = _classifier(k, catalog, adj)
    counts = [0] * (len(build_catalog(5).motifs(k)) + 1)
    roots = range(g.node_count) if roots is None else list(roots)
    n_roots = len(roots)
    found = 0

    def extend(sub, ext, nbhd, v):
        # sub: current vertices, ext: candidate extensions, nbhd: sub plus its neighbors
        nonlocal found
        if len(sub) == k:
            counts[classify(sub)] += 1
            found += 1
            if visit is not None:
                visit(sub)
            return
        ext = list(ext)
        while ext:
            w = ext.pop()
            new = [u for u in adj[w] if u > v and u not in nbhd]
            extend(sub + [w], ext + new, nbhd | adj[w], v)

    for done, v in enumerate(roots):
        if found > cis_budget:
            raise CISBudgetExceeded(cis_budget, done, n_roots, found)
        ext = [u for u in adj[v] if u > v]
        extend([v], ext, adj[v] | {v}, v)
    if found > cis_budget:
        raise CISBudgetExceeded(cis_budget, n_roots, n_roots, found)
    return ExactCounts(k, counts[1:], time.perf_counter() - start)


def brute_force_subsets(g: Graph, k: int, catalog=None, max_nodes: int = 14) -> ExactCounts:
    """Reference counts from all ``C(n, k)`` vertex subsets; for small test graphs only."""
    if g.node_count > max_nodes:
        raise ValueError(f"brute force is limited to {max_nodes} nodes")
    start = time.perf_counter()
    adj = [frozenset(a) for a in g.adjacency]
    classify = _classifier(k, catalog, adj)
    counts = [0] * (len(build_catalog(5).motifs(k)) + 1)
    for subset in combinations(range(g.node_count), k):
        members = set(subset)
        seen = {subset[0]}
        stack = [subset[0]]
        while stack:
            x = stack.pop()
            for y in adj[x] & members:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if len(seen) == k:
            counts[classify(subset)] += 1
    return ExactCounts(k, counts[1:], time.perf_counter() - start)
