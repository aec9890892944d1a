"""Seeded simple random walks under a neighbor-query access model."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

DEFAULT_BURN_IN = 1000

# stream ids for SeedSequence spawn keys; never renumber
STREAMS = {"start": 0, "walk": 1, "embedding": 2}


def make_stream(seed: int, run_index: int = 0, name: str = "walk") -> np.random.Generator:
    """Independent generator for ``(seed, run_index, name)``.

    Streams depend only on these three values, so run ``r`` of a batch
    reproduces exactly when executed alone or in another process.
    """
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(run_index), STREAMS[name]))
    return np.random.Generator(np.random.PCG64(ss))


class UniformBuffer:
    """Uniform floats on [0, 1) drawn from a generator in blocks."""

    def __init__(self, rng: np.random.Generator, block: int = 4096):
        self.rng = rng
        self.block = block
        self._buf: list[float] = []
        self._pos = 0

    def next(self) -> float:
        if self._pos == len(self._buf):
            self._buf = self.rng.random(self.block).tolist()
            self._pos = 0
        u = self._buf[self._pos]
        self._pos += 1
        return u

    def below(self, n: int) -> int:
        """Uniform integer in ``range(n)``."""
        return int(self.next() * n)


class QueryLedger:
    """Counts neighbor-list fetches: distinct nodes and raw calls."""

    def __init__(self):
        self.fetched: set[int] = set()
        self.total = 0

    @property
    def distinct(self) -> int:
        return len(self.fetched)

    def charge(self, v: int) -> None:
        self.total += 1
        self.fetched.add(v)

    def used(self, mode: str = "distinct") -> int:
        return len(self.fetched) if mode == "distinct" else self.total

    def reset(self) -> tuple[int, int]:
        """Start a new accounting phase; returns the closed phase's (distinct, total)."""
        closed = (len(self.fetched), self.total)
        self.fetched = set()
        self.total = 0
        return closed


class NeighborProvider:
    """Access boundary between the estimators and the graph.

    ``neighbors`` is the paid query. ``peek``, ``degree``, ``has_edge`` and
    ``neighbor_sets[v]`` are only used for nodes whose list was already
    fetched, so a remote adapter can serve them from its cache.
    """

    node_count: Optional[int] = None
    # indexable by node id, giving a set of neighbors
    neighbor_sets = None

    def __init__(self, ledger: Optional[QueryLedger] = None):
        self.ledger = ledger if ledger is not None else QueryLedger()

    def neighbors(self, v: int):
        raise NotImplementedError

    def peek(self, v: int):
        raise NotImplementedError

    def degree(self, v: int) -> int:
        return len(self.peek(v))

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.neighbor_sets[u]


class LocalNeighborProvider(NeighborProvider):
    """Serves an in-memory :class:`~motifwalk.graph.Graph`."""

    def __init__(self, graph, ledger=None):
        super().__init__(ledger)
        self.graph = graph
        self.node_count = graph.node_count
        self._adj = graph.adjacency
        self._deg = graph.degree_list
        self.neighbor_sets = graph.adjacency_sets

    def neighbors(self, v):
        self.ledger.charge(v)
        return self._adj[v]

    def peek(self, v):
        return self._adj[v]

    def degree(self, v):
        return self._deg[v]


@dataclass
class WalkConfig:
    """Run parameters; set exactly one of ``query_budget`` and ``step_budget``.

    ``query_budget`` is compared with the ledger after burn-in; with
    ``query_mode="distinct"`` revisits are free, with ``"total"`` every
    fetch counts.
    """

    seed: int = 0
    burn_in: int = DEFAULT_BURN_IN
    query_budget: Optional[int] = None
    step_budget: Optional[int] = None
    waddle: bool = True
    query_mode: str = "distinct"
    start: Optional[int] = None

    def __post_init__(self):
        if (self.query_budget is None) == (self.step_budget is None):
            raise ValueError("set exactly one of query_budget and step_budget")
        budget = self.query_budget if self.query_budget is not None else self.step_budget
        if budget < 1:
            raise ValueError("budget must be positive")
        if self.burn_in < 0:
            raise ValueError("burn_in must be non-negative")
        if self.query_mode not in ("distinct", "total"):
            raise ValueError("query_mode must be 'distinct' or 'total'")


class RandomWalk:
    """State of one walk: recent-node window, step counter, RNG and ledger.

    ``window`` holds the last ``window_size`` visited nodes, oldest first,
    so ``window[-1]`` is the current node.
    """

    def __init__(self, provider: NeighborProvider, window_size: int = 7, seed: int = 0,
                 run_index: int = 0, start: Optional[int] = None,
                 query_budget: Optional[int] = None, step_budget: Optional[int] = None,
                 query_mode: str = "distinct"):
        self.provider = provider
        self.ledger = provider.ledger
        self.window_size = max(int(window_size), 2)
        self.rng = make_stream(seed, run_index, "walk")
        self.uniform = UniformBuffer(self.rng)
        self.query_budget = query_budget
        self.step_budget = step_budget
        self.query_mode = query_mode
        if start is None:
            if not provider.node_count:
                raise ValueError("start node required when the node count is unknown")
            start = int(make_stream(seed, run_index, "start").integers(provider.node_count))
        self._nbrs = provider.neighbors(start)
        if not self._nbrs:
            raise ValueError(f"start node {start} has no neighbors")
        self.window = [start]
        self.step_index = 0
        self.burned_in = False
        self.sampled_steps = 0
        self.burn_in_queries = (0, 0)

    @classmethod
    def from_config(cls, provider, config: WalkConfig, window_size=7, run_index=0):
        return cls(provider, window_size=window_size, seed=config.seed, run_index=run_index,
                   start=config.start, query_budget=config.query_budget,
                   step_budget=config.step_budget, query_mode=config.query_mode)

    @property
    def current(self) -> int:
        return self.window[-1]

    def step(self) -> int:
        nbrs = self._nbrs
        v = nbrs[int(self.uniform.next() * len(nbrs))]
        self._nbrs = self.provider.neighbors(v)
        w = self.window
        w.append(v)
        if len(w) > self.window_size:
            del w[0]
        self.step_index += 1
        if self.burned_in:
            self.sampled_steps += 1
        return v

    def burn_in(self, steps: int = DEFAULT_BURN_IN) -> None:
        """Advance ``steps`` steps, then open the sampling phase of the ledger."""
        if steps < 0:
            raise ValueError("steps must be non-negative")
        for _ in range(steps):
            self.step()
        self.burned_in = True
        self.burn_in_queries = self.ledger.reset()

    @property
    def exhausted(self) -> bool:
        if self.step_budget is not None:
            return self.sampled_steps >= self.step_budget
        if self.query_budget is not None:
            used = self.ledger.used(self.query_mode)
            if self.query_mode == "distinct" and self.provider.node_count:
                # a budget above |V| is unreachable once every node is cached
                return used >= min(self.query_budget, self.provider.node_count)
            return used >= self.query_budget
        return False

    def waddle_sample(self, anchor: int, count: int = 1) -> tuple[list[int], float]:
        """``count`` independent uniform neighbors of ``anchor`` and their joint probability."""
        nbrs = self.provider.peek(anchor)
        d = len(nbrs)
        fetch = self.provider.neighbors
        out = []
        for _ in range(count):
            w = nbrs[int(self.uniform.next() * d)]
            fetch(w)
            out.append(w)
        return out, 1.0 / d ** count

    def path_weight(self, s: int) -> int:
        """Product of the degrees of the ``s - 2`` interior nodes of the last ``s``."""
        if len(self.window) < s:
            raise ValueError(f"window holds {len(self.window)} nodes, need {s}")
        degree = self.provider.degree
        out = 1
        for v in self.window[len(self.window) - s + 1:-1]:
            out *= degree(v)
        return out
