"""Random-walk motif estimators.

All samplers follow the same pattern: burn in, then at every step add a
Horvitz-Thompson style increment to ``c[m]`` whenever the recently visited
nodes (plus, for the waddling walk, a few randomly queried neighbors)
induce motif ``m``. Each increment is the inverse sampling probability
times ``D`` divided by the number of ways one motif instance can be
sampled, so ``E[c[m] / t] = |S(k, m)| / D`` for every motif and the ratio
``c[m] / sum(c)`` estimates the concentration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .catalog import MotifCatalog, build_catalog
from .graph import Graph, pair_index
from .walk import LocalNeighborProvider, NeighborProvider, RandomWalk, WalkConfig, make_stream


class NoSamplesError(RuntimeError):
    """The walk produced no motif hits, so nothing can be normalized."""


class DisconnectedGraphError(ValueError):
    pass


@dataclass
class EstimateAccumulator:
    """Running sums of one or more walks.

    ``c[m - 1]`` collects the increments for motif ``(k, m)``; ``t`` counts
    sampled steps (every post-burn-in step, hit or not) and
    ``inv_degree_sum`` the sum of ``1 / d`` over the nodes visited in them.
    """

    k: int
    c: np.ndarray
    t: int = 0
    inv_degree_sum: float = 0.0
    runs_merged: int = 1
    queries: int = 0
    fetches: int = 0
    method: str = ""

    @classmethod
    def empty(cls, k, n_motifs, method=""):
        return cls(k=k, c=np.zeros(n_motifs), method=method)

    @property
    def c_total(self) -> float:
        return float(self.c.sum())

    def concentrations(self) -> np.ndarray:
        total = self.c_total
        if total <= 0:
            raise NoSamplesError("no motif was sampled")
        return self.c / total

    def merge(self, other: "EstimateAccumulator") -> "EstimateAccumulator":
        if other.k != self.k or len(other.c) != len(self.c):
            raise ValueError("cannot merge accumulators for different motif sizes")
        return EstimateAccumulator(
            k=self.k, c=self.c + other.c, t=self.t + other.t,
            inv_degree_sum=self.inv_degree_sum + other.inv_degree_sum,
            runs_merged=self.runs_merged + other.runs_merged,
            queries=self.queries + other.queries, fetches=self.fetches + other.fetches,
            method=self.method if self.method == other.method else "mixed")


def merge_all(accs) -> EstimateAccumulator:
    accs = list(accs)
    if not accs:
        raise ValueError("nothing to merge")
    out = accs[0]
    for a in accs[1:]:
        out = out.merge(a)
    return out


# -- helpers -----------------------------------------------------------------

def _provider(source) -> NeighborProvider:
    if isinstance(source, NeighborProvider):
        return source
    if isinstance(source, Graph):
        if not source.connected:
            raise DisconnectedGraphError(
                "graph is not connected; run largest_connected_component first")
        return LocalNeighborProvider(source)
    raise TypeError(f"expected a Graph or NeighborProvider, got {type(source).__name__}")


def _catalog(catalog, k) -> MotifCatalog:
    if k not in (3, 4, 5):
        raise ValueError("k must be 3, 4 or 5")
    if catalog is None or catalog.k_max < k:
        catalog = build_catalog(5)
    return catalog


def _bit_pairs(k):
    return [(i, j, 1 << b) for b, (i, j) in enumerate(pair_index(k))]


def _start(provider, config, window, run_index):
    walk = RandomWalk.from_config(provider, config, window_size=window, run_index=run_index)
    walk.burn_in(config.burn_in)
    return walk


def _finish(acc, walk, c):
    acc.c = np.asarray(c, dtype=float)
    acc.queries = walk.ledger.used(walk.query_mode)
    acc.fetches = walk.ledger.total
    return acc


# -- no-waddle baseline --------------------------------------------------------

def estimate_no_waddle(source, k: int, config: WalkConfig, catalog=None,
                       run_index: int = 0) -> EstimateAccumulator:
    """Walk-only estimator: motif ``m`` is recognized on windows of ``l(k, m)`` nodes.

    A window counts toward ``m`` when it holds exactly ``k`` distinct nodes
    inducing ``m``; the increment is the product of its interior degrees
    divided by ``P_r(k, m, l)``.
    """
    catalog = _catalog(catalog, k)
    provider = _provider(source)
    motifs = catalog.motifs(k)
    table = catalog.tables[k]
    # s -> per-motif divisor, 0 where motif m is recognized at another length
    by_s: dict[int, list[int]] = {}
    for e in motifs:
        by_s.setdefault(e.l, [0] * (len(motifs) + 1))[e.m] = e.pr(e.l)
    groups = sorted(by_s.items(), reverse=True)
    width = max(by_s)
    bits = _bit_pairs(k)
    degree = provider.degree
    nsets = provider.neighbor_sets

    walk = _start(provider, config, width, run_index)
    acc = EstimateAccumulator.empty(k, len(motifs), "no-waddle")
    c = [0.0] * len(motifs)
    t = 0
    inv_deg = 0.0
    win = walk.window
    while not walk.exhausted:
        walk.step()
        t += 1
        inv_deg += 1.0 / degree(win[-1])
        n_win = len(win)
        for s, divisors in groups:
            if n_win < s:
                continue
            x = win[n_win - s:]
            nodes = list(dict.fromkeys(x))
            if len(nodes) != k:
                continue
            code = 0
            for i, j, bit in bits:
                if nodes[j] in nsets[nodes[i]]:
                    code |= bit
            m = table[code]
            if m and divisors[m]:
                f = 1
                for v in x[1:-1]:
                    f *= degree(v)
                c[m - 1] += f / divisors[m]
    acc.t = t
    acc.inv_degree_sum = inv_deg
    return _finish(acc, walk, c)


# -- waddling random walk ------------------------------------------------------

@dataclass
class _WaddleGroup:
    s: int
    plan: tuple
    divisors: list = field(default_factory=list)   # indexed by m, 0 = not in group


def _waddle_groups(motifs, k):
    direct = [0] * (len(motifs) + 1)
    groups: dict[tuple, _WaddleGroup] = {}
    for e in motifs:
        if e.L == k:
            direct[e.m] = e.pr(k)
        else:
            g = groups.setdefault((e.L, e.waddle_plan),
                                  _WaddleGroup(e.L, e.waddle_plan, [0] * (len(motifs) + 1)))
            g.divisors[e.m] = e.waddle_divisor
    # longer windows first: the specialized samplers draw in this order
    ordered = sorted(groups.values(), key=lambda g: (-g.s, g.plan))
    return direct, ordered


def _draw(plan, x, walk, provider):
    """Waddle nodes for ``plan`` on window ``x`` and the inverse of their probability."""
    peek = provider.peek
    fetch = provider.neighbors
    nxt = walk.uniform.next
    drawn = []
    inv_phi = 1
    for kind, ref in plan:
        anchor = x[ref] if kind == 0 else drawn[ref]
        nbrs = peek(anchor)
        d = len(nbrs)
        w = nbrs[int(nxt() * d)]
        fetch(w)
        drawn.append(w)
        inv_phi *= d
    return drawn, inv_phi


def estimate_wrw_generic(source, k: int, config: WalkConfig, catalog=None,
                         run_index: int = 0, protocol: str = "canonical") -> EstimateAccumulator:
    """Waddling random walk for any motif size in the catalog.

    For each motif the last ``s = L(k, m)`` nodes must be distinct. When
    ``s == k`` they are classified directly. Otherwise ``k - s`` extra nodes
    are drawn as uniform neighbors of anchors given by a waddle plan and the
    union is classified; a hit adds ``f / (phi * divisor)``.

    ``protocol="canonical"`` uses each motif's fixed plan and shares one
    draw among motifs with the same plan (this reproduces the specialized
    4- and 5-node samplers draw for draw). ``protocol="random"`` maps a
    uniformly chosen longest-path embedding onto the window first and takes
    that embedding's plan, drawing separately for every motif.
    """
    if protocol not in ("canonical", "random"):
        raise ValueError("protocol must be 'canonical' or 'random'")
    catalog = _catalog(catalog, k)
    provider = _provider(source)
    motifs = catalog.motifs(k)
    table = catalog.tables[k]
    direct, groups = _waddle_groups(motifs, k)
    waddled = [e for e in motifs if e.needs_waddle]
    bits = _bit_pairs(k)
    degree = provider.degree
    nsets = provider.neighbor_sets

    walk = _start(provider, config, k, run_index)
    embed_rng = make_stream(config.seed, run_index, "embedding")
    acc = EstimateAccumulator.empty(k, len(motifs), f"wrw-{protocol}")
    c = [0.0] * len(motifs)
    t = 0
    inv_deg = 0.0
    win = walk.window
    while not walk.exhausted:
        walk.step()
        t += 1
        inv_deg += 1.0 / degree(win[-1])
        n_win = len(win)

        if n_win >= k:
            x = win[n_win - k:]
            if len(set(x)) == k:
                code = 0
                for i, j, bit in bits:
                    if x[j] in nsets[x[i]]:
                        code |= bit
                m = table[code]
                if direct[m]:
                    f = 1
                    for v in x[1:-1]:
                        f *= degree(v)
                    c[m - 1] += f / direct[m]

        if protocol == "canonical":
            for g in groups:
                s = g.s
                if n_win < s:
                    continue
                x = win[n_win - s:]
                if len(set(x)) != s:
                    continue
                drawn, inv_phi = _draw(g.plan, x, walk, provider)
                nodes = x + drawn
                if len(set(nodes)) != k:
                    continue
                code = 0
                for i, j, bit in bits:
                    if nodes[j] in nsets[nodes[i]]:
                        code |= bit
                m = table[code]
                if m and g.divisors[m]:
                    f = 1
                    for v in x[1:-1]:
                        f *= degree(v)
                    c[m - 1] += f * inv_phi / g.divisors[m]
        else:
            for e in waddled:
                s = e.L
                if n_win < s:
                    continue
                x = win[n_win - s:]
                if len(set(x)) != s:
                    continue
                plan, divisor = e.embedding_plans[int(embed_rng.integers(len(e.embedding_plans)))]
                drawn, inv_phi = _draw(plan, x, walk, provider)
                nodes = x + drawn
                if len(set(nodes)) != k:
                    continue
                code = 0
                for i, j, bit in bits:
                    if nodes[j] in nsets[nodes[i]]:
                        code |= bit
                if table[code] == e.m:
                    f = 1
                    for v in x[1:-1]:
                        f *= degree(v)
                    c[e.m - 1] += f * inv_phi / divisor

    acc.t = t
    acc.inv_degree_sum = inv_deg
    return _finish(acc, walk, c)


def estimate_wrw_4(source, config: WalkConfig, catalog=None, run_index: int = 0) -> EstimateAccumulator:
    """Hand-unrolled waddling walk for 4-node motifs.

    Distinct 4-node windows are classified directly; a distinct 3-node
    window plus one random neighbor of its middle node is tested against
    the 4-star.
    """
    catalog = _catalog(catalog, 4)
    provider = _provider(source)
    motifs = catalog.motifs(4)
    table = catalog.tables[4]
    pr4 = [0] + [e.pr(4) for e in motifs]
    bits = _bit_pairs(4)
    degree = provider.degree
    nsets = provider.neighbor_sets
    peek = provider.peek
    fetch = provider.neighbors

    walk = _start(provider, config, 4, run_index)
    nxt = walk.uniform.next
    acc = EstimateAccumulator.empty(4, len(motifs), "wrw-4")
    c = [0.0] * len(motifs)
    t = 0
    inv_deg = 0.0
    win = walk.window
    while not walk.exhausted:
        walk.step()
        t += 1
        r0 = win[-1]
        inv_deg += 1.0 / degree(r0)
        n_win = len(win)
        if n_win < 3:
            continue
        r1, r2 = win[-2], win[-3]
        if n_win >= 4:
            r3 = win[-4]
            x = (r3, r2, r1, r0)
            if len(set(x)) == 4:
                code = 0
                for i, j, bit in bits:
                    if x[j] in nsets[x[i]]:
                        code |= bit
                m = table[code]
                c[m - 1] += degree(r1) * degree(r2) / pr4[m]
        if r2 != r1 and r1 != r0 and r2 != r0:
            nbrs = peek(r1)
            d1 = len(nbrs)
            w = nbrs[int(nxt() * d1)]
            fetch(w)
            # 4-star centered at r1: w must be new and adjacent to neither end
            if w != r2 and w != r0 and r0 not in nsets[r2] and r2 not in nsets[w] \
                    and r0 not in nsets[w]:
                c[0] += d1 * d1 / 6
    acc.t = t
    acc.inv_degree_sum = inv_deg
    return _finish(acc, walk, c)


def estimate_wrw_5(source, config: WalkConfig, catalog=None, run_index: int = 0) -> EstimateAccumulator:
    """Hand-unrolled waddling walk for 5-node motifs.

    Distinct 5-node windows are classified directly. A distinct 4-node
    window plus one neighbor of its second node is tested against the fork
    (2) and the cricket (6); a distinct 3-node window plus two neighbors of
    its middle node against the 5-star (3).
    """
    catalog = _catalog(catalog, 5)
    provider = _provider(source)
    motifs = catalog.motifs(5)
    table = catalog.tables[5]
    pr5 = [0] + [e.pr(5) for e in motifs]
    bits = _bit_pairs(5)
    degree = provider.degree
    nsets = provider.neighbor_sets
    peek = provider.peek
    fetch = provider.neighbors

    walk = _start(provider, config, 5, run_index)
    nxt = walk.uniform.next
    acc = EstimateAccumulator.empty(5, len(motifs), "wrw-5")
    c = [0.0] * len(motifs)
    t = 0
    inv_deg = 0.0
    win = walk.window
    while not walk.exhausted:
        walk.step()
        t += 1
        r0 = win[-1]
        inv_deg += 1.0 / degree(r0)
        n_win = len(win)
        if n_win < 3:
            continue
        r1, r2 = win[-2], win[-3]
        if n_win >= 5:
            x = win[-5:]
            if len(set(x)) == 5:
                code = 0
                for i, j, bit in bits:
                    if x[j] in nsets[x[i]]:
                        code |= bit
                m = table[code]
                if pr5[m]:
                    c[m - 1] += degree(r1) * degree(r2) * degree(x[1]) / pr5[m]
        if n_win >= 4:
            x = win[-4:]
            if len(set(x)) == 4:
                nbrs = peek(r2)
                d2 = len(nbrs)
                w = nbrs[int(nxt() * d2)]
                fetch(w)
                nodes = x + [w]
                if len(set(nodes)) == 5:
                    code = 0
                    for i, j, bit in bits:
                        if nodes[j] in nsets[nodes[i]]:
                            code |= bit
                    m = table[code]
                    if m == 2:
                        c[1] += degree(r1) * d2 * d2 / 2
                    elif m == 6:
                        c[5] += degree(r1) * d2 * d2 / 4
        if r2 != r1 and r1 != r0 and r2 != r0:
            nbrs = peek(r1)
            d1 = len(nbrs)
            w1 = nbrs[int(nxt() * d1)]
            fetch(w1)
            w2 = nbrs[int(nxt() * d1)]
            fetch(w2)
            nodes = [r2, r1, r0, w1, w2]
            if len(set(nodes)) == 5:
                code = 0
                for i, j, bit in bits:
                    if nodes[j] in nsets[nodes[i]]:
                        code |= bit
                if table[code] == 3:
                    c[2] += d1 * d1 * d1 / 24
    acc.t = t
    acc.inv_degree_sum = inv_deg
    return _finish(acc, walk, c)


def estimate_wrw(source, k: int, config: WalkConfig, catalog=None, run_index: int = 0,
                 specialized: bool = True) -> EstimateAccumulator:
    """Waddling walk, using the unrolled sampler when one exists for ``k``."""
    if specialized and k == 4:
        return estimate_wrw_4(source, config, catalog, run_index)
    if specialized and k == 5:
        return estimate_wrw_5(source, config, catalog, run_index)
    return estimate_wrw_generic(source, k, config, catalog, run_index)


# -- counts and the degree sum -------------------------------------------------

def estimate_degree_sum(source, node_count: Optional[int] = None, sample_fraction: float = 0.01,
                        config: Optional[WalkConfig] = None, samples: Optional[int] = None,
                        run_index: int = 0) -> float:
    """Estimate ``D`` as ``|V| / mean(1 / d(x))`` over walk nodes.

    The walk takes ``ceil(sample_fraction * |V|)`` post-burn-in steps unless
    ``samples`` is given. ``node_count`` defaults to the provider's.
    """
    provider = _provider(source)
    n = node_count if node_count is not None else provider.node_count
    if not n:
        raise ValueError("node_count is required")
    if samples is None:
        if not 0 < sample_fraction <= 1:
            raise ValueError("sample_fraction must be in (0, 1]")
        samples = max(1, math.ceil(sample_fraction * n))
    base = config or WalkConfig(step_budget=samples)
    walk = RandomWalk(provider, window_size=2, seed=base.seed, run_index=run_index,
                      start=base.start, step_budget=samples)
    walk.burn_in(base.burn_in)
    degree = provider.degree
    total = 0.0
    while not walk.exhausted:
        total += 1.0 / degree(walk.step())
    return n * samples / total


def degree_sum_from(acc: EstimateAccumulator, node_count: int) -> float:
    """``D`` estimate from the degrees an estimator walk already visited."""
    if acc.t == 0 or acc.inv_degree_sum <= 0:
        raise NoSamplesError("accumulator has no sampled steps")
    return node_count * acc.t / acc.inv_degree_sum


def estimate_motif_count(acc: EstimateAccumulator, degree_sum: float, motif) -> float:
    """``|S(k, m)|`` estimate ``(c_m / t) * D``; sampling constants are already in ``c_m``."""
    k, m = motif
    if k != acc.k:
        raise ValueError(f"accumulator holds {acc.k}-node motifs, asked for {motif}")
    if acc.t == 0:
        raise NoSamplesError("accumulator has no sampled steps")
    return float(acc.c[m - 1]) / acc.t * degree_sum


# -- sample-size planning ------------------------------------------------------

@dataclass(frozen=True)
class BoundInputs:
    """Inputs of the step-count bound.

    ``top_degree_product`` is the product of the ``k`` largest degrees and
    ``motif_count`` the count (or a lower bound) of the motif of interest.
    """

    mixing_time: float
    degree_sum: float
    top_degree_product: float
    motif_count: float
    delta: float
    alpha: float
    xi: float = 72.0
    c_const: float = 1.0

    def __post_init__(self):
        for name in ("mixing_time", "degree_sum", "top_degree_product", "motif_count", "xi", "c_const"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if not 0 < self.delta < 1 or not 0 < self.alpha < 1:
            raise ValueError("delta and alpha must lie in (0, 1)")
        if self.c_const <= self.alpha:
            raise ValueError("c_const must exceed alpha")


@dataclass(frozen=True)
class StepBound:
    t_min: float
    lower_factor: float     # estimate >= lower_factor * C with prob > 1 - 2 alpha
    upper_factor: float
    confidence: float

    def to_dict(self):
        return {"t_min": self.t_min, "lower_factor": self.lower_factor,
                "upper_factor": self.upper_factor, "confidence": self.confidence}


def top_degree_product(g: Graph, k: int) -> int:
    top = np.sort(g.degrees)[::-1][:k]
    return math.prod(int(d) for d in top)


def required_steps(b: BoundInputs) -> StepBound:
    """Steps after mixing that put the concentration estimate in the error band.

    ``t >= xi * T * D * Q / (|S| * delta**2) * ln(c / alpha)``; with that many
    steps the estimate lies within ``[1 - 2d/(1+d), 1 + 2d/(1-d)]`` times the
    true concentration with probability above ``1 - 2 alpha``. ``xi`` and
    ``c`` only exist up to constants; 72 and 1 are defaults, not guarantees.
    """
    t = (b.xi * b.mixing_time * b.degree_sum * b.top_degree_product
         / (b.motif_count * b.delta ** 2) * math.log(b.c_const / b.alpha))
    return StepBound(
        t_min=t,
        lower_factor=1 - 2 * b.delta / (1 + b.delta),
        upper_factor=1 + 2 * b.delta / (1 - b.delta),
        confidence=1 - 2 * b.alpha,
    )
