"""Connected motifs on 3 to 5 nodes and the per-motif sampling constants.

Every small graph is handled as an edge bitmask over vertex pairs in the
order given by :func:`motifwalk.graph.pair_index`. Classification is a
single table lookup: the table is filled at build time with every labeled
bitmask, so callers never canonicalize at run time.

Per-motif constants (all computed by brute force on the motif itself):

``l``
    fewest vertices in a walk (repeats allowed) that visits every vertex.
``L``
    vertices in the longest simple path.
``pr_table[s]``
    number of directed ``s``-vertex walks covering all vertices for
    ``s >= k``; for ``s == L < k`` the number of directed longest simple
    paths.
``waddle_plan``
    for motifs with ``L < k``: where each extra vertex is drawn from. Entry
    ``(0, i)`` means "uniform neighbor of window position ``i``", ``(1, j)``
    means "uniform neighbor of the node drawn for slot ``j``".
``pw``, ``Z``
    number of ways the extra vertices fill the slots for the reference path
    embedding, and 2 when the reversed embedding cannot be completed under
    the same plan (1 otherwise).
``waddle_divisor``
    number of (path, slot assignment) pairs that reproduce one motif
    instance under the plan; equals ``pr * pw / Z`` and is what a waddle
    hit is divided by.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations
from typing import Optional

import numpy as np

from .graph import pair_index

MOTIF_COUNTS = {3: 2, 4: 6, 5: 21}

# (k, m) -> sorted degree sequence; each picks out exactly one motif
ANCHORS = {
    (3, 1): (1, 1, 2),            # wedge
    (3, 2): (2, 2, 2),            # triangle
    (4, 1): (1, 1, 1, 3),         # 4-star
    (4, 2): (1, 1, 2, 2),         # 4-path
    (4, 6): (3, 3, 3, 3),         # 4-clique
    (5, 2): (1, 1, 1, 2, 3),      # fork (path of 4 with a pendant on the 2nd vertex)
    (5, 3): (1, 1, 1, 1, 4),      # 5-star
    (5, 6): (1, 1, 2, 2, 4),      # cricket (triangle with two pendants on one vertex)
    (5, 21): (4, 4, 4, 4, 4),     # 5-clique
}

NAMES = {
    (3, 1): "wedge", (3, 2): "triangle", (4, 1): "4-star", (4, 2): "4-path",
    (4, 6): "4-clique", (5, 2): "fork", (5, 3): "5-star", (5, 6): "cricket",
    (5, 21): "5-clique",
}

# divisors hard-wired in the specialized 4- and 5-node samplers
SPECIALIZED_DIVISORS = {(4, 1): 6, (5, 2): 2, (5, 6): 4, (5, 3): 24}


class CatalogError(ValueError):
    pass


@dataclass(frozen=True)
class MotifEntry:
    k: int
    m: int
    canonical_code: int
    edge_count: int
    l: int
    L: int
    Z: int
    pr_table: dict
    pw: int
    waddle_plan: tuple = ()
    waddle_divisor: int = 1
    name: str = ""
    # adjacency of the canonical representative, as neighbor bitmasks
    adjacency: tuple = field(default=(), repr=False, compare=False)
    # one (plan, divisor) per longest-path embedding, for the random-embedding protocol
    embedding_plans: tuple = field(default=(), repr=False, compare=False)

    @property
    def id(self):
        return (self.k, self.m)

    @property
    def needs_waddle(self) -> bool:
        return self.L < self.k

    def pr(self, s: int) -> int:
        return self.pr_table[s]

    def embeddings(self, s: int) -> list[tuple[int, ...]]:
        """All directed ``s``-vertex walks counted by ``pr_table[s]``."""
        if s not in self.pr_table:
            raise KeyError(f"no path table for s={s} on motif {self.id}")
        return _embeddings(self.adjacency, s)


class MotifCatalog:
    """All connected motifs for ``k = 3 .. k_max`` with lookup tables."""

    def __init__(self, k_max, entries, tables):
        self.k_max = k_max
        self.entries = entries
        self.tables = tables
        self._by_code = {(e.k, e.canonical_code): e for es in entries.values() for e in es}

    def motifs(self, k: int) -> tuple[MotifEntry, ...]:
        return self.entries[k]

    def entry(self, k: int, m: int) -> MotifEntry:
        if k not in self.entries or not 1 <= m <= len(self.entries[k]):
            raise KeyError(f"no motif ({k},{m})")
        return self.entries[k][m - 1]

    def by_code(self, k: int, canonical_code: int) -> MotifEntry:
        return self._by_code[(k, canonical_code)]

    def classify(self, code: int, size: int) -> Optional[tuple[int, int]]:
        """Motif id of the bitmask ``code`` on ``size`` vertices, or ``None`` if disconnected."""
        if size not in self.tables:
            raise ValueError(f"size must be between 3 and {self.k_max}")
        m = self.tables[size][code]
        return None if m == 0 else (size, m)

    def to_records(self) -> list[dict]:
        rows = []
        for k in sorted(self.entries):
            for e in self.entries[k]:
                rows.append({
                    "k": e.k, "m": e.m, "name": e.name,
                    "canonical_code": e.canonical_code, "edge_count": e.edge_count,
                    "l": e.l, "L": e.L, "Z": e.Z,
                    "pr_table": {str(s): v for s, v in sorted(e.pr_table.items())},
                    "pw": e.pw, "waddle_plan": [list(a) for a in e.waddle_plan],
                    "waddle_divisor": e.waddle_divisor,
                })
        return rows


# -- small-graph helpers -----------------------------------------------------

@lru_cache(maxsize=None)
def _perm_bitmaps(k):
    pairs = pair_index(k)
    where = {p: b for b, p in enumerate(pairs)}
    maps = []
    for perm in permutations(range(k)):
        maps.append(tuple(where[tuple(sorted((perm[i], perm[j])))] for i, j in pairs))
    return maps


def permute_code(code: int, perm, k: int) -> int:
    """Relabel vertex ``i`` as ``perm[i]`` in a bitmask on ``k`` vertices."""
    pairs = pair_index(k)
    where = {p: b for b, p in enumerate(pairs)}
    out = 0
    for b, (i, j) in enumerate(pairs):
        if code >> b & 1:
            out |= 1 << where[tuple(sorted((perm[i], perm[j])))]
    return out


def _apply(code, bitmap):
    out = 0
    b = 0
    while code:
        if code & 1:
            out |= 1 << bitmap[b]
        code >>= 1
        b += 1
    return out


def code_adjacency(code: int, k: int) -> tuple[int, ...]:
    adj = [0] * k
    for b, (i, j) in enumerate(pair_index(k)):
        if code >> b & 1:
            adj[i] |= 1 << j
            adj[j] |= 1 << i
    return tuple(adj)


def is_connected_code(code: int, k: int) -> bool:
    adj = code_adjacency(code, k)
    seen = 1
    frontier = 1
    while frontier:
        nxt = 0
        for v in range(k):
            if frontier >> v & 1:
                nxt |= adj[v]
        frontier = nxt & ~seen
        seen |= nxt
    return seen == (1 << k) - 1


def canonical_code(code: int, k: int) -> int:
    return min(_apply(code, bm) for bm in _perm_bitmaps(k))


def _walk_counts(adj, s):
    """Directed ``s``-vertex walks visiting every vertex."""
    k = len(adj)
    full = (1 << k) - 1
    dp = {(v, 1 << v): 1 for v in range(k)}
    for _ in range(s - 1):
        nxt = {}
        for (v, mask), c in dp.items():
            nb = adj[v]
            for u in range(k):
                if nb >> u & 1:
                    key = (u, mask | 1 << u)
                    nxt[key] = nxt.get(key, 0) + c
        dp = nxt
    return sum(c for (v, mask), c in dp.items() if mask == full)


def _simple_paths(adj, s):
    """Directed simple paths with exactly ``s`` vertices."""
    k = len(adj)
    out = []

    def extend(path, mask):
        if len(path) == s:
            out.append(tuple(path))
            return
        nb = adj[path[-1]]
        for u in range(k):
            if nb >> u & 1 and not mask >> u & 1:
                path.append(u)
                extend(path, mask | 1 << u)
                path.pop()

    for v in range(k):
        extend([v], 1 << v)
    return out


@lru_cache(maxsize=None)
def _embeddings(adj, s):
    k = len(adj)
    if s < k:
        return _simple_paths(adj, s)
    full = (1 << k) - 1
    out = []

    def extend(path, mask):
        if len(path) == s:
            if mask == full:
                out.append(tuple(path))
            return
        # prune: the remaining steps must still be able to cover the rest
        if bin(full & ~mask).count("1") > s - len(path):
            return
        nb = adj[path[-1]]
        for u in range(k):
            if nb >> u & 1:
                path.append(u)
                extend(path, mask | 1 << u)
                path.pop()

    for v in range(k):
        extend([v], 1 << v)
    return out


def _longest_simple_path(adj):
    k = len(adj)
    for s in range(k, 0, -1):
        if _simple_paths(adj, s):
            return s
    return 0


def _shortest_cover(adj):
    k = len(adj)
    s = k
    while _walk_counts(adj, s) == 0:
        s += 1
        if s > 4 * k:
            raise CatalogError("motif is not connected")
    return s


def _plan_for(adj, path):
    """Anchor plan and slot targets for the vertices off ``path``."""
    k = len(adj)
    placed = {v: (0, i) for i, v in enumerate(path)}
    off = [v for v in range(k) if v not in placed]
    plan = []
    targets = []
    while off:
        best = None
        for u in off:
            refs = [placed[w] for w in placed if adj[u] >> w & 1]
            if refs:
                cand = (min(refs), u)
                if best is None or cand < best:
                    best = cand
        if best is None:
            raise CatalogError("off-path vertices are not reachable")
        ref, u = best
        plan.append(ref)
        targets.append(u)
        placed[u] = (1, len(plan) - 1)
        off.remove(u)
    return tuple(plan), tuple(targets)


def _slot_assignments(adj, path, plan):
    """Ways to give the off-path vertices to the slots so every slot touches its anchor."""
    k = len(adj)
    off = [v for v in range(k) if v not in path]
    if len(off) != len(plan):
        return 0
    count = 0
    for order in permutations(off):
        ok = True
        for j, (kind, ref) in enumerate(plan):
            anchor = path[ref] if kind == 0 else order[ref]
            if not adj[order[j]] >> anchor & 1:
                ok = False
                break
        if ok:
            count += 1
    return count


def _motif_entry(k, code, m, name):
    adj = code_adjacency(code, k)
    L = _longest_simple_path(adj)
    l = _shortest_cover(adj)
    pr_table = {s: _walk_counts(adj, s) for s in range(k, l + 1)}
    # below k only simple paths qualify, and none are longer than L
    pr_table.update({s: 0 for s in range(L + 1, k)})
    plan, pw, Z, divisor, per_embedding = (), 1, 1, 1, ()
    if L < k:
        paths = _simple_paths(adj, L)
        pr_table[L] = len(paths)
        plans = [_plan_for(adj, p)[0] for p in paths]
        plan = min(plans)
        ref_path = paths[plans.index(plan)]
        pw = _slot_assignments(adj, ref_path, plan)
        Z = 1 if _slot_assignments(adj, ref_path[::-1], plan) else 2
        divisor = sum(_slot_assignments(adj, p, plan) for p in paths)
        per_embedding = tuple(
            (pl, sum(_slot_assignments(adj, p, pl) for p in paths)) for pl in plans)
    return MotifEntry(
        k=k, m=m, canonical_code=code, edge_count=bin(code).count("1"), l=l, L=L, Z=Z,
        pr_table=dict(sorted(pr_table.items())), pw=pw, waddle_plan=plan,
        waddle_divisor=divisor, name=name, adjacency=adj, embedding_plans=per_embedding)


def _classes(k):
    """Map every bitmask to its canonical code, one orbit at a time."""
    n_codes = 1 << (k * (k - 1) // 2)
    canon = [-1] * n_codes
    maps = _perm_bitmaps(k)
    for code in range(n_codes):
        if canon[code] >= 0:
            continue
        orbit = {_apply(code, bm) for bm in maps}
        c = min(orbit)
        for x in orbit:
            canon[x] = c
    return canon


def _degree_sequence(code, k):
    return tuple(sorted(bin(a).count("1") for a in code_adjacency(code, k)))


def _build_level(k):
    canon = _classes(k)
    reps = sorted({c for c in canon if is_connected_code(c, k)})
    ids = {}
    for (kk, m), degs in ANCHORS.items():
        if kk != k:
            continue
        hits = [c for c in reps if _degree_sequence(c, k) == degs]
        if len(hits) != 1:
            raise CatalogError(f"anchor ({k},{m}) matched {len(hits)} motifs")
        ids[hits[0]] = m
    free_ids = [m for m in range(1, len(reps) + 1) if m not in ids.values()]
    rest = sorted((c for c in reps if c not in ids), key=lambda c: (bin(c).count("1"), c))
    ids.update(zip(rest, free_ids))
    entries = sorted((_motif_entry(k, c, m, NAMES.get((k, m), "")) for c, m in ids.items()),
                     key=lambda e: e.m)
    m_of = {e.canonical_code: e.m for e in entries}
    table = np.zeros(len(canon), dtype=np.int64)
    for code, c in enumerate(canon):
        table[code] = m_of.get(c, 0)
    return tuple(entries), table.tolist()


def _check(entries):
    for (k, m), expected in SPECIALIZED_DIVISORS.items():
        if k not in entries:
            continue
        e = entries[k][m - 1]
        if e.waddle_divisor != expected or e.pr(e.L) * e.pw != expected * e.Z:
            raise CatalogError(f"waddle divisor of ({k},{m}) is {e.waddle_divisor}, expected {expected}")
    for es in entries.values():
        for e in es:
            if e.needs_waddle and e.pr(e.L) * e.pw != e.waddle_divisor * e.Z:
                raise CatalogError(f"inconsistent waddle constants for {e.id}")


@lru_cache(maxsize=None)
def build_catalog(k_max: int = 5) -> MotifCatalog:
    """Enumerate and tabulate all connected motifs with ``3 <= k <= k_max``."""
    if not 3 <= k_max <= 5:
        raise CatalogError("k_max must be 3, 4 or 5")
    entries, tables = {}, {}
    for k in range(3, k_max + 1):
        entries[k], tables[k] = _build_level(k)
        if len(entries[k]) != MOTIF_COUNTS[k]:
            raise CatalogError(f"found {len(entries[k])} motifs on {k} nodes")
    _check(entries)
    return MotifCatalog(k_max, entries, tables)


def random_path_embedding(entry: MotifEntry, s: int, rng) -> tuple[int, ...]:
    """One of the ``pr_table[s]`` directed path embeddings, uniformly at random.

    Element ``i`` is the motif vertex (of the canonical representative) put
    on window position ``i``.
    """
    options = entry.embeddings(s)
    return options[int(rng.integers(len(options)))]
