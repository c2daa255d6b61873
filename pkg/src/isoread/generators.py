"""Graph constructions: cycle pairs, strongly regular graphs, ER, CFI, GM switching."""

from __future__ import annotations

from itertools import combinations

import numpy as np

from .graph import Graph
from .rng import SplitMix64
from .search import is_isomorphic


def cycle(k: int, offset: int = 0) -> list[tuple[int, int]]:
    return [(offset + i, offset + (i + 1) % k) for i in range(k)]


def gen_cycle_pair(k: int) -> tuple[Graph, Graph]:
    """(2C_k, C_2k): two disjoint k-cycles versus one 2k-cycle."""
    if k < 3:
        raise ValueError(f"cycle length must be >= 3, got {k}")
    two = Graph(2 * k, frozenset(cycle(k) + cycle(k, offset=k)))
    one = Graph(2 * k, frozenset(cycle(2 * k)))
    return two, one


def gen_petersen() -> Graph:
    outer = cycle(5)
    spokes = [(i, i + 5) for i in range(5)]
    star = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, frozenset(outer + spokes + star))


def gen_shrikhande() -> Graph:
    """Cayley graph on Z4 x Z4 with connection set {+-(1,0), +-(0,1), +-(1,1)}."""
    conn = [(1, 0), (3, 0), (0, 1), (0, 3), (1, 1), (3, 3)]
    edges = set()
    for a in range(4):
        for b in range(4):
            for da, db in conn:
                u, v = 4 * a + b, 4 * ((a + da) % 4) + (b + db) % 4
                edges.add((min(u, v), max(u, v)))
    return Graph(16, frozenset(edges))


def gen_rook4() -> Graph:
    """4x4 rook's graph: cells adjacent iff they share a row or a column."""
    edges = []
    for u in range(16):
        for v in range(u + 1, 16):
            if u // 4 == v // 4 or u % 4 == v % 4:
                edges.append((u, v))
    return Graph(16, frozenset(edges))


def gen_er(n: int, p: float, seed: int) -> Graph:
    """G(n, p) with one uniform draw per pair (i < j) in row-major order."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability must lie in [0, 1], got {p}")
    iu, ju = np.triu_indices(n, 1)
    u = SplitMix64(seed).random(len(iu))
    keep = u < p
    return Graph(n, frozenset(zip(iu[keep].tolist(), ju[keep].tolist())))


def gen_cfi_pair(base: Graph, twisted_edges: int = 1) -> tuple[Graph, Graph]:
    """Cai-Furer-Immerman pair (untwisted, twisted) over ``base``.

    Node order: middle (even-subset) gadget nodes per base vertex, then per
    base edge e = (u, v) the four nodes a(u,e), b(u,e), a(v,e), b(v,e).  The
    second graph crosses the a/b connections on the first ``twisted_edges``
    base edges.
    """
    if base.n == 0 or not base.is_connected():
        raise ValueError("CFI base graph must be non-empty and connected")
    base_edges = sorted(base.edges)
    incident = {v: [e for e in base_edges if v in e] for v in range(base.n)}

    index = {}
    for v in range(base.n):
        inc = incident[v]
        for r in range(0, len(inc) + 1, 2):
            for X in combinations(inc, r):
                index[("m", v, frozenset(X))] = len(index)
    for e in base_edges:
        for v in e:
            index[("a", v, e)] = len(index)
            index[("b", v, e)] = len(index)
    n = len(index)

    gadget = []
    for key, i in index.items():
        if key[0] != "m":
            continue
        _, v, X = key
        for e in incident[v]:
            gadget.append((i, index[("a" if e in X else "b", v, e)]))

    def build(twists: int) -> Graph:
        edges = list(gadget)
        for k, e in enumerate(base_edges):
            u, v = e
            if k < twists:
                edges += [(index[("a", u, e)], index[("b", v, e)]), (index[("b", u, e)], index[("a", v, e)])]
            else:
                edges += [(index[("a", u, e)], index[("a", v, e)]), (index[("b", u, e)], index[("b", v, e)])]
        return Graph(n, frozenset(edges))

    return build(0), build(twisted_edges)


def complete_graph(n: int) -> Graph:
    return Graph(n, frozenset(combinations(range(n), 2)))


# -- Godsil-McKay switching -------------------------------------------------


class GMValidityError(ValueError):
    def __init__(self, message: str, vertex: int | None = None):
        self.vertex = vertex
        super().__init__(message)


def check_gm_partition(g: Graph, C) -> list[int]:
    """Validate a switching set; return the outside vertices that get switched."""
    C = sorted(set(int(c) for c in C))
    if not C:
        raise GMValidityError("switching set is empty")
    if len(C) == g.n:
        raise GMValidityError("switching set must leave at least one vertex outside")
    A = g.adj
    inner_deg = A[np.ix_(C, C)].sum(axis=1)
    if not np.all(inner_deg == inner_deg[0]):
        bad = C[int(np.flatnonzero(inner_deg != inner_deg[0])[0])]
        raise GMValidityError(f"C does not induce a regular subgraph (vertex {bad})", bad)
    size = len(C)
    switched = []
    inC = set(C)
    for v in range(g.n):
        if v in inC:
            continue
        k = int(A[v, C].sum())
        if k in (0, size):
            continue
        if 2 * k == size:
            switched.append(v)
        else:
            raise GMValidityError(
                f"vertex {v} has {k} of {size} neighbors in C (need 0, {size / 2:g} or {size})", v
            )
    return switched


def gm_switch(g: Graph, C) -> Graph:
    """Complement the adjacency between C and every vertex with |C|/2 neighbors in C."""
    switched = check_gm_partition(g, C)
    A = g.adj.copy()
    C = sorted(set(int(c) for c in C))
    for v in switched:
        A[v, C] = ~A[v, C]
        A[C, v] = A[v, C]
    return Graph.from_adjacency(A)


def gm_partitions(g: Graph, max_n: int = 12):
    """Every valid switching set (ascending size, then lexicographic) that switches something."""
    if g.n > max_n:
        raise ValueError(f"exhaustive switching search supports n <= {max_n}")
    for r in range(2, g.n, 2):
        for C in combinations(range(g.n), r):
            try:
                switched = check_gm_partition(g, C)
            except GMValidityError:
                continue
            if switched:
                yield C


def find_gm_partition(g: Graph, max_n: int = 12) -> tuple[int, ...]:
    """First valid switching set whose switched graph is not isomorphic to g."""
    for C in gm_partitions(g, max_n):
        if not is_isomorphic(g, gm_switch(g, C)):
            return C
    raise LookupError("no Godsil-McKay switching set yields a non-isomorphic graph")
