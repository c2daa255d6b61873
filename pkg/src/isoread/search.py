"""Individualization-refinement search on pairs of graphs.

Both the isomorphism oracle and automorphism enumeration run on the disjoint
union of a left and a right graph.  Colors are canonical: each refinement
round ranks the signatures ``(color, neighbor-color counts)`` in sorted order,
so identical structure on either side always receives identical colors.
"""

from __future__ import annotations

import numpy as np

from .graph import Graph


def refine(A: np.ndarray, colors: np.ndarray) -> np.ndarray:
    """Coarsest equitable refinement of ``colors`` (compact ints, order preserving)."""
    colors = np.asarray(colors, dtype=np.int64)
    N = len(colors)
    if N == 0:
        return colors
    k = int(colors.max()) + 1
    while True:
        onehot = np.zeros((N, k))
        onehot[np.arange(N), colors] = 1.0
        counts = A @ onehot
        sig = np.column_stack([colors, counts.astype(np.int64)])
        uniq, inv = np.unique(sig, axis=0, return_inverse=True)
        inv = inv.reshape(-1)
        if len(uniq) == k:
            return inv
        colors, k = inv, len(uniq)


def individualize(A: np.ndarray, colors: np.ndarray, *nodes: int) -> np.ndarray:
    c = colors.copy()
    c[list(nodes)] = c.max() + 1
    return refine(A, c)


def search_base(g: Graph) -> list[int]:
    """Fixed individualization path: smallest vertex of the first non-singleton cell."""
    A = g.adj.astype(np.float64)
    c = refine(A, np.zeros(g.n, dtype=np.int64))
    base = []
    while len(base) < g.n:
        counts = np.bincount(c)
        big = np.flatnonzero(counts > 1)
        if len(big) == 0:
            break
        v = int(np.flatnonzero(c == big[0])[0])
        base.append(v)
        c = individualize(A, c, v)
    return base


class PairSearch:
    """Backtracking over right-side choices with the left side following ``base``."""

    def __init__(self, left: Graph, right: Graph, base: list[int] | None = None):
        if left.n != right.n:
            raise ValueError("graphs differ in size")
        self.left, self.right = left, right
        self.n = n = left.n
        U = np.zeros((2 * n, 2 * n))
        U[:n, :n] = left.adj
        U[n:, n:] = right.adj
        self.U = U
        self.base = search_base(left) if base is None else base
        self.nodes_visited = 0

    def balanced(self, c: np.ndarray) -> bool:
        n = self.n
        k = int(c.max()) + 1
        return bool(
            np.array_equal(np.bincount(c[:n], minlength=k), np.bincount(c[n:], minlength=k))
        )

    def root(self) -> np.ndarray | None:
        c = refine(self.U, np.zeros(2 * self.n, dtype=np.int64))
        return c if self.balanced(c) else None

    def step(self, c: np.ndarray, depth: int, u: int) -> np.ndarray | None:
        """Individualize base[depth] on the left against u on the right."""
        self.nodes_visited += 1
        c2 = individualize(self.U, c, self.base[depth], self.n + u)
        return c2 if self.balanced(c2) else None

    def candidates(self, c: np.ndarray, depth: int) -> np.ndarray:
        n = self.n
        return np.flatnonzero(c[n:] == c[self.base[depth]])

    def leaf_map(self, c: np.ndarray) -> np.ndarray | None:
        n = self.n
        if len(np.unique(c[:n])) < n:
            return None
        where_right = np.empty(int(c.max()) + 1, dtype=np.int64)
        where_right[c[n:]] = np.arange(n)
        p = where_right[c[:n]]
        if np.array_equal(self.right.adj[np.ix_(p, p)], self.left.adj):
            return p
        return None

    def first_leaf(self, c: np.ndarray, depth: int) -> np.ndarray | None:
        """Depth-first search below ``c`` for one structure-preserving bijection."""
        p = self.leaf_map(c)
        if p is not None:
            return p
        if depth >= len(self.base):
            return None
        for u in self.candidates(c, depth):
            c2 = self.step(c, depth, int(u))
            if c2 is None:
                continue
            p = self.first_leaf(c2, depth + 1)
            if p is not None:
                return p
        return None


ISO_MAX_N = 64


def find_isomorphism(g: Graph, h: Graph) -> np.ndarray | None:
    """Bijection p with (i,j) in E(g) iff (p[i],p[j]) in E(h), or None."""
    if g.n != h.n or g.m != h.m:
        return None
    if g.n > ISO_MAX_N:
        raise NotImplementedError(f"isomorphism oracle supports n <= {ISO_MAX_N}, got {g.n}")
    if g.n == 0:
        return np.zeros(0, dtype=np.int64)
    s = PairSearch(g, h)
    c = s.root()
    if c is None:
        return None
    return s.first_leaf(c, 0)


def is_isomorphic(g: Graph, h: Graph) -> bool:
    return find_isomorphism(g, h) is not None


def _orbit_transversal(point: int, gens: list[np.ndarray], n: int) -> dict[int, np.ndarray]:
    """Schreier tree: for every x in the orbit of ``point``, an element t with t[point] = x."""
    reps = {point: np.arange(n, dtype=np.int64)}
    frontier = [point]
    while frontier:
        nxt = []
        for x in frontier:
            tx = reps[x]
            for g in gens:
                y = int(g[x])
                if y not in reps:
                    reps[y] = g[tx]
                    nxt.append(y)
        frontier = nxt
    return reps


def stabilizer_chain(g: Graph):
    """Base, strong generators and transversals of Aut(g).

    Returns ``(base, generators, transversals)`` where ``transversals[i]`` is an
    array whose rows map ``base[i]`` onto each point of its orbit under the
    pointwise stabilizer of ``base[:i]`` (identity first).
    """
    n = g.n
    s = PairSearch(g, g)
    base = s.base
    # identity path colorings: path[i] = joint coloring with base[:i] fixed on both sides
    path = [s.root()]
    for i, b in enumerate(base):
        path.append(s.step(path[-1], i, b))
    gens_by_level: list[list[np.ndarray]] = [[] for _ in base]
    transversals: list[np.ndarray] = [None] * len(base)
    for i in reversed(range(len(base))):
        b = base[i]
        gens = [x for lvl in gens_by_level[i:] for x in lvl]
        orbit = _orbit_transversal(b, gens, n)
        for u in s.candidates(path[i], i):
            u = int(u)
            if u in orbit:
                continue
            c2 = s.step(path[i], i, u)
            if c2 is None:
                continue
            p = s.first_leaf(c2, i + 1)
            if p is not None:
                gens_by_level[i].append(p)
                gens.append(p)
                orbit = _orbit_transversal(b, gens, n)
        pts = sorted(orbit, key=lambda x: (x != b, x))
        transversals[i] = np.array([orbit[x] for x in pts], dtype=np.int64).reshape(-1, n)
    generators = [x for lvl in gens_by_level for x in lvl]
    return base, generators, transversals
