"""Undirected simple graphs, permutations and the graph6 / edge-list formats."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

import numpy as np
from scipy.sparse.csgraph import shortest_path


class GraphFormatError(ValueError):
    """Malformed graph6 or edge-list input."""

    def __init__(self, message: str, offset: int | None = None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected simple graph on nodes 0..n-1.

    Edges are stored as a frozenset of ``(u, v)`` with ``u < v``; a dense
    boolean adjacency matrix is built lazily for O(1) lookup.
    """

    n: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("node count must be non-negative")
        norm = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={self.n}")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(norm))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        return cls(n, frozenset(edges))

    @classmethod
    def from_adjacency(cls, A) -> "Graph":
        A = np.asarray(A)
        if A.shape[0] != A.shape[1] or not np.array_equal(A, A.T):
            raise ValueError("adjacency must be square and symmetric")
        iu, ju = np.nonzero(np.triu(A, 1))
        return cls(A.shape[0], frozenset(zip(iu.tolist(), ju.tolist())))

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"Graph(n={self.n}, m={len(self.edges)})"

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def adj(self) -> np.ndarray:
        A = np.zeros((self.n, self.n), dtype=bool)
        if self.edges:
            e = np.array(sorted(self.edges))
            A[e[:, 0], e[:, 1]] = True
            A[e[:, 1], e[:, 0]] = True
        A.setflags(write=False)
        return A

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u, v])

    @cached_property
    def degrees(self) -> np.ndarray:
        return self.adj.sum(axis=1)

    def neighbors(self, v: int) -> np.ndarray:
        return np.flatnonzero(self.adj[v])

    @cached_property
    def distances(self) -> np.ndarray:
        """All-pairs hop distances; -1 for disconnected pairs."""
        if self.n == 0:
            return np.zeros((0, 0), dtype=np.int64)
        D = shortest_path(self.adj.astype(np.float64), unweighted=True, directed=False)
        D[np.isinf(D)] = -1
        return D.astype(np.int64)

    def is_connected(self) -> bool:
        return self.n == 0 or bool((self.distances[0] >= 0).all())


def adjacency(g: Graph) -> np.ndarray:
    return g.adj.astype(np.float64)


def laplacian(g: Graph) -> np.ndarray:
    """Combinatorial Laplacian D - A."""
    A = adjacency(g)
    return np.diag(A.sum(axis=1)) - A


# -- permutations -------------------------------------------------------------
# A permutation is an int array p of length n with p[i] = image of node i.


def as_permutation(p, n: int | None = None) -> np.ndarray:
    p = np.asarray(p, dtype=np.int64)
    if p.ndim != 1:
        raise ValueError("permutation must be one-dimensional")
    if n is not None and len(p) != n:
        raise ValueError(f"permutation length {len(p)} does not match n={n}")
    if not np.array_equal(np.sort(p), np.arange(len(p))):
        raise ValueError("not a bijection on 0..n-1")
    return p


def identity(n: int) -> np.ndarray:
    return np.arange(n, dtype=np.int64)


def compose(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """(p o q)(i) = p[q[i]]."""
    return p[q]


def inverse(p: np.ndarray) -> np.ndarray:
    inv = np.empty_like(p)
    inv[p] = np.arange(len(p), dtype=p.dtype)
    return inv


def perm_matrix(p: np.ndarray) -> np.ndarray:
    """Matrix P with P[p[i], i] = 1, so (P @ M)[p[i]] = M[i] and A' = P A P^T."""
    n = len(p)
    P = np.zeros((n, n))
    P[p, np.arange(n)] = 1.0
    return P


def permute(g: Graph, p) -> Graph:
    """Relabel node i as p[i]."""
    p = as_permutation(p, g.n)
    return Graph(g.n, frozenset((int(p[u]), int(p[v])) for u, v in g.edges))


def is_automorphism(g: Graph, p: np.ndarray) -> bool:
    A = g.adj
    return bool(np.array_equal(A[np.ix_(p, p)], A))


# -- graph6 -------------------------------------------------------------------

_G6_MAX = 68719476735


def _encode_n(n: int) -> bytes:
    if n < 0 or n > _G6_MAX:
        raise ValueError(f"graph6 cannot encode n={n}")
    if n <= 62:
        return bytes([n + 63])
    if n <= 258047:
        return b"~" + bytes(((n >> s) & 63) + 63 for s in (12, 6, 0))
    return b"~~" + bytes(((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0))


def write_graph6(g: Graph) -> bytes:
    """Standard graph6 encoding (no header, no trailing newline)."""
    if g.n < 1:
        raise ValueError("graph6 writer requires n >= 1")
    A = g.adj
    # upper triangle, column by column: (0,1),(0,2),(1,2),(0,3),...
    bits = [A[i, j] for j in range(1, g.n) for i in range(j)]
    bits += [False] * (-len(bits) % 6)
    body = bytes(
        63 + sum(int(b) << (5 - k) for k, b in enumerate(bits[i : i + 6]))
        for i in range(0, len(bits), 6)
    )
    return _encode_n(g.n) + body


def parse_graph6(data: bytes | str) -> Graph:
    if isinstance(data, str):
        data = data.encode("ascii")
    data = data.strip()
    if data.startswith(b">>graph6<<"):
        data = data[10:]
    if not data:
        raise GraphFormatError("empty graph6 string", 0)
    for k, c in enumerate(data):
        if not 63 <= c <= 126:
            raise GraphFormatError(f"invalid graph6 byte {c!r}", k)
    if data[0] != 126:
        n, pos = data[0] - 63, 1
    elif len(data) > 1 and data[1] == 126:
        if len(data) < 8:
            raise GraphFormatError("truncated long-form header", len(data))
        n, pos = 0, 8
        for c in data[2:8]:
            n = (n << 6) | (c - 63)
    else:
        if len(data) < 4:
            raise GraphFormatError("truncated header", len(data))
        n, pos = 0, 4
        for c in data[1:4]:
            n = (n << 6) | (c - 63)
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    body = data[pos:]
    if len(body) < need:
        raise GraphFormatError(
            f"expected {need} edge bytes for n={n}, found {len(body)}", len(data)
        )
    if len(body) > need:
        raise GraphFormatError("trailing bytes after edge data", pos + need)
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            c = body[k // 6] - 63
            if (c >> (5 - k % 6)) & 1:
                edges.append((i, j))
            k += 1
    return Graph(n, frozenset(edges))


# -- plain edge list ----------------------------------------------------------


def write_edgelist(g: Graph) -> str:
    lines = [str(g.n)] + [f"{u} {v}" for u, v in sorted(g.edges)]
    return "\n".join(lines) + "\n"


def parse_edgelist(text: str) -> Graph:
    rows = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    rows = [r for r in rows if r]
    if not rows:
        raise GraphFormatError("empty edge list")
    try:
        n = int(rows[0])
        edges = [tuple(int(x) for x in r.split()) for r in rows[1:]]
    except ValueError as exc:
        raise GraphFormatError(f"non-integer token in edge list: {exc}") from None
    for e in edges:
        if len(e) != 2:
            raise GraphFormatError(f"edge line must have two nodes, got {e}")
    return Graph(n, frozenset(edges))


def load_graph(path: str) -> Graph:
    """Read a graph file; graph6 unless the first line is a bare integer."""
    with open(path, "rb") as fh:
        raw = fh.read()
    text = raw.decode("ascii", errors="replace")
    first = text.strip().splitlines()[0].strip() if text.strip() else ""
    if first.isdigit():
        return parse_edgelist(text)
    return parse_graph6(first.encode("ascii"))
