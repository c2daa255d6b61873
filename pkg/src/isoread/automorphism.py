"""Automorphism enumeration, pair orbits and the orbit-combination operator S."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod

import numpy as np

from .graph import Graph, inverse
from .rng import SplitMix64
from .search import stabilizer_chain

DEFAULT_CAP = 50_000


@dataclass(frozen=True)
class AutomorphismSet:
    """Stored automorphisms (rows of ``perms``) of a graph.

    When ``capped`` is true the rows are a subset of the group: the first
    ``cap`` elements in transversal order, plus the strong generators and
    all inverses so the set stays inverse-closed and generates the full group.
    """

    perms: np.ndarray
    capped: bool
    cap: int
    order: int
    generators: list = field(default_factory=list, repr=False)
    base: list = field(default_factory=list)

    @property
    def n(self) -> int:
        return self.perms.shape[1]

    def __len__(self) -> int:
        return len(self.perms)


def _unique_rows(rows: np.ndarray) -> np.ndarray:
    _, idx = np.unique(rows, axis=0, return_index=True)
    return rows[np.sort(idx)]


def enumerate_automorphisms(g: Graph, cap: int = DEFAULT_CAP) -> AutomorphismSet:
    if cap < 1:
        raise ValueError("cap must be >= 1")
    n = g.n
    base, gens, transversals = stabilizer_chain(g)
    order = prod(len(t) for t in transversals)
    # elements t_0 o t_1 o ... o t_{k-1}; build from the deepest level outwards
    elems = np.arange(n, dtype=np.int64)[None, :]
    for T in reversed(transversals):
        need = -(-cap // len(elems))
        T = T[:need]
        elems = T[:, elems].reshape(-1, n)[:cap]
    capped = order > cap
    if capped:
        extra = [np.arange(n, dtype=np.int64)] + list(gens)
        rows = np.vstack([elems] + [e[None, :] for e in extra])
        inv = np.argsort(rows, axis=1)
        elems = _unique_rows(np.vstack([rows, inv]))
    return AutomorphismSet(
        perms=elems, capped=capped, cap=cap, order=order, generators=gens, base=base
    )


@dataclass(frozen=True)
class PairOrbitPartition:
    orbit_id: np.ndarray  # n x n, values 0..m-1 in canonical order
    m: int
    sizes: np.ndarray

    def indicator(self, t: int) -> np.ndarray:
        return (self.orbit_id == t).astype(np.float64)


def _pair_signature(g: Graph, i: int, j: int) -> tuple:
    di, dj = int(g.degrees[i]), int(g.degrees[j])
    dist = int(g.distances[i, j])
    return (min(di, dj), max(di, dj), int(g.adj[i, j]), dist if dist >= 0 else g.n + 1)


def _raw_pair_orbits(perms: np.ndarray, n: int) -> np.ndarray:
    """Component minimum of (i,j) ~ (h(i),h(j)) over the stored perms (n*n labels)."""
    labels = np.arange(n * n, dtype=np.int64)
    if n == 0:
        return labels
    # image of pair index i*n+j under each perm; chunked to bound memory
    chunk = max(1, 2_000_000 // max(1, n * n))
    while True:
        before = labels.copy()
        for s in range(0, len(perms), chunk):
            P = perms[s : s + chunk]
            img = (P[:, :, None] * n + P[:, None, :]).reshape(len(P), n * n)
            # the stored set is inverse-closed, so pulling minima is enough
            np.minimum(labels, labels[img].min(axis=0), out=labels)
        # pointer jumping to component roots
        while True:
            nxt = labels[labels]
            if np.array_equal(nxt, labels):
                break
            labels = nxt
        if np.array_equal(labels, before):
            return labels


def pair_orbits(auts: AutomorphismSet, g: Graph | None = None) -> PairOrbitPartition:
    """Orbits of the stored automorphisms on ordered node pairs.

    Canonical order: diagonal orbits first, then by orbit size, then by the
    labeling-invariant pair signature (sorted degrees, adjacency, distance),
    then by the smallest member pair.  Without ``g`` the signature is skipped.
    """
    n = auts.n
    labels = _raw_pair_orbits(auts.perms, n)
    roots, inv, sizes = np.unique(labels, return_inverse=True, return_counts=True)
    keys = []
    for t, r in enumerate(roots):
        i, j = divmod(int(r), n)  # root is the smallest member pair index
        sig = _pair_signature(g, i, j) if g is not None else ()
        keys.append((0 if i == j else 1, int(sizes[t]), sig, (i, j)))
    order = sorted(range(len(roots)), key=keys.__getitem__)
    rank = np.empty(len(roots), dtype=np.int64)
    rank[order] = np.arange(len(roots))
    orbit_id = rank[inv.reshape(-1)].reshape(n, n)
    return PairOrbitPartition(orbit_id, len(roots), sizes[order])


def orbit_coefficients(m: int, seed: int) -> np.ndarray:
    """Coefficients i.i.d. uniform on [1, 2], drawn in canonical orbit order."""
    return SplitMix64(seed).uniform(1.0, 2.0, m)


def build_S(orbits: PairOrbitPartition, coeffs=None, seed: int | None = None) -> np.ndarray:
    """S = sum_t c_t (M_t + M_t^T) / 2."""
    if coeffs is None:
        if seed is None:
            raise ValueError("need coefficients or a seed")
        coeffs = orbit_coefficients(orbits.m, seed)
    coeffs = np.asarray(coeffs, dtype=np.float64)
    if coeffs.shape != (orbits.m,):
        raise ValueError(f"expected {orbits.m} coefficients, got {coeffs.shape}")
    C = coeffs[orbits.orbit_id]
    return (C + C.T) / 2.0


def orbit_of_pair(orbits: PairOrbitPartition, i: int, j: int) -> int:
    return int(orbits.orbit_id[i, j])


__all__ = [
    "AutomorphismSet",
    "PairOrbitPartition",
    "enumerate_automorphisms",
    "pair_orbits",
    "build_S",
    "orbit_coefficients",
    "orbit_of_pair",
    "inverse",
]
