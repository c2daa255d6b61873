"""Isotypic readout and baseline poolings.

A ``ProjectorBundle`` holds the sorted, truncated and zero-padded eigenspace
projectors of the orbit operator S for one graph in one labeling.  Readouts
combine a bundle with a node feature matrix M (n x d).
"""

from __future__ import annotations

import hashlib
import threading
from dataclasses import dataclass, field, replace
from functools import cmp_to_key

import numpy as np

from .automorphism import DEFAULT_CAP, build_S, enumerate_automorphisms, pair_orbits
from .graph import Graph, inverse, laplacian, write_graph6
from .rng import SplitMix64
from .symlinalg import block_projectors, group_eigenvalues, sym_eig

POOL_KINDS = ("sum", "mean", "max", "meanmax")
READOUT_KINDS = POOL_KINDS + ("isotypic", "isotypic-linear")
KEY_RTOL = 1e-9


@dataclass(frozen=True)
class ReadoutConfig:
    max_blocks: int = 16
    rp_dim: int = 8
    seed: int = 0
    centering: bool = False
    eig_tol: float = 1e-12
    cap_auts: int = DEFAULT_CAP
    coeff_seed: int = 0

    def __post_init__(self):
        if self.max_blocks < 1:
            raise ValueError("max_blocks must be >= 1")
        if self.rp_dim < 0:
            raise ValueError("rp_dim must be >= 0")
        if self.eig_tol <= 0:
            raise ValueError("eig_tol must be positive")
        if self.cap_auts < 1:
            raise ValueError("cap_auts must be >= 1")


@dataclass(frozen=True)
class ProjectorBundle:
    fingerprint: str
    projectors: np.ndarray  # B x n x n, zero where padded
    padded: np.ndarray  # B bools
    keys: np.ndarray  # B x 3 (trP, trPL, trPA); zeros where padded
    eigenvalues: np.ndarray  # B; nan where padded
    capped: bool
    num_blocks: int  # blocks before truncation
    block_sizes: tuple = field(default=())

    @property
    def n(self) -> int:
        return self.projectors.shape[1]

    @property
    def B(self) -> int:
        return self.projectors.shape[0]

    def transport(self, p) -> "ProjectorBundle":
        """Bundle for the relabeled graph permute(G, p): P -> Pi P Pi^T."""
        inv = inverse(np.asarray(p, dtype=np.int64))
        projs = self.projectors[:, inv][:, :, inv]
        return replace(self, projectors=projs, fingerprint=self.fingerprint + ":transported")


def graph_fingerprint(g: Graph, cfg: ReadoutConfig | None = None) -> str:
    h = hashlib.sha256(write_graph6(g)) if g.n else hashlib.sha256(b"empty")
    if cfg is not None:
        h.update(repr((cfg.max_blocks, cfg.eig_tol, cfg.cap_auts, cfg.coeff_seed)).encode())
    return h.hexdigest()[:16]


def _key_cmp(a: tuple, b: tuple) -> int:
    """Descending on (trP, trPL, trPA, eigenvalue); ascending on block index."""
    for x, y in zip(a[:4], b[:4]):
        if abs(x - y) > KEY_RTOL * max(1.0, abs(x), abs(y)):
            return -1 if x > y else 1
    return (a[4] > b[4]) - (a[4] < b[4])


def sort_blocks(projs: list, eigenvalues, A: np.ndarray, L: np.ndarray) -> tuple[list, np.ndarray]:
    """Order of blocks and their (trP, trPL, trPA) keys."""
    keys = np.array([[np.trace(P), np.sum(P * L), np.sum(P * A)] for P in projs]).reshape(-1, 3)
    rows = [(*keys[i], float(eigenvalues[i]), i) for i in range(len(projs))]
    order = [r[4] for r in sorted(rows, key=cmp_to_key(_key_cmp))]
    return order, keys


def prepare_bundle(g: Graph, cfg: ReadoutConfig | None = None, coeffs=None) -> ProjectorBundle:
    """Automorphisms -> pair orbits -> S -> eigenspace projectors, sorted, truncated, padded."""
    cfg = cfg or ReadoutConfig()
    n = g.n
    auts = enumerate_automorphisms(g, cfg.cap_auts)
    orbits = pair_orbits(auts, g)
    S = build_S(orbits, coeffs=coeffs, seed=None if coeffs is not None else cfg.coeff_seed)
    eig = sym_eig(S)
    blocks = block_projectors(eig, group_eigenvalues(eig, cfg.eig_tol))
    A = g.adj.astype(np.float64)
    order, keys = sort_blocks(blocks.projectors, [b.eigenvalue for b in blocks.blocks], A, laplacian(g))

    B = cfg.max_blocks
    keep = order[:B]
    projs = np.zeros((B, n, n))
    out_keys = np.zeros((B, 3))
    lam = np.full(B, np.nan)
    padded = np.ones(B, dtype=bool)
    for slot, i in enumerate(keep):
        projs[slot] = blocks.blocks[i].projector
        out_keys[slot] = keys[i]
        lam[slot] = blocks.blocks[i].eigenvalue
        padded[slot] = False
    return ProjectorBundle(
        fingerprint=graph_fingerprint(g, cfg),
        projectors=projs,
        padded=padded,
        keys=out_keys,
        eigenvalues=lam,
        capped=auts.capped,
        num_blocks=len(blocks),
        block_sizes=tuple(blocks.blocks[i].multiplicity for i in order),
    )


class BundleCache:
    """Fingerprint -> bundle; construction is serialized per key."""

    def __init__(self):
        self._lock = threading.Lock()
        self._key_locks: dict[str, threading.Lock] = {}
        self._store: dict[str, ProjectorBundle] = {}

    def get(self, g: Graph, cfg: ReadoutConfig) -> ProjectorBundle:
        key = graph_fingerprint(g, cfg)
        with self._lock:
            if key in self._store:
                return self._store[key]
            lock = self._key_locks.setdefault(key, threading.Lock())
        with lock:
            if key not in self._store:
                bundle = prepare_bundle(g, cfg)
                with self._lock:
                    self._store[key] = bundle
        return self._store[key]

    def __len__(self) -> int:
        return len(self._store)


# -- features ----------------------------------------------------------------


def center(M) -> np.ndarray:
    """J M with J = I - 11^T/n."""
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] < 1:
        raise ValueError("feature matrix must be 2-D with at least one row")
    return M - M.mean(axis=0, keepdims=True)


def random_projection(d: int, r: int, seed: int) -> np.ndarray:
    """d x r standard normals / sqrt(r), filled column by column."""
    if d < 0 or r < 0:
        raise ValueError("dimensions must be non-negative")
    if r == 0:
        return np.zeros((d, 0))
    z = SplitMix64(seed).normal(d * r)
    return z.reshape(r, d).T / np.sqrt(r)


def _colsum(X: np.ndarray) -> np.ndarray:
    # sorting first makes the sum independent of row order
    return np.sort(X, axis=0).sum(axis=0)


def _check_dims(P: np.ndarray, M: np.ndarray, R: np.ndarray) -> None:
    if P.shape != (M.shape[0], M.shape[0]):
        raise ValueError(f"projector {P.shape} does not match {M.shape[0]} rows")
    if R.shape[0] != M.shape[1]:
        raise ValueError(f"projection has {R.shape[0]} rows, features have {M.shape[1]} columns")


def block_statistics(Ma: np.ndarray) -> tuple[float, float, float, np.ndarray]:
    """(s1, s2, s3, mu) of a projected block; invariant under row permutations of Ma."""
    n = Ma.shape[0]
    cs = _colsum(Ma)
    s1 = float(np.sqrt(np.sum(cs * cs)))
    s2 = float(np.sqrt(np.sort((Ma * Ma).ravel()).sum()))
    s3 = float(np.sort(np.sqrt(np.sum(Ma * Ma, axis=1))).sum() / n)
    return s1, s2, s3, cs / n


def block_features(P, M, R) -> np.ndarray:
    """psi = (s1, s2, s3, mu^T R) for M_alpha = P M."""
    P, M, R = (np.asarray(x, dtype=np.float64) for x in (P, M, R))
    _check_dims(P, M, R)
    s1, s2, s3, mu = block_statistics(P @ M)
    return np.concatenate([[s1, s2, s3], mu @ R])


def linearized_block_features(P, M, R) -> np.ndarray:
    """First three column sums of P M, then (column sums)^T R; linear in M."""
    P, M, R = (np.asarray(x, dtype=np.float64) for x in (P, M, R))
    _check_dims(P, M, R)
    cs = _colsum(P @ M)
    head = np.zeros(3)
    head[: min(3, len(cs))] = cs[:3]
    return np.concatenate([head, cs @ R])


def _prepare_features(bundle: ProjectorBundle, M, cfg: ReadoutConfig) -> np.ndarray:
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] != bundle.n:
        raise ValueError(f"feature matrix has {M.shape[0] if M.ndim else 0} rows, graph has {bundle.n} nodes")
    return center(M) if cfg.centering else M


def isotypic_readout(bundle: ProjectorBundle, M, cfg: ReadoutConfig, R=None) -> np.ndarray:
    """Concatenation of the block features of all B slots (length B(3+r))."""
    M = _prepare_features(bundle, M, cfg)
    if R is None:
        R = random_projection(M.shape[1], cfg.rp_dim, cfg.seed)
    return np.concatenate([block_features(P, M, R) for P in bundle.projectors])


def isotypic_linear_readout(bundle: ProjectorBundle, M, cfg: ReadoutConfig, R=None) -> np.ndarray:
    """Sum over retained blocks of the linear block features (length 3+r)."""
    M = _prepare_features(bundle, M, cfg)
    if R is None:
        R = random_projection(M.shape[1], cfg.rp_dim, cfg.seed)
    out = np.zeros(3 + R.shape[1])
    for P in bundle.projectors:
        out += linearized_block_features(P, M, R)
    return out


def pool(M, kind: str) -> np.ndarray:
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] == 0:
        raise ValueError("pooling needs a non-empty 2-D feature matrix")
    if kind == "sum":
        return _colsum(M)
    if kind == "mean":
        return _colsum(M) / M.shape[0]
    if kind == "max":
        return M.max(axis=0)
    if kind == "meanmax":
        return np.concatenate([_colsum(M) / M.shape[0], M.max(axis=0)])
    raise ValueError(f"unknown pooling {kind!r}; choose from {', '.join(POOL_KINDS)}")


def readout(kind: str, M, bundle: ProjectorBundle | None = None, cfg: ReadoutConfig | None = None, R=None):
    """Dispatch on the readout name."""
    cfg = cfg or ReadoutConfig()
    if kind in POOL_KINDS:
        M = np.asarray(M, dtype=np.float64)
        return pool(center(M) if cfg.centering else M, kind)
    if bundle is None:
        raise ValueError(f"{kind} readout needs a projector bundle")
    if kind == "isotypic":
        return isotypic_readout(bundle, M, cfg, R)
    if kind == "isotypic-linear":
        return isotypic_linear_readout(bundle, M, cfg, R)
    raise ValueError(f"unknown readout {kind!r}; choose from {', '.join(READOUT_KINDS)}")
