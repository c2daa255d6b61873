"""Symmetric eigendecomposition, eigenvalue grouping and eigenspace projectors.

The Jacobi kernel is compiled with Cython when available; otherwise the
NumPy implementation in ``_jacobi_py`` is used.  Set ``ISOREAD_PURE_PYTHON=1``
to force the fallback.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from . import _jacobi_py

try:
    if os.environ.get("ISOREAD_PURE_PYTHON"):
        raise ImportError("pure-Python backend requested")
    from . import _jacobi as _jacobi_ext
except ImportError:
    _jacobi_ext = None

KERNELS = {"python": _jacobi_py.jacobi_inplace}
if _jacobi_ext is not None:
    KERNELS["cython"] = _jacobi_ext.jacobi_inplace
BACKEND = "cython" if "cython" in KERNELS else "python"

SYM_TOL = 1e-12
OFF_TOL = 1e-12
MAX_SWEEPS = 100


class NotSymmetricError(ValueError):
    pass


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class EigenDecomposition:
    eigenvalues: np.ndarray  # descending
    eigenvectors: np.ndarray  # column k pairs with eigenvalues[k]
    sweeps: int = 0
    backend: str = BACKEND


@dataclass(frozen=True)
class Block:
    eigenvalue: float
    indices: np.ndarray
    projector: np.ndarray

    @property
    def multiplicity(self) -> int:
        return len(self.indices)


@dataclass(frozen=True)
class BlockProjectorSet:
    blocks: list

    def __len__(self) -> int:
        return len(self.blocks)

    @property
    def projectors(self) -> list:
        return [b.projector for b in self.blocks]

    @property
    def sizes(self) -> list:
        return [b.multiplicity for b in self.blocks]


def check_symmetric(S: np.ndarray) -> np.ndarray:
    S = np.asarray(S, dtype=np.float64)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise NotSymmetricError(f"expected a square matrix, got shape {S.shape}")
    scale = max(1.0, float(np.abs(S).max(initial=0.0)))
    if np.abs(S - S.T).max(initial=0.0) > SYM_TOL * scale:
        raise NotSymmetricError("matrix is not symmetric")
    return S


def _fix_signs(Q: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Make the first entry with |x| > tol positive in every column."""
    for k in range(Q.shape[1]):
        nz = np.flatnonzero(np.abs(Q[:, k]) > tol)
        if len(nz) and Q[nz[0], k] < 0:
            Q[:, k] = -Q[:, k]
    return Q


def sym_eig(S, backend: str | None = None) -> EigenDecomposition:
    """Cyclic Jacobi eigendecomposition, eigenpairs sorted by descending eigenvalue."""
    S = check_symmetric(S)
    backend = backend or BACKEND
    kernel = KERNELS[backend]
    n = S.shape[0]
    a = np.ascontiguousarray((S + S.T) / 2.0)
    v = np.eye(n)
    fro = float(np.linalg.norm(S))
    sweeps = kernel(a, v, OFF_TOL * fro, MAX_SWEEPS)
    if sweeps < 0:
        raise ConvergenceError(f"Jacobi did not converge in {MAX_SWEEPS} sweeps")
    lam = np.diag(a).copy()
    order = np.argsort(-lam, kind="stable")
    Q = _fix_signs(np.ascontiguousarray(v[:, order]))
    return EigenDecomposition(lam[order], Q, sweeps, backend)


def group_eigenvalues(eig: EigenDecomposition, tol: float = 1e-12) -> list[np.ndarray]:
    """Merge maximal runs of sorted eigenvalues whose consecutive gaps are <= tol*max(1,|lambda|)."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    lam = eig.eigenvalues
    if len(lam) == 0:
        return []
    blocks, start = [], 0
    for k in range(1, len(lam)):
        scale = max(1.0, abs(lam[k - 1]), abs(lam[k]))
        if lam[k - 1] - lam[k] > tol * scale:
            blocks.append(np.arange(start, k))
            start = k
    blocks.append(np.arange(start, len(lam)))
    return blocks


def block_projectors(eig: EigenDecomposition, blocks) -> BlockProjectorSet:
    """P_alpha = sum_{k in I_alpha} q_k q_k^T."""
    n = len(eig.eigenvalues)
    flat = np.sort(np.concatenate([np.asarray(b, dtype=np.int64) for b in blocks])) if blocks else []
    if not np.array_equal(flat, np.arange(n)):
        raise ValueError("blocks must partition the eigenvalue indices")
    out = []
    for idx in blocks:
        idx = np.asarray(idx, dtype=np.int64)
        Qb = eig.eigenvectors[:, idx]
        out.append(Block(float(eig.eigenvalues[idx].mean()), idx, Qb @ Qb.T))
    return BlockProjectorSet(out)


def eigenspace_projectors(S, tol: float = 1e-12, backend: str | None = None) -> BlockProjectorSet:
    eig = sym_eig(S, backend)
    return block_projectors(eig, group_eigenvalues(eig, tol))
