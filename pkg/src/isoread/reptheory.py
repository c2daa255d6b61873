"""Reynolds operator, character projectors and refinement checks.

Groups are given as an ``AutomorphismSet`` (rows are permutations) and act
on R^n through permutation matrices.  Character tables are supplied as data:
D6 on the 6-cycle is hardcoded, and the trivial character works for any group.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import null_space

from .automorphism import AutomorphismSet, enumerate_automorphisms
from .generators import cycle
from .graph import Graph, perm_matrix


class SubgroupWarning(UserWarning):
    """The stored automorphisms are a capped subset, not the whole group."""


@dataclass(frozen=True)
class GroupOperator:
    matrix: np.ndarray
    subgroup_only: bool = False
    notes: list = field(default_factory=list)


@dataclass(frozen=True)
class Character:
    name: str
    degree: int
    values: np.ndarray  # chi(h) for each stored row of the group


@dataclass(frozen=True)
class CharacterTable:
    group: AutomorphismSet
    characters: list

    def is_irreducible(self, k: int, tol: float = 1e-12) -> bool:
        chi = self.characters[k].values
        return abs(float(np.mean(chi * chi)) - 1.0) <= tol


def _require_group(group: AutomorphismSet, what: str) -> bool:
    if group.capped:
        warnings.warn(
            f"{what}: automorphism enumeration was capped at {group.cap}; "
            "result averages over a subset only",
            SubgroupWarning,
            stacklevel=3,
        )
    return group.capped


def _weighted_sum(group: AutomorphismSet, weights: np.ndarray) -> np.ndarray:
    n = group.n
    out = np.zeros((n, n))
    cols = np.arange(n)
    for h, w in zip(group.perms, weights):
        if w != 0.0:
            out[h, cols] += w
    return out


def reynolds(group: AutomorphismSet) -> GroupOperator:
    """p_avg = (1/|H|) sum_h rho(h)."""
    capped = _require_group(group, "reynolds")
    m = len(group.perms)
    P = _weighted_sum(group, np.full(m, 1.0 / m))
    notes = ["subgroup average over a capped automorphism set"] if capped else []
    return GroupOperator(P, capped, notes)


def character_projector(group: AutomorphismSet, character, degree: int) -> np.ndarray:
    """p = (degree/|H|) sum_h chi(h) rho(h) for a real character."""
    if group.capped:
        raise ValueError("character projectors need the full group, got a capped set")
    chi = np.asarray(character.values if isinstance(character, Character) else character, dtype=np.float64)
    if chi.shape != (len(group.perms),):
        raise ValueError("one character value per group element expected")
    return _weighted_sum(group, chi * degree / len(group.perms))


def trivial_character(group: AutomorphismSet) -> Character:
    return Character("trivial", 1, np.ones(len(group.perms)))


# -- explicit groups on six points ----------------------------------------


def d6_group() -> AutomorphismSet:
    """Symmetries of the hexagon 0-1-2-3-4-5-0 (order 12)."""
    return enumerate_automorphisms(Graph(6, frozenset(cycle(6))))


def c2_d3_d3_group() -> AutomorphismSet:
    """Symmetries of two triangles {0,1,2} and {3,4,5} (order 72)."""
    return enumerate_automorphisms(Graph(6, frozenset(cycle(3) + cycle(3, offset=3))))


def _d6_element(h: np.ndarray) -> tuple[int, bool]:
    """(k, reflection) with h = r^k or h = r^k s, where r: i -> i+1 and s: i -> -i."""
    k = int(h[0])
    if int(h[1]) == (k + 1) % 6:
        return k, False
    return k, True


def d6_character_table(group: AutomorphismSet | None = None) -> CharacterTable:
    """Four degree-1 characters and the two degree-2 characters chi_j(r^k) = 2cos(pi j k / 3)."""
    group = group or d6_group()
    if group.n != 6 or len(group.perms) != 12:
        raise ValueError("expected the dihedral group of order 12 on six points")
    elems = [_d6_element(h) for h in group.perms]
    chars = []
    for a in (1, -1):
        for b in (1, -1):
            vals = np.array([a**k * (b if refl else 1) for k, refl in elems], dtype=np.float64)
            chars.append(Character(f"linear(r={a:+d},s={b:+d})", 1, vals))
    for j in (1, 2):
        vals = np.array([0.0 if refl else 2.0 * np.cos(np.pi * j * k / 3) for k, refl in elems])
        chars.append(Character(f"chi{j}", 2, vals))
    return CharacterTable(group, chars)


def canonical_projectors(table: CharacterTable) -> list[np.ndarray]:
    """Projectors onto the isotypic components that actually occur."""
    out = []
    for ch in table.characters:
        p = character_projector(table.group, ch, ch.degree)
        if np.abs(p).max() > 1e-12:
            out.append(p)
    return out


# -- checks ----------------------------------------------------------------


def verify_fixed_subspace(
    p_avg, group: AutomorphismSet, trials: int = 16, seed: int = 0, tol: float = 1e-10
) -> bool:
    """image(p_avg) is pointwise fixed, and every fixed vector is kept by p_avg."""
    P = np.asarray(p_avg.matrix if isinstance(p_avg, GroupOperator) else p_avg, dtype=np.float64)
    n = group.n
    rng = np.random.default_rng(seed)
    U = rng.standard_normal((n, trials))
    PU = P @ U
    for h in group.perms:
        if np.abs(PU[h] - PU).max() > tol:
            return False
    stacked = np.vstack([perm_matrix(h) - np.eye(n) for h in group.perms])
    F = null_space(stacked)
    return bool(np.abs(P @ F - F).max(initial=0.0) <= tol)


def verify_refinement(blocks, canonical, tol: float = 1e-8) -> bool:
    """Every block lies inside exactly one canonical component."""
    projs = blocks.projectors if hasattr(blocks, "projectors") else list(blocks)
    for P in projs:
        hits = sum(1 for p in canonical if np.linalg.norm(p @ P - P) <= tol)
        if hits != 1:
            return False
    return True


def is_projector(P: np.ndarray, tol: float = 1e-9) -> bool:
    return bool(np.linalg.norm(P @ P - P) <= tol and np.linalg.norm(P - P.T) <= tol)


def averaged_map(A: np.ndarray, group: AutomorphismSet) -> np.ndarray:
    """f = (1/|H|) sum_h A rho(h)."""
    n = group.n
    out = np.zeros((A.shape[0], n))
    for h in group.perms:
        out += A[:, h]  # (A rho(h))[:, i] = A[:, h[i]]
    return out / len(group.perms)
