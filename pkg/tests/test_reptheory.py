import numpy as np
import pytest
from scipy.linalg import circulant

from isoread.automorphism import enumerate_automorphisms
from isoread.generators import gen_er
from isoread.reptheory import (
    SubgroupWarning,
    averaged_map,
    c2_d3_d3_group,
    canonical_projectors,
    character_projector,
    d6_character_table,
    d6_group,
    is_projector,
    reynolds,
    trivial_character,
    verify_fixed_subspace,
    verify_refinement,
)
from isoread.graph import Graph, perm_matrix
from isoread.symlinalg import eigenspace_projectors

P_CHI1 = circulant([1, 0.5, -0.5, -1, -0.5, 0.5]) / 3
P_CHI2 = circulant([1, -0.5, -0.5, 1, -0.5, -0.5]) / 3


def test_reynolds_examples():
    assert np.abs(reynolds(d6_group()).matrix - 1 / 6).max() <= 1e-12
    assert np.abs(reynolds(c2_d3_d3_group()).matrix - 1 / 6).max() <= 1e-12
    trivial = enumerate_automorphisms(Graph.from_edges(3, [(0, 1), (1, 2)]))
    trivial = type(trivial)(trivial.perms[:1], False, 1, 1)
    assert np.array_equal(reynolds(trivial).matrix, np.eye(3))


def test_reynolds_is_projector_and_commutes():
    G = c2_d3_d3_group()
    P = reynolds(G).matrix
    assert is_projector(P, 1e-12)
    for h in G.perms:
        R = perm_matrix(h)
        assert np.abs(R @ P - P @ R).max() <= 1e-12


def test_reynolds_capped_warns():
    G = enumerate_automorphisms(Graph(7, frozenset()), cap=50)
    with pytest.warns(SubgroupWarning):
        op = reynolds(G)
    assert op.subgroup_only and op.notes
    with pytest.raises(ValueError):
        character_projector(G, np.ones(len(G.perms)), 1)


def test_d6_character_projectors():
    T = d6_character_table()
    chars = {c.name: c for c in T.characters}
    assert np.abs(character_projector(T.group, chars["chi1"], 2) - P_CHI1).max() <= 1e-12
    assert np.abs(character_projector(T.group, chars["chi2"], 2) - P_CHI2).max() <= 1e-12


def test_d6_table_irreducible():
    T = d6_character_table()
    assert len(T.characters) == 6
    assert all(T.is_irreducible(k) for k in range(6))
    ident = [i for i, h in enumerate(T.group.perms) if np.array_equal(h, np.arange(6))][0]
    assert sorted(c.values[ident] for c in T.characters) == [1, 1, 1, 1, 2, 2]
    assert sum(c.degree**2 for c in T.characters) == 12


def test_canonical_projectors_complete():
    projs = canonical_projectors(d6_character_table())
    assert len(projs) == 4
    assert np.abs(sum(projs) - np.eye(6)).max() <= 1e-9
    for i, a in enumerate(projs):
        for b in projs[i + 1 :]:
            assert np.abs(a @ b).max() <= 1e-9


def test_trivial_character_equals_reynolds():
    G = d6_group()
    assert np.allclose(character_projector(G, trivial_character(G), 1), reynolds(G).matrix, atol=1e-15)


def test_fixed_subspace():
    G = d6_group()
    p = reynolds(G)
    assert verify_fixed_subspace(p, G)
    assert np.allclose(p.matrix @ np.ones(6), np.ones(6))
    assert np.allclose(p.matrix @ np.array([1, -1, 0, 0, 0, 0]), 0)
    assert not verify_fixed_subspace(np.eye(6), G)
    assert not verify_fixed_subspace(np.zeros((6, 6)), G)


def test_refinement(S1, S2):
    canon = canonical_projectors(d6_character_table())
    blocks = eigenspace_projectors(S1)
    assert verify_refinement(blocks, canon)
    # blocks match the components one to one
    for P in blocks.projectors:
        assert any(np.linalg.norm(P - c) <= 1e-8 for c in canon)
    G2 = c2_d3_d3_group()
    canon2 = [reynolds(G2).matrix, np.eye(6) - reynolds(G2).matrix]
    assert verify_refinement(eigenspace_projectors(S2), canon2)


def test_refinement_rejects_non_invariant():
    canon = canonical_projectors(d6_character_table())
    v = np.array([1.0, 0, 0, 0, 0, 0])
    assert not verify_refinement([np.outer(v, v)], canon)


@pytest.mark.parametrize("group", [d6_group(), c2_d3_d3_group()])
def test_factorization_through_average(group):
    rng = np.random.default_rng(0)
    P = reynolds(group).matrix
    for _ in range(10):
        f = averaged_map(rng.standard_normal((4, 6)), group)
        U = rng.standard_normal((6, 10))
        assert np.abs(f @ U - f @ P @ U).max() <= 1e-9


def test_averaged_map_matches_definition():
    G = d6_group()
    A = np.random.default_rng(1).standard_normal((3, 6))
    ref = sum(A @ perm_matrix(h) for h in G.perms) / len(G.perms)
    assert np.allclose(averaged_map(A, G), ref, atol=1e-14)


def test_fixed_subspace_random_graph():
    g = gen_er(9, 0.3, 2)
    G = enumerate_automorphisms(g)
    assert verify_fixed_subspace(reynolds(G), G)
