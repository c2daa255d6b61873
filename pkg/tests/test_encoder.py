import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from isoread.encoder import EncoderConfig, encode, glorot_bound, init_encoder
from isoread.generators import complete_graph, gen_cfi_pair, gen_cycle_pair, gen_er, gen_rook4, gen_shrikhande
from isoread.graph import perm_matrix, permute
from isoread.readout import pool
from isoread.rng import SplitMix64


def sorted_rows(M):
    return M[np.lexsort(M.T[::-1])]


def test_init_deterministic():
    a = init_encoder(EncoderConfig(seed=3))
    b = init_encoder(EncoderConfig(seed=3))
    c = init_encoder(EncoderConfig(seed=4))
    for la, lb, lc in zip(a.layers, b.layers, c.layers):
        assert np.array_equal(la.W1, lb.W1) and np.array_equal(la.W2, lb.W2)
        assert not np.array_equal(la.W1, lc.W1)


def test_shapes_and_bounds():
    w = init_encoder(EncoderConfig(width=16, layers=3))
    assert w.layers[0].W1.shape == (1, 16)
    assert w.layers[1].W1.shape == (16, 16)
    for i, layer in enumerate(w.layers):
        fan_in = 1 if i == 0 else 16
        assert np.abs(layer.W1).max() <= glorot_bound(fan_in, 16)
        assert np.abs(layer.W2).max() <= glorot_bound(16, 16)
        assert np.abs(layer.b1).max() <= 1 / np.sqrt(fan_in)


def test_config_validation():
    with pytest.raises(ValueError):
        EncoderConfig(width=0)
    with pytest.raises(ValueError):
        EncoderConfig(layers=0)


def test_vertex_transitive_rows_equal():
    _, c6 = gen_cycle_pair(3)
    M = encode(c6, init_encoder(EncoderConfig()))
    assert M.shape == (6, 64)
    assert np.abs(M - M[0]).max() <= 1e-12


def test_matches_layer_formula():
    g = gen_er(8, 0.4, 1)
    w = init_encoder(EncoderConfig(width=4, layers=1, seed=2))
    L = w.layers[0]
    A = g.adj.astype(float)
    h = np.ones((8, 1))
    x = np.maximum((h + A @ h) @ L.W1 + L.b1, 0) @ L.W2 + L.b2
    x = x / (np.sqrt((x**2).mean(axis=1, keepdims=True)) + 1e-8)
    assert np.allclose(encode(g, w), x, atol=1e-14)


@given(st.integers(0, 2**32), st.integers(1, 20))
@settings(max_examples=40, deadline=None)
def test_equivariance(seed, n):
    g = gen_er(n, 0.3, seed)
    q = SplitMix64(seed).permutation(n)
    w = init_encoder(EncoderConfig(width=8, seed=seed))
    assert np.abs(encode(permute(g, q), w) - perm_matrix(q) @ encode(g, w)).max() <= 1e-10


def wl_pairs():
    pairs = [gen_cycle_pair(k) for k in range(3, 15)]
    pairs += [gen_cfi_pair(complete_graph(3)), gen_cfi_pair(complete_graph(4)), (gen_shrikhande(), gen_rook4())]
    return pairs


@pytest.mark.parametrize("g, h", wl_pairs())
def test_wl_pairs_share_row_multisets(g, h):
    w = init_encoder(EncoderConfig(seed=5))
    Mg, Mh = encode(g, w), encode(h, w)
    assert np.abs(sorted_rows(Mg) - sorted_rows(Mh)).max() <= 1e-8
    zg, zh = pool(Mg, "sum"), pool(Mh, "sum")
    assert np.linalg.norm(zg - zh) <= 1e-6 * np.linalg.norm(zg)


def test_referentially_transparent():
    g = gen_er(10, 0.3, 0)
    w = init_encoder(EncoderConfig())
    before = [l.W1.copy() for l in w.layers]
    a, b = encode(g, w), encode(g, w)
    assert np.array_equal(a, b)
    assert all(np.array_equal(x, l.W1) for x, l in zip(before, w.layers))
