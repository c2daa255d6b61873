"""Random-weight GIN-style message passing encoder (no training)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph
from .rng import SplitMix64

RMS_EPS = 1e-8


@dataclass(frozen=True)
class EncoderConfig:
    width: int = 64
    layers: int = 5
    seed: int = 0
    eps: float = 0.0

    def __post_init__(self):
        if self.width < 1 or self.layers < 1:
            raise ValueError("width and layers must be >= 1")


@dataclass(frozen=True)
class Layer:
    W1: np.ndarray  # in x d
    b1: np.ndarray
    W2: np.ndarray  # d x d
    b2: np.ndarray


@dataclass(frozen=True)
class EncoderWeights:
    config: EncoderConfig
    layers: tuple


def glorot_bound(fan_in: int, fan_out: int) -> float:
    return float(np.sqrt(6.0 / (fan_in + fan_out)))


def init_encoder(cfg: EncoderConfig, in_dim: int = 1) -> EncoderWeights:
    """Glorot-uniform weights, biases uniform in +-1/sqrt(fan_in).

    Draw order per layer: W1 (row-major), b1, W2 (row-major), b2.
    """
    rng = SplitMix64(cfg.seed)
    d = cfg.width
    layers = []
    fan_in = in_dim
    for _ in range(cfg.layers):
        a = glorot_bound(fan_in, d)
        W1 = rng.uniform(-a, a, fan_in * d).reshape(fan_in, d)
        b1 = rng.uniform(-1.0, 1.0, d) / np.sqrt(fan_in)
        a = glorot_bound(d, d)
        W2 = rng.uniform(-a, a, d * d).reshape(d, d)
        b2 = rng.uniform(-1.0, 1.0, d) / np.sqrt(d)
        layers.append(Layer(W1, b1, W2, b2))
        fan_in = d
    return EncoderWeights(cfg, tuple(layers))


def encode(g: Graph, weights: EncoderWeights, features=None) -> np.ndarray:
    """n x d node embeddings; input features default to a column of ones."""
    A = g.adj.astype(np.float64)
    h = np.ones((g.n, 1)) if features is None else np.asarray(features, dtype=np.float64)
    eps = weights.config.eps
    for layer in weights.layers:
        x = (1.0 + eps) * h + A @ h
        h = np.maximum(x @ layer.W1 + layer.b1, 0.0) @ layer.W2 + layer.b2
        rms = np.sqrt(np.mean(h * h, axis=1, keepdims=True))
        h = h / (rms + RMS_EPS)
    return h
