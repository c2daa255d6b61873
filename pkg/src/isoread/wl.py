"""1-WL color refinement and WL-equivalence."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .graph import Graph
from .search import refine


@dataclass(frozen=True)
class StableColoring:
    colors: np.ndarray
    histogram: tuple[tuple[int, int], ...]

    @property
    def num_colors(self) -> int:
        return len(self.histogram)


def _histogram(colors: np.ndarray) -> tuple[tuple[int, int], ...]:
    return tuple(sorted(Counter(colors.tolist()).items()))


def color_refinement(g: Graph, initial=None) -> StableColoring:
    """Stable coloring from uniform (or given) initial colors.

    Colors are ranks of sorted refinement signatures, so they do not depend
    on the node labeling.
    """
    c0 = np.zeros(g.n, dtype=np.int64) if initial is None else np.asarray(initial)
    if g.n and initial is not None:
        _, c0 = np.unique(c0, return_inverse=True)
    colors = refine(g.adj.astype(np.float64), c0)
    return StableColoring(colors, _histogram(colors))


def wl_equivalent(g: Graph, h: Graph) -> bool:
    """Refine the disjoint union and compare the per-side color histograms."""
    if g.n != h.n:
        return False
    n = g.n
    U = np.zeros((2 * n, 2 * n))
    U[:n, :n] = g.adj
    U[n:, n:] = h.adj
    c = refine(U, np.zeros(2 * n, dtype=np.int64))
    return _histogram(c[:n]) == _histogram(c[n:])
