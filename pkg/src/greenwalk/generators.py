"""Seeded random graphs for tests and experiments."""

from __future__ import annotations

import numpy as np

from .graph import WeightedDigraph


def _weight(rng, weighted: bool) -> float:
    return float(rng.uniform(0.5, 1.5)) if weighted else 1.0


def random_strongly_connected_digraph(
    n: int, seed: int, extra: float = 0.25, weighted: bool = True
) -> WeightedDigraph:
    """A random permutation cycle plus extra arcs; strongly connected by construction."""
    rng = np.random.default_rng(seed)
    order = rng.permutation(n)
    arcs = []
    for a, b in zip(order, np.roll(order, -1)):
        arcs.append((int(a), int(b), _weight(rng, weighted)))
    mask = rng.random((n, n)) < extra
    for i in range(n):
        for j in range(n):
            if i != j and mask[i, j]:
                arcs.append((i, j, _weight(rng, weighted)))
    return WeightedDigraph(n, tuple(arcs))


def random_tree(n: int, seed: int, weighted: bool = False) -> WeightedDigraph:
    """A uniform random attachment tree on n vertices."""
    rng = np.random.default_rng(seed)
    arcs = []
    for v in range(1, n):
        parent = int(rng.integers(0, v))
        arcs.append((parent, v, _weight(rng, weighted)))
    if n == 1:
        arcs.append((0, 0, 1.0))
    return WeightedDigraph(n, tuple(arcs), undirected=True)


def random_connected_graph(
    n: int, seed: int, extra: float = 0.15, weighted: bool = False
) -> WeightedDigraph:
    """A random spanning tree plus extra undirected edges."""
    rng = np.random.default_rng(seed)
    arcs = []
    for v in range(1, n):
        parent = int(rng.integers(0, v))
        arcs.append((parent, v, _weight(rng, weighted)))
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < extra:
                arcs.append((i, j, _weight(rng, weighted)))
    if n == 1:
        arcs.append((0, 0, 1.0))
    return WeightedDigraph(n, tuple(arcs), undirected=True)
