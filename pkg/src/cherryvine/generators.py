"""Random structures for property tests and the ``selfcheck`` command.

All generators take a :class:`numpy.random.Generator` and use vertex ids
``1..d``.
"""
from __future__ import annotations

import numpy as np

from .structures import CherryTree, JunctionTree, VertexSet
from .vine import BaseTree, TruncatedRVine

__all__ = [
    "random_cherry_tree",
    "random_junction_tree",
    "random_vine",
    "random_correlation",
    "random_unit_points",
]


def random_cherry_tree(rng: np.random.Generator, d: int, k: int) -> CherryTree:
    """Grow an order-``k`` cherry-tree on ``d`` vertices one leaf at a time.

    Each step picks an existing cluster, drops one of its vertices and adds
    a fresh one. Every cherry-tree can arise this way.
    """
    if not 1 <= k <= d:
        raise ValueError(f"need 1 <= k <= d, got k={k}, d={d}")
    labels = [int(x) + 1 for x in rng.permutation(d)]
    clusters = [VertexSet(labels[:k])]
    edges = []
    for new in labels[k:]:
        i = int(rng.integers(len(clusters)))
        host = clusters[i]
        drop = host.ids[int(rng.integers(k))]
        clusters.append(host.without(drop) | VertexSet([new]))
        edges.append((i, len(clusters) - 1))
    return CherryTree(JunctionTree(tuple(clusters), tuple(edges)), k)


def random_junction_tree(rng: np.random.Generator, d: int, max_cluster: int | None = None) -> JunctionTree:
    """Random junction tree on ``1..d`` with clusters of mixed sizes.

    New clusters take a proper subset of a random existing cluster plus at
    least one fresh vertex, which keeps the antichain and running
    intersection properties.
    """
    max_cluster = max_cluster or d
    labels = [int(x) + 1 for x in rng.permutation(d)]
    first = int(rng.integers(1, min(max_cluster, d) + 1))
    clusters = [VertexSet(labels[:first])]
    edges = []
    pos = first
    while pos < d:
        i = int(rng.integers(len(clusters)))
        host = clusters[i].ids
        n_sep = int(rng.integers(0, min(len(host), max_cluster - 1) + 1))
        n_sep = min(n_sep, len(host) - 1)
        sep = [host[j] for j in rng.choice(len(host), size=n_sep, replace=False)] if n_sep else []
        n_new = int(rng.integers(1, min(max_cluster - n_sep, d - pos) + 1))
        clusters.append(VertexSet(sep + labels[pos:pos + n_new]))
        edges.append((i, len(clusters) - 1))
        pos += n_new
    return JunctionTree(tuple(clusters), tuple(edges), VertexSet(range(1, d + 1)))


def _random_spanning_tree(rng, n: int, allowed: list[tuple[int, int]]) -> list[tuple[int, int]]:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    out = []
    for idx in rng.permutation(len(allowed)):
        a, b = allowed[int(idx)]
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            out.append((a, b))
    if len(out) != n - 1:
        raise ValueError("allowed edges do not connect all nodes")
    return out


def random_vine(rng: np.random.Generator, d: int, k: int) -> TruncatedRVine:
    """Random vine truncated at level ``k`` built bottom-up.

    The base tree is a random spanning tree; each higher tree is a random
    spanning tree of the line graph of the tree below (edges sharing a
    node), so every level satisfies the proximity condition.
    """
    if not 1 <= k <= d - 1 and not (d == 1 and k == 1):
        raise ValueError(f"need 1 <= k <= d - 1, got k={k}, d={d}")
    labels = [int(x) + 1 for x in rng.permutation(d)]
    base_edges = _random_spanning_tree(
        rng, d, [(i, j) for i in range(d) for j in range(i + 1, d)]
    )
    base = BaseTree(VertexSet(range(1, d + 1)), tuple((labels[a], labels[b]) for a, b in base_edges))
    # nodes of the tree below, as (set, endpoints-in-the-tree-below)
    nodes = [VertexSet(e) for e in base.edges]
    below_edges = [tuple(sorted((frozenset([a]), frozenset([b])), key=sorted)) for a, b in base.edges]
    levels = []
    for order in range(2, k + 1):
        n = len(nodes)
        allowed = [
            (i, j)
            for i in range(n)
            for j in range(i + 1, n)
            if set(below_edges[i]) & set(below_edges[j])
        ]
        edges = _random_spanning_tree(rng, n, allowed)
        tree = CherryTree(JunctionTree(tuple(nodes), tuple(edges)), order)
        levels.append(tree)
        below_edges = [(frozenset(nodes[i]), frozenset(nodes[j])) for i, j in tree.edges]
        nodes = [nodes[i] | nodes[j] for i, j in tree.edges]
    return TruncatedRVine(base, tuple(levels))


def random_correlation(rng: np.random.Generator, d: int, extra: int = 2) -> np.ndarray:
    """Random positive definite correlation matrix from a Wishart-like draw."""
    a = rng.standard_normal((d, d + extra))
    cov = a @ a.T
    s = np.sqrt(np.diag(cov))
    corr = cov / np.outer(s, s)
    corr = (corr + corr.T) / 2
    np.fill_diagonal(corr, 1.0)
    return corr


def random_unit_points(rng: np.random.Generator, n: int, d: int) -> np.ndarray:
    return rng.uniform(0.0, 1.0, size=(n, d))
