"""R-vine tree sequences built from cherry-trees, and their pair-copula labels."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .structures import CherryTree, ValidationReport, VertexSet

__all__ = [
    "BaseTree",
    "TruncatedRVine",
    "EdgeLabel",
    "validate_sequence",
    "proximity_equiv",
    "edge_labels",
    "node_labels",
]


def _is_tree(n_nodes: int, edges: Iterable[tuple[int, int]]) -> bool:
    edges = list(edges)
    if len(edges) != n_nodes - 1:
        return False
    parent = list(range(n_nodes))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        parent[ra] = rb
    return True


@dataclass(frozen=True)
class BaseTree:
    """First tree of a vine: a spanning tree on the variables."""

    vertices: VertexSet
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not isinstance(self.vertices, VertexSet):
            object.__setattr__(self, "vertices", VertexSet(self.vertices))
        edges = tuple(sorted((min(a, b), max(a, b)) for a, b in self.edges))
        object.__setattr__(self, "edges", edges)

    @property
    def d(self) -> int:
        return len(self.vertices)

    def edge_sets(self) -> list[VertexSet]:
        return [VertexSet(e) for e in self.edges]


@dataclass(frozen=True)
class TruncatedRVine:
    """Base tree plus cherry-tree levels of orders 2, 3, ..., k.

    ``levels[i]`` is the order-``i + 2`` tree. Construction does not check
    that the levels fit together; see :func:`validate_sequence`.
    """

    base: BaseTree
    levels: tuple[CherryTree, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(self.levels))

    @property
    def d(self) -> int:
        return self.base.d

    @property
    def vertices(self) -> VertexSet:
        return self.base.vertices

    @property
    def truncation(self) -> int:
        """Number of trees, counting the base tree (the ``k`` in level-k)."""
        return len(self.levels) + 1

    @property
    def top(self) -> CherryTree | None:
        return self.levels[-1] if self.levels else None

    def level(self, order: int) -> CherryTree:
        return self.levels[order - 2]


@dataclass(frozen=True, order=True)
class EdgeLabel:
    """Pair-copula label ``a, b | S`` attached to a vine edge.

    ``level`` is the tree the edge lives in (1 for base-tree edges, whose
    conditioning set is empty). The conditioned pair is stored sorted.
    """

    level: int
    conditioned: tuple[int, int]
    conditioning: VertexSet

    def __post_init__(self):
        a, b = self.conditioned
        if a == b:
            raise ValueError(f"conditioned pair must be two distinct vertices, got ({a}, {b})")
        object.__setattr__(self, "conditioned", (min(a, b), max(a, b)))
        if not isinstance(self.conditioning, VertexSet):
            object.__setattr__(self, "conditioning", VertexSet(self.conditioning))
        if a in self.conditioning or b in self.conditioning:
            raise ValueError(f"conditioned vertex inside conditioning set in {self}")
        if len(self.conditioning) != self.level - 1:
            raise ValueError(f"level {self.level} label needs {self.level - 1} conditioning vertices")

    @classmethod
    def of(cls, a: int, b: int, cond: Iterable[int] = ()) -> "EdgeLabel":
        cond = VertexSet(cond)
        return cls(len(cond) + 1, (a, b), cond)

    @property
    def key(self) -> tuple[tuple[int, int], VertexSet]:
        return self.conditioned, self.conditioning

    @property
    def union(self) -> VertexSet:
        return self.conditioning | VertexSet(self.conditioned)

    def other(self, vertex: int) -> int:
        a, b = self.conditioned
        if vertex == a:
            return b
        if vertex == b:
            return a
        raise KeyError(vertex)

    def __str__(self) -> str:
        a, b = self.conditioned
        if self.conditioning:
            return f"c_{{{a},{b}|{self.conditioning.label()}}}"
        return f"c_{{{a},{b}}}"


def validate_sequence(v: TruncatedRVine) -> ValidationReport:
    """Check that the levels of ``v`` form a cherry-vine sequence.

    The base tree must span the variables, the order-2 clusters must be
    exactly the base edges, and every order-``l`` cluster (``l >= 3``) must
    be the union of two clusters linked in the order-``l - 1`` tree.
    """
    V = v.vertices
    d = len(V)
    index = {x: i for i, x in enumerate(V)}
    for a, b in v.base.edges:
        if a == b or a not in index or b not in index:
            return ValidationReport(False, f"base edge ({a}, {b}) is not a pair of distinct vertices", level=1)
    if len(set(v.base.edges)) != len(v.base.edges):
        return ValidationReport(False, "duplicate base edge", level=1)
    if not _is_tree(d, [(index[a], index[b]) for a, b in v.base.edges]):
        return ValidationReport(False, "base edges do not form a spanning tree", level=1)

    prev_clusters: list[VertexSet] = v.base.edge_sets()
    prev_links: list[tuple[VertexSet, VertexSet]] | None = None
    for offset, tree in enumerate(v.levels):
        order = offset + 2
        if tree.order != order:
            return ValidationReport(False, f"tree at position {order} has order {tree.order}", level=order)
        if tree.vertices != V:
            return ValidationReport(False, f"tree covers {tree.vertices!r}, expected {V!r}", level=order)
        if len(tree.clusters) != d - order + 1:
            return ValidationReport(
                False, f"{len(tree.clusters)} clusters, expected {d - order + 1}", level=order
            )
        if order == 2:
            if set(tree.clusters) != set(prev_clusters):
                extra = sorted(set(tree.clusters) - set(prev_clusters))
                return ValidationReport(
                    False, "order-2 clusters differ from the base tree edges", tuple(extra), level=order
                )
        else:
            unions = {a | b for a, b in prev_links}
            for c in tree.clusters:
                if c not in unions:
                    return ValidationReport(
                        False,
                        f"cluster {c!r} is not the union of two linked clusters of the order-{order - 1} tree",
                        (c,),
                        level=order,
                    )
        prev_clusters = list(tree.clusters)
        prev_links = tree.links()
    return ValidationReport(True)


def proximity_equiv(v: TruncatedRVine) -> bool:
    """Re-check ``v`` against the tree-sequence form of an R-vine.

    Each tree's nodes must be in one-to-one correspondence with the edges
    of the tree below, each tree must be a tree, and linked nodes must come
    from edges sharing a node (which also gives ``|X ^ Y| == 2``). This does
    not reuse the running-intersection machinery of
    :func:`validate_sequence`.
    """
    V = v.vertices
    index = {x: i for i, x in enumerate(V)}
    if any(a not in index or b not in index or a == b for a, b in v.base.edges):
        return False
    if not _is_tree(len(V), [(index[a], index[b]) for a, b in v.base.edges]):
        return False

    # "edges below" as pairs of node sets; for the base tree nodes are vertices
    below: list[tuple[frozenset, frozenset]] = [
        (frozenset([a]), frozenset([b])) for a, b in v.base.edges
    ]
    for offset, tree in enumerate(v.levels):
        nodes = [frozenset(c) for c in tree.clusters]
        edge_of = {}
        for x, y in below:
            u = x | y
            if u in edge_of:
                return False
            edge_of[u] = (x, y)
        if set(edge_of) != set(nodes) or len(nodes) != len(edge_of):
            return False
        if not _is_tree(len(nodes), tree.edges):
            return False
        for i, j in tree.edges:
            ex, ey = edge_of[nodes[i]], edge_of[nodes[j]]
            if not set(ex) & set(ey):
                return False
            if len(nodes[i] ^ nodes[j]) != 2:
                return False
        below = [(nodes[i], nodes[j]) for i, j in tree.edges]
    return True


def _link_label(x: VertexSet, y: VertexSet, level: int) -> EdgeLabel:
    sep = x & y
    (a,) = (x - sep).ids
    (b,) = (y - sep).ids
    return EdgeLabel(level, (a, b), sep)


def edge_labels(v: TruncatedRVine) -> list[EdgeLabel]:
    """Pair-copula labels: base edges first, then the links of each level.

    A link between clusters ``X`` and ``Y`` of the order-``l`` tree gets
    ``S = X & Y``, ``a = X - S`` and ``b = Y - S``.
    """
    labels = [EdgeLabel(1, (a, b), VertexSet()) for a, b in v.base.edges]
    for offset, tree in enumerate(v.levels):
        level = offset + 2
        labels.extend(_link_label(x, y, level) for x, y in tree.links())
    return labels


def node_labels(v: TruncatedRVine) -> list[dict[VertexSet, EdgeLabel]]:
    """For each level, map every cluster to the label of the edge below it.

    Entry ``i`` belongs to the order-``i + 2`` tree. Order-2 clusters are
    base edges; higher clusters are unions of a link one level down.
    """
    out = []
    below = {VertexSet(e): EdgeLabel(1, e, VertexSet()) for e in v.base.edges}
    for offset, tree in enumerate(v.levels):
        out.append({c: below[c] for c in tree.clusters if c in below})
        level = offset + 2
        below = {x | y: _link_label(x, y, level) for x, y in tree.links()}
    return out
