"""Vertex sets, junction trees and cherry-trees with their structural validators."""
from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .exceptions import CherryTreeError, StructureError

__all__ = [
    "VertexSet",
    "JunctionTree",
    "CherryTree",
    "SeparatorTable",
    "ValidationReport",
    "check_rip",
    "separator_table",
    "validate_cherry",
    "canonicalize",
    "junction_tree_exists",
    "tree_path",
]


class VertexSet:
    """Immutable set of positive vertex ids kept in sorted order.

    Equality, hashing and ordering are structural: two sets are equal iff
    they hold the same ids, and ``<`` compares the sorted id tuples
    lexicographically (this is the tie-break order used everywhere).
    """

    __slots__ = ("_ids", "_set")

    def __init__(self, ids: Iterable[int] = ()):
        ids = tuple(sorted(set(int(i) for i in ids)))
        if ids and ids[0] < 1:
            raise ValueError(f"vertex ids must be positive integers, got {ids[0]}")
        self._ids = ids
        self._set = frozenset(ids)

    @property
    def ids(self) -> tuple[int, ...]:
        return self._ids

    def __iter__(self) -> Iterator[int]:
        return iter(self._ids)

    def __len__(self) -> int:
        return len(self._ids)

    def __contains__(self, item) -> bool:
        return item in self._set

    def __hash__(self) -> int:
        return hash(self._ids)

    def __eq__(self, other) -> bool:
        if isinstance(other, VertexSet):
            return self._ids == other._ids
        return NotImplemented

    def __lt__(self, other: "VertexSet") -> bool:
        return self._ids < other._ids

    def __le__(self, other: "VertexSet") -> bool:
        return self._ids <= other._ids

    def __or__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self._set | other._set)

    def __and__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self._set & other._set)

    def __sub__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self._set - other._set)

    def __xor__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self._set ^ other._set)

    union = __or__
    intersection = __and__
    difference = __sub__
    symmetric_difference = __xor__

    def issubset(self, other: "VertexSet") -> bool:
        return self._set <= other._set

    def issuperset(self, other: "VertexSet") -> bool:
        return self._set >= other._set

    def without(self, vertex: int) -> "VertexSet":
        return VertexSet(self._set - {vertex})

    def label(self, sep: str = ",") -> str:
        return sep.join(str(i) for i in self._ids)

    def __repr__(self) -> str:
        return "{" + self.label() + "}"


def _vs(x) -> VertexSet:
    return x if isinstance(x, VertexSet) else VertexSet(x)


def _norm_edges(edges) -> tuple[tuple[int, int], ...]:
    out = []
    for e in edges:
        i, j = (int(x) for x in e)
        out.append((i, j) if i <= j else (j, i))
    return tuple(sorted(out))


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of a structural check.

    ``clusters`` carries the offending clusters (e.g. the violating pair and
    the path cluster for a RIP failure); ``level`` is set by vine checks.
    """

    ok: bool
    message: str = ""
    clusters: tuple[VertexSet, ...] = ()
    level: int | None = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class JunctionTree:
    """Clusters linked by a tree.

    Construction only normalizes the input (cluster sets become
    :class:`VertexSet`, edges become sorted index pairs). Use
    :func:`check_rip` to find out whether the result is a junction tree.
    """

    clusters: tuple[VertexSet, ...]
    edges: tuple[tuple[int, int], ...] = ()
    vertices: VertexSet | None = None

    def __post_init__(self):
        clusters = tuple(_vs(c) for c in self.clusters)
        object.__setattr__(self, "clusters", clusters)
        object.__setattr__(self, "edges", _norm_edges(self.edges))
        if self.vertices is None:
            allv: set[int] = set()
            for c in clusters:
                allv.update(c)
            object.__setattr__(self, "vertices", VertexSet(allv))
        else:
            object.__setattr__(self, "vertices", _vs(self.vertices))

    @classmethod
    def from_links(cls, clusters, links, vertices=None) -> "JunctionTree":
        """Build from clusters and links given as pairs of cluster contents."""
        clusters = [_vs(c) for c in clusters]
        index = {c: i for i, c in enumerate(clusters)}
        edges = [(index[_vs(a)], index[_vs(b)]) for a, b in links]
        return cls(tuple(clusters), tuple(edges), vertices)

    @property
    def separators(self) -> tuple[VertexSet, ...]:
        """Separator of each edge, aligned with ``edges``."""
        return tuple(self.clusters[i] & self.clusters[j] for i, j in self.edges)

    def neighbors(self, i: int) -> list[int]:
        return [b if a == i else a for a, b in self.edges if i in (a, b)]

    def adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {i: [] for i in range(len(self.clusters))}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def links(self) -> list[tuple[VertexSet, VertexSet]]:
        return [(self.clusters[i], self.clusters[j]) for i, j in self.edges]


def tree_path(adj: dict[int, list[int]], src: int, dst: int) -> list[int]:
    """Node path from ``src`` to ``dst`` in a tree given by adjacency lists."""
    parent = {src: src}
    queue = deque([src])
    while queue:
        node = queue.popleft()
        if node == dst:
            break
        for nb in adj[node]:
            if nb not in parent:
                parent[nb] = node
                queue.append(nb)
    if dst not in parent:
        return []
    path = [dst]
    while path[-1] != src:
        path.append(parent[path[-1]])
    return path[::-1]


def check_rip(jt: JunctionTree) -> ValidationReport:
    """Check that ``jt`` is a junction tree.

    Connectivity, acyclicity, the antichain property, coverage of
    ``jt.vertices`` and the running intersection property are checked in
    that order; the first failure is reported.

    Raises
    ------
    StructureError
        If there are no clusters or an edge refers to a missing cluster or
        is a self loop.
    """
    n = len(jt.clusters)
    if n == 0:
        raise StructureError("junction tree has no clusters")
    for a, b in jt.edges:
        if a < 0 or b >= n:
            raise StructureError(f"edge ({a}, {b}) refers to a cluster index outside 0..{n - 1}")
        if a == b:
            raise StructureError(f"edge ({a}, {b}) is a self loop")
    if len(set(jt.edges)) != len(jt.edges):
        return ValidationReport(False, "duplicate edge")
    if len(jt.edges) != n - 1:
        return ValidationReport(False, f"{len(jt.edges)} edges for {n} clusters; a tree needs {n - 1}")
    adj = jt.adjacency()
    seen = {0}
    queue = deque([0])
    while queue:
        for nb in adj[queue.popleft()]:
            if nb not in seen:
                seen.add(nb)
                queue.append(nb)
    if len(seen) != n:
        missing = min(set(range(n)) - seen)
        return ValidationReport(False, "clusters are not connected", (jt.clusters[missing],))

    for i, j in combinations(range(n), 2):
        a, b = jt.clusters[i], jt.clusters[j]
        if a == b:
            return ValidationReport(False, f"cluster {a!r} appears twice", (a,))
        if a.issubset(b) or b.issubset(a):
            small, big = (a, b) if a.issubset(b) else (b, a)
            return ValidationReport(False, f"cluster {small!r} is a subset of {big!r}", (small, big))

    covered: set[int] = set()
    for c in jt.clusters:
        covered.update(c)
    if VertexSet(covered) != jt.vertices:
        return ValidationReport(
            False, f"union of clusters {VertexSet(covered)!r} differs from vertex set {jt.vertices!r}"
        )

    for i, j in combinations(range(n), 2):
        common = jt.clusters[i] & jt.clusters[j]
        if not common:
            continue
        for s in tree_path(adj, i, j)[1:-1]:
            if not common.issubset(jt.clusters[s]):
                return ValidationReport(
                    False,
                    f"running intersection fails: {common!r} = {jt.clusters[i]!r} & {jt.clusters[j]!r} "
                    f"is not contained in path cluster {jt.clusters[s]!r}",
                    (jt.clusters[i], jt.clusters[j], jt.clusters[s]),
                )
    return ValidationReport(True)


@dataclass(frozen=True)
class SeparatorTable:
    """Distinct separators with multiplicities, sorted by separator."""

    entries: tuple[tuple[VertexSet, int], ...]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def separators(self) -> tuple[VertexSet, ...]:
        return tuple(s for s, _ in self.entries)

    def multiplicity(self, sep) -> int:
        sep = _vs(sep)
        for s, nu in self.entries:
            if s == sep:
                return nu
        return 0

    def as_dict(self) -> dict[VertexSet, int]:
        return dict(self.entries)


def separator_table(jt: JunctionTree) -> SeparatorTable:
    """Distinct separators of ``jt`` and the number of clusters each links.

    The multiplicity is one more than the number of edges carrying the
    separator, i.e. the number of clusters the separator links together
    (the edges with a given separator form a subtree whenever all
    separators have equal size, as in cherry-trees). This keeps
    ``sum(nu - 1) == len(clusters) - 1`` for every junction tree.
    """
    counts: dict[VertexSet, int] = defaultdict(int)
    for sep in jt.separators:
        counts[sep] += 1
    return SeparatorTable(tuple(sorted((s, c + 1) for s, c in counts.items())))


@dataclass(frozen=True)
class CherryTree:
    """Junction tree whose clusters all have ``order`` vertices and whose
    separators all have ``order - 1``.

    The invariants are checked at construction; invalid input raises
    :class:`CherryTreeError` (or :class:`StructureError` for malformed
    edges). ``order == 1`` is accepted: singleton clusters with empty
    separators, the degenerate separator structure of an order-2 tree.
    """

    base: JunctionTree
    order: int

    def __post_init__(self):
        k = self.order
        if k < 1:
            raise CherryTreeError(f"order must be at least 1, got {k}")
        report = check_rip(self.base)
        if not report:
            raise CherryTreeError(f"not a junction tree: {report.message}", report.clusters)
        for c in self.base.clusters:
            if len(c) != k:
                raise CherryTreeError(f"cluster {c!r} has size {len(c)}, expected {k}", (c,))
        for (i, j), sep in zip(self.base.edges, self.base.separators):
            if len(sep) != k - 1:
                a, b = self.base.clusters[i], self.base.clusters[j]
                raise CherryTreeError(
                    f"separator {sep!r} between {a!r} and {b!r} has size {len(sep)}, expected {k - 1}",
                    (a, b),
                )

    @classmethod
    def from_links(cls, clusters, links, order: int | None = None) -> "CherryTree":
        jt = JunctionTree.from_links(clusters, links)
        if order is None:
            order = len(jt.clusters[0])
        return cls(jt, order)

    @property
    def clusters(self) -> tuple[VertexSet, ...]:
        return self.base.clusters

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return self.base.edges

    @property
    def separators(self) -> tuple[VertexSet, ...]:
        return self.base.separators

    @property
    def vertices(self) -> VertexSet:
        return self.base.vertices

    def links(self):
        return self.base.links()

    def incident_separators(self, i: int) -> list[VertexSet]:
        """Distinct separators on the edges touching cluster ``i``, sorted."""
        seps = {self.base.clusters[i] & self.base.clusters[j] for j in self.base.neighbors(i)}
        return sorted(seps)

    def same_structure(self, other: "CherryTree") -> bool:
        """Same cluster set and separator table (edge layout may differ)."""
        return (
            self.order == other.order
            and set(self.clusters) == set(other.clusters)
            and separator_table(self.base) == separator_table(other.base)
        )


def validate_cherry(jt: JunctionTree, k: int) -> CherryTree:
    """Return ``jt`` as an order-``k`` cherry-tree or raise :class:`CherryTreeError`."""
    return CherryTree(jt, k)


def canonicalize(ct: CherryTree) -> CherryTree:
    """Relink so every repeated separator joins its clusters through one hub.

    For each separator carried by several edges, the clusters it links are
    re-attached directly to the lexicographically smallest of them.
    """
    jt = ct.base
    by_sep: dict[VertexSet, list[tuple[int, int]]] = defaultdict(list)
    for e, sep in zip(jt.edges, jt.separators):
        by_sep[sep].append(e)
    edges = []
    for sep, group in by_sep.items():
        if len(group) == 1:
            edges.extend(group)
            continue
        members = sorted({i for e in group for i in e}, key=lambda i: jt.clusters[i])
        hub = members[0]
        edges.extend((hub, m) for m in members[1:])
    return CherryTree(JunctionTree(jt.clusters, tuple(edges), jt.vertices), ct.order)


class _DisjointSet:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


def junction_tree_exists(clusters: Sequence) -> JunctionTree | None:
    """Find a junction tree over ``clusters``, or ``None`` if there is none.

    A maximum-weight spanning tree of the complete cluster graph with
    weights ``|A & B|`` (ties broken by sorted cluster content) is a
    junction tree whenever any junction tree exists.
    """
    clusters = [_vs(c) for c in clusters]
    if not clusters:
        raise ValueError("need at least one cluster")
    n = len(clusters)
    candidates = sorted(
        combinations(range(n), 2),
        key=lambda e: (-len(clusters[e[0]] & clusters[e[1]]), clusters[e[0]], clusters[e[1]]),
    )
    ds = _DisjointSet(n)
    edges = []
    for a, b in candidates:
        if ds.union(a, b):
            edges.append((a, b))
            if len(edges) == n - 1:
                break
    jt = JunctionTree(tuple(clusters), tuple(edges))
    return jt if check_rip(jt) else None
