"""Truncated R-vine recognition, the Backward Algorithm and the order-(k+1) embedding."""
from __future__ import annotations

import logging
from collections import defaultdict, deque
from dataclasses import dataclass
from itertools import product
from typing import Iterator

from .exceptions import BackwardFailure, CherryTreeError, CherryVineError, NotTruncatedRVineError
from .structures import (
    CherryTree,
    JunctionTree,
    VertexSet,
    canonicalize,
    junction_tree_exists,
)
from .vine import BaseTree, TruncatedRVine

__all__ = [
    "TruncationWitness",
    "is_truncated_rvine",
    "two_separator_check",
    "backward",
    "embed",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class TruncationWitness:
    """Verdict of a truncated R-vine test with its evidence.

    A positive verdict carries the order-(k-1) tree formed by the distinct
    separators; a negative one carries a cluster together with its (three or
    more) distinct incident separators. A single-cluster tree is positive
    with neither, since it has no separators at all.
    """

    verdict: bool
    separator_tree: CherryTree | None = None
    offender: VertexSet | None = None
    offender_separators: tuple[VertexSet, ...] = ()

    def __bool__(self) -> bool:
        return self.verdict


def _incident(ct: CherryTree) -> list[list[VertexSet]]:
    return [ct.incident_separators(i) for i in range(len(ct.clusters))]


def _offender(ct: CherryTree, incident) -> TruncationWitness:
    for i in sorted(range(len(ct.clusters)), key=lambda i: ct.clusters[i]):
        if len(incident[i]) >= 3:
            return TruncationWitness(False, offender=ct.clusters[i], offender_separators=tuple(incident[i]))
    return TruncationWitness(True)


def is_truncated_rvine(ct: CherryTree) -> TruncationWitness:
    """Test whether the distinct separators of ``ct`` form an order-(k-1) cherry-tree.

    The separators are taken as clusters of a candidate tree; a junction
    tree over them is searched with :func:`junction_tree_exists` and must
    then have separators of size ``k - 2``.
    """
    if len(ct.clusters) == 1:
        return TruncationWitness(True)
    seps = sorted(set(ct.separators))
    jt = junction_tree_exists(seps)
    if jt is not None:
        try:
            return TruncationWitness(True, separator_tree=CherryTree(jt, ct.order - 1))
        except CherryTreeError:
            pass
    witness = _offender(ct, _incident(ct))
    if witness.verdict:
        # no cluster with three separators although the separator tree failed
        log.warning("separator criterion failed without a three-separator cluster: %s", ct.clusters)
        return TruncationWitness(False)
    return witness


def _step1_links(ct: CherryTree, incident) -> list[tuple[VertexSet, VertexSet]]:
    return [tuple(seps) for seps in incident if len(seps) == 2]


def two_separator_check(ct: CherryTree) -> TruncationWitness:
    """Test that every cluster meets its neighbours through at most two distinct separators.

    On success the separator tree is assembled directly: two separators are
    linked when some cluster carries both.
    """
    if len(ct.clusters) == 1:
        return TruncationWitness(True)
    incident = _incident(ct)
    witness = _offender(ct, incident)
    if not witness.verdict:
        return witness
    seps = sorted(set(ct.separators))
    jt = JunctionTree.from_links(seps, _step1_links(ct, incident))
    return TruncationWitness(True, separator_tree=CherryTree(jt, ct.order - 1))


def _shrink_choices(ct: CherryTree) -> Iterator[CherryTree]:
    """Candidate order-(m-1) trees one level below ``ct``.

    Separators become clusters linked as in :func:`two_separator_check`;
    every leaf cluster (one distinct separator ``S``) loses one vertex of
    ``S``, the same vertex for all leaves hanging on ``S``, and is linked to
    ``S``. Deletion choices that would give ``S`` three distinct separators
    one level down are skipped.
    """
    m = ct.order
    if len(ct.clusters) == 1:
        (c,) = ct.clusters
        lo, hi = c.without(c.ids[-1]), c.without(c.ids[0])
        yield CherryTree(JunctionTree((lo, hi), ((0, 1),), ct.vertices), m - 1)
        return
    incident = _incident(ct)
    if any(len(s) > 2 for s in incident):
        return
    seps = sorted(set(ct.separators))
    step1 = _step1_links(ct, incident)
    sub_seps: dict[VertexSet, set[VertexSet]] = defaultdict(set)
    for a, b in step1:
        sub_seps[a].add(a & b)
        sub_seps[b].add(a & b)
    groups: dict[VertexSet, list[VertexSet]] = defaultdict(list)
    for c, s in zip(ct.clusters, incident):
        if len(s) == 1:
            groups[s[0]].append(c)
    group_keys = sorted(groups)
    options = []
    for s in group_keys:
        ok = [v for v in s if len(sub_seps[s] | {s.without(v)}) <= 2]
        if not ok:
            return
        options.append(ok)
    for choice in product(*options):
        clusters = list(seps)
        links = list(step1)
        for s, v in zip(group_keys, choice):
            for leaf in groups[s]:
                shrunk = leaf.without(v)
                clusters.append(shrunk)
                links.append((shrunk, s))
        try:
            yield CherryTree(JunctionTree.from_links(clusters, links, ct.vertices), m - 1)
        except CherryTreeError:
            continue


def _descend(ct: CherryTree) -> list[CherryTree] | None:
    if ct.order == 2:
        return [ct]
    for lower in _shrink_choices(ct):
        if lower.order >= 3 and not two_separator_check(lower).verdict:
            continue
        rest = _descend(lower)
        if rest is not None:
            return rest + [ct]
    return None


def backward(ct: CherryTree) -> TruncatedRVine:
    """Build a vine sequence whose top tree is ``ct``.

    Works down one order at a time (see :func:`_shrink_choices`), trying
    the smallest-id deletion vertex first and backtracking over the others
    when a lower level admits no further descent. Level 2 supplies the base
    tree edges.

    Raises
    ------
    NotTruncatedRVineError
        If the separators of ``ct`` do not form an order-(k-1) cherry-tree.
    BackwardFailure
        If every deletion choice dead-ends.
    """
    if ct.order < 2:
        raise CherryVineError(f"order-{ct.order} tree has no vine sequence")
    witness = is_truncated_rvine(ct)
    if not witness.verdict:
        seps = ", ".join(repr(s) for s in witness.offender_separators)
        raise NotTruncatedRVineError(
            f"not a truncated R-vine: cluster {witness.offender!r} has distinct separators {seps}", witness
        )
    levels = _descend(ct)
    if levels is None:
        raise BackwardFailure(f"no valid sequence found for order-{ct.order} tree {list(ct.clusters)}")
    base = BaseTree(ct.vertices, tuple(c.ids for c in levels[0].clusters))
    return TruncatedRVine(base, tuple(levels))


def embed(ct: CherryTree) -> CherryTree:
    """Join neighbouring clusters into an order-(k+1) cherry-tree.

    The tree is canonicalized and rooted at its highest-degree cluster
    (smallest content on ties). Each non-root cluster ``c`` with parent
    ``p`` yields ``c | p``; it is linked to ``p | parent(p)``, while the
    unions hanging on the root are linked through the first one.
    """
    if len(ct.clusters) < 2:
        raise CherryVineError("nothing to join: the tree has a single cluster")
    can = canonicalize(ct)
    cl = can.clusters
    adj = can.base.adjacency()
    root = min(range(len(cl)), key=lambda i: (-len(adj[i]), cl[i]))
    parent = {root: None}
    order = []
    queue = deque([root])
    while queue:
        node = queue.popleft()
        for child in sorted((c for c in adj[node] if c not in parent), key=lambda c: cl[c]):
            parent[child] = node
            order.append(child)
            queue.append(child)
    union = {x: cl[x] | cl[parent[x]] for x in order}
    links = []
    root_children = [x for x in order if parent[x] == root]
    for x in order:
        p = parent[x]
        if p != root:
            links.append((union[x], union[p]))
    first = root_children[0]
    links.extend((union[first], union[x]) for x in root_children[1:])
    jt = JunctionTree.from_links([union[x] for x in order], links, ct.vertices)
    return CherryTree(jt, ct.order + 1)
