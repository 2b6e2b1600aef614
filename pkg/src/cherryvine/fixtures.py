"""Worked-example structures used by ``demo`` and the test-suite.

``fig7a`` is reconstructed from its described properties: cluster
{1,2,3,4} meets its neighbours through three distinct separators, and its
neighbour {2,3,4,5} has a further neighbour of its own.
"""
from __future__ import annotations

from .structures import CherryTree, JunctionTree, VertexSet
from .vine import BaseTree, TruncatedRVine


def fig1_junction_tree() -> JunctionTree:
    return JunctionTree.from_links(
        [(1, 2, 3), (2, 3, 4), (3, 4, 5)],
        [((1, 2, 3), (2, 3, 4)), ((2, 3, 4), (3, 4, 5))],
    )


def fig1() -> CherryTree:
    return CherryTree(fig1_junction_tree(), 3)


def fig3() -> CherryTree:
    return CherryTree.from_links(
        [(1, 2, 3), (2, 3, 4), (2, 3, 6), (3, 4, 5)],
        [((1, 2, 3), (2, 3, 4)), ((2, 3, 4), (2, 3, 6)), ((2, 3, 4), (3, 4, 5))],
    )


def fig5() -> CherryTree:
    hub = (1, 2, 3, 4)
    return CherryTree.from_links(
        [(1, 2, 3, 5), (1, 3, 4, 6), hub, (1, 2, 4, 7)],
        [(hub, (1, 2, 3, 5)), (hub, (1, 3, 4, 6)), (hub, (1, 2, 4, 7))],
    )


def fig7a() -> CherryTree:
    hub = (1, 2, 3, 4)
    return CherryTree.from_links(
        [hub, (2, 3, 4, 5), (1, 3, 4, 6), (1, 2, 4, 7), (2, 3, 5, 8)],
        [(hub, (2, 3, 4, 5)), (hub, (1, 3, 4, 6)), (hub, (1, 2, 4, 7)), ((2, 3, 4, 5), (2, 3, 5, 8))],
    )


def example22() -> TruncatedRVine:
    """Six-variable vine with all five trees, clusters in enumeration order."""
    base = BaseTree(VertexSet(range(1, 7)), ((1, 2), (2, 3), (2, 6), (3, 4), (4, 5)))
    t2 = CherryTree(JunctionTree(
        (VertexSet((1, 2)), VertexSet((2, 3)), VertexSet((2, 6)), VertexSet((3, 4)), VertexSet((4, 5))),
        ((0, 1), (1, 2), (1, 3), (3, 4)),
    ), 2)
    t3 = fig3()
    t4 = CherryTree(JunctionTree(
        (VertexSet((1, 2, 3, 4)), VertexSet((2, 3, 4, 5)), VertexSet((2, 3, 4, 6))),
        ((0, 1), (1, 2)),
    ), 4)
    t5 = CherryTree(JunctionTree(
        (VertexSet((1, 2, 3, 4, 5)), VertexSet((2, 3, 4, 5, 6))),
        ((0, 1),),
    ), 5)
    return TruncatedRVine(base, (t2, t3, t4, t5))


def example22_truncated(k: int = 3) -> TruncatedRVine:
    v = example22()
    return TruncatedRVine(v.base, v.levels[: k - 1])
