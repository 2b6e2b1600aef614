from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cherryvine import (
    BackwardFailure,
    CherryTree,
    CherryVineError,
    JunctionTree,
    NotTruncatedRVineError,
    VertexSet,
    backward,
    embed,
    is_truncated_rvine,
    separator_table,
    two_separator_check,
    validate_cherry,
    validate_sequence,
)
from cherryvine.fixtures import fig1, fig3, fig5, fig7a
from cherryvine.generators import random_cherry_tree, random_vine
from cherryvine.vine import edge_labels, proximity_equiv


def vs(*xs):
    return VertexSet(xs)


def chain(order, *clusters):
    jt = JunctionTree(tuple(VertexSet(c) for c in clusters), tuple((i, i + 1) for i in range(len(clusters) - 1)))
    return CherryTree(jt, order)


# passes both recognition tests yet has no vine sequence (see test below)
STUCK = CherryTree.from_links(
    [(1, 2, 3, 4), (1, 2, 3, 5), (1, 2, 3, 6), (2, 3, 4, 7), (1, 3, 5, 8), (1, 2, 6, 9)],
    [
        ((1, 2, 3, 4), (1, 2, 3, 5)),
        ((1, 2, 3, 4), (1, 2, 3, 6)),
        ((1, 2, 3, 4), (2, 3, 4, 7)),
        ((1, 2, 3, 5), (1, 3, 5, 8)),
        ((1, 2, 3, 6), (1, 2, 6, 9)),
    ],
)


def _lower_trees(ct):
    # every order-(m-1) tree whose linked unions are exactly ct's clusters
    m, n = ct.order, len(ct.clusters)
    options = [list(itertools.combinations(itertools.combinations(c.ids, m - 1), 2)) for c in ct.clusters]
    seen = set()
    for choice in itertools.product(*options):
        nodes = sorted({VertexSet(x) for pair in choice for x in pair})
        if len(nodes) != n + 1:
            continue
        index = {x: i for i, x in enumerate(nodes)}
        edges = tuple(sorted(tuple(sorted((index[VertexSet(a)], index[VertexSet(b)]))) for a, b in choice))
        if (tuple(nodes), edges) in seen:
            continue
        seen.add((tuple(nodes), edges))
        try:
            yield CherryTree(JunctionTree(tuple(nodes), edges), m - 1)
        except CherryVineError:
            continue


def _has_sequence(ct):
    if ct.order <= 2:
        return True
    return any(_has_sequence(lower) for lower in _lower_trees(ct))


class TestRecognition:
    def test_fig3_positive_with_separator_tree(self):
        w = is_truncated_rvine(fig3())
        assert w.verdict
        assert set(w.separator_tree.clusters) == {vs(2, 3), vs(3, 4)}
        assert w.separator_tree.order == 2

    def test_fig5_negative_with_offender(self):
        w = is_truncated_rvine(fig5())
        assert not w.verdict
        assert w.offender == vs(1, 2, 3, 4)
        assert set(w.offender_separators) == {vs(1, 2, 3), vs(1, 3, 4), vs(1, 2, 4)}

    def test_chain_with_repeated_separator(self):
        assert is_truncated_rvine(chain(3, (1, 2, 3), (2, 3, 4), (2, 3, 5)))

    def test_two_separator_fixtures(self):
        w = two_separator_check(fig5())
        assert not w.verdict and w.offender == vs(1, 2, 3, 4)
        assert two_separator_check(fig3()).verdict

    def test_path_shaped(self):
        ct = chain(3, (1, 2, 3), (2, 3, 4), (3, 4, 5), (4, 5, 6))
        assert two_separator_check(ct).verdict and is_truncated_rvine(ct).verdict

    def test_single_cluster(self):
        ct = CherryTree(JunctionTree((vs(1, 2, 3),)), 3)
        w = is_truncated_rvine(ct)
        assert w.verdict and w.separator_tree is None and w.offender is None

    def test_separator_trees_agree(self):
        a, b = is_truncated_rvine(fig3()).separator_tree, two_separator_check(fig3()).separator_tree
        assert a.same_structure(b)

    @given(st.integers(0, 100_000), st.integers(2, 12), st.integers(2, 5))
    def test_criteria_agree(self, seed, d, k):
        ct = random_cherry_tree(np.random.default_rng(seed), d, min(k, d))
        a, b = is_truncated_rvine(ct), two_separator_check(ct)
        assert a.verdict == b.verdict
        if not a.verdict:
            assert a.offender == b.offender


class TestBackward:
    def test_fig3(self):
        v = backward(fig3())
        assert validate_sequence(v) and proximity_equiv(v)
        assert v.top.same_structure(fig3())
        assert set(v.levels[0].clusters) == {vs(2, 3), vs(3, 4), vs(1, 3), vs(3, 6), vs(4, 5)}
        labels = {str(x) for x in edge_labels(v)}
        assert {"c_{1,4|2,3}", "c_{4,6|2,3}", "c_{2,5|3,4}"} <= labels

    def test_order_two_gives_base_tree(self):
        ct = chain(2, (1, 2), (2, 3), (3, 4))
        v = backward(ct)
        assert set(map(frozenset, v.base.edges)) == {frozenset(e) for e in [(1, 2), (2, 3), (3, 4)]}
        assert validate_sequence(v)

    def test_single_cluster(self):
        v = backward(CherryTree(JunctionTree((vs(1, 2, 3),)), 3))
        assert validate_sequence(v) and len(v.levels) == 2

    def test_rejects_fig5(self):
        with pytest.raises(NotTruncatedRVineError) as err:
            backward(fig5())
        assert err.value.witness.offender == vs(1, 2, 3, 4)

    def test_rejects_order_one(self):
        ct = CherryTree(JunctionTree((vs(1), vs(2)), ((0, 1),)), 1)
        with pytest.raises(CherryVineError):
            backward(ct)

    def test_recognized_tree_without_sequence(self):
        assert is_truncated_rvine(STUCK).verdict and two_separator_check(STUCK).verdict
        with pytest.raises(BackwardFailure):
            backward(STUCK)

    def test_no_sequence_exists_for_stuck_tree(self):
        assert not _has_sequence(STUCK)

    def test_brute_force_finds_fig3_sequence(self):
        assert _has_sequence(fig3())

    @settings(max_examples=25)
    @given(st.integers(0, 100_000), st.integers(4, 7), st.integers(3, 4))
    def test_complete_against_brute_force(self, seed, d, k):
        ct = random_cherry_tree(np.random.default_rng(seed), d, min(k, d - 1))
        try:
            backward(ct)
            found = True
        except (NotTruncatedRVineError, BackwardFailure):
            found = False
        assert found == _has_sequence(ct)

    @given(st.integers(0, 100_000), st.integers(4, 12), st.integers(3, 5))
    def test_round_trip_from_forward_vines(self, seed, d, k):
        k = min(k, d - 1)
        top = random_vine(np.random.default_rng(seed), d, k).top
        v = backward(top)
        assert validate_sequence(v)
        assert proximity_equiv(v)
        assert v.top.same_structure(top)
        for tree in v.levels[1:]:
            assert is_truncated_rvine(tree).verdict


class TestEmbed:
    def test_fig7a(self):
        up = embed(fig7a())
        assert up.order == 5
        i = up.clusters.index(vs(1, 2, 3, 4, 5))
        seps = up.incident_separators(i)
        assert len(seps) == 2 and vs(1, 2, 3, 4) in seps
        assert is_truncated_rvine(up).verdict

    def test_fig5(self):
        up = embed(fig5())
        assert is_truncated_rvine(up).verdict
        assert up.order == 5

    def test_two_clusters(self):
        up = embed(chain(3, (1, 2, 3), (2, 3, 4)))
        assert up.clusters == (vs(1, 2, 3, 4),)
        assert is_truncated_rvine(up).verdict

    def test_single_cluster_rejected(self):
        with pytest.raises(CherryVineError):
            embed(CherryTree(JunctionTree((vs(1, 2, 3),)), 3))

    def test_deterministic(self):
        assert embed(fig1()) == embed(fig1())

    @given(st.integers(0, 100_000), st.integers(3, 12), st.integers(2, 5))
    def test_soundness(self, seed, d, k):
        ct = random_cherry_tree(np.random.default_rng(seed), d, min(k, d - 1))
        up = embed(ct)
        assert validate_cherry(up.base, ct.order + 1)
        assert is_truncated_rvine(up).verdict
        clusters = set(ct.clusters)
        assert all(s in clusters for s, _ in separator_table(up.base))
        for s in set(ct.separators):
            assert any(s.issubset(t) for t in up.separators) or len(up.clusters) == 1
