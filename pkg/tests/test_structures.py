from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cherryvine import (
    CherryTree,
    CherryTreeError,
    JunctionTree,
    StructureError,
    VertexSet,
    canonicalize,
    check_rip,
    junction_tree_exists,
    separator_table,
    validate_cherry,
)
from cherryvine.fixtures import fig1_junction_tree, fig3, fig5
from cherryvine.generators import random_cherry_tree, random_junction_tree
from cherryvine.structures import tree_path


def vs(*xs):
    return VertexSet(xs)


def chain(*clusters):
    return JunctionTree(tuple(VertexSet(c) for c in clusters), tuple((i, i + 1) for i in range(len(clusters) - 1)))


class TestVertexSet:
    def test_canonical_order_and_dedup(self):
        assert VertexSet([3, 1, 2, 3]).ids == (1, 2, 3)
        assert VertexSet([3, 1]) == VertexSet([1, 3])

    def test_set_operations_stay_canonical(self):
        a, b = vs(1, 2, 3), vs(2, 3, 4)
        assert (a | b).ids == (1, 2, 3, 4)
        assert (a & b).ids == (2, 3)
        assert (a - b).ids == (1,)
        assert (a ^ b).ids == (1, 4)

    def test_repr_and_label(self):
        assert repr(vs(3, 1, 2)) == "{1,2,3}"
        assert vs(2, 3).label() == "2,3"
        assert repr(VertexSet()) == "{}"

    def test_lexicographic_order(self):
        assert sorted([vs(2, 3), vs(1, 4), vs(1, 2, 3)]) == [vs(1, 2, 3), vs(1, 4), vs(2, 3)]

    @given(st.sets(st.integers(1, 20)), st.sets(st.integers(1, 20)))
    def test_matches_builtin_sets(self, a, b):
        A, B = VertexSet(a), VertexSet(b)
        assert set(A | B) == a | b
        assert set(A & B) == a & b
        assert set(A - B) == a - b
        assert set(A ^ B) == a ^ b
        assert list(A | B) == sorted(a | b)
        assert A.issubset(B) == (a <= b)


class TestCheckRip:
    def test_fig1_chain_is_junction_tree(self):
        assert check_rip(fig1_junction_tree())

    def test_disjoint_pair_passes_rip(self):
        # an empty intersection is contained in every path cluster
        assert check_rip(chain((1, 2), (3, 4)))

    def test_subset_violates_antichain(self):
        rep = check_rip(chain((1, 2, 3), (1, 2)))
        assert not rep
        assert set(rep.clusters) == {vs(1, 2), vs(1, 2, 3)}

    def test_fig5_star_is_junction_tree(self):
        assert check_rip(fig5().base)

    def test_rip_failure_names_pair_and_path_cluster(self):
        rep = check_rip(chain((1, 2), (2, 3), (3, 1)))
        assert not rep
        assert rep.clusters == (vs(1, 2), vs(1, 3), vs(2, 3))

    def test_disconnected(self):
        jt = JunctionTree((vs(1, 2), vs(2, 3), vs(3, 4)), ((0, 1), (0, 1)))
        assert not check_rip(jt)

    def test_wrong_edge_count(self):
        jt = JunctionTree((vs(1, 2), vs(2, 3), vs(3, 4)), ((0, 1),))
        assert "edges" in check_rip(jt).message

    def test_uncovered_vertex(self):
        jt = JunctionTree((vs(1, 2), vs(2, 3)), ((0, 1),), vs(1, 2, 3, 4))
        assert "vertex set" in check_rip(jt).message

    def test_bad_indices_raise(self):
        with pytest.raises(StructureError):
            check_rip(JunctionTree((vs(1, 2),), ((0, 1),)))
        with pytest.raises(StructureError):
            check_rip(JunctionTree((vs(1, 2), vs(2, 3)), ((1, 1),)))
        with pytest.raises(StructureError):
            check_rip(JunctionTree(()))

    @given(st.integers(0, 10_000), st.integers(1, 9))
    def test_random_junction_trees_satisfy_rip_brute_force(self, seed, d):
        jt = random_junction_tree(np.random.default_rng(seed), d, 4)
        assert check_rip(jt)
        adj = jt.adjacency()
        for i, j in itertools.combinations(range(len(jt.clusters)), 2):
            common = jt.clusters[i] & jt.clusters[j]
            assert all(common.issubset(jt.clusters[c]) for c in tree_path(adj, i, j))


class TestSeparatorTable:
    def test_fig1(self):
        assert separator_table(fig1_junction_tree()).as_dict() == {vs(2, 3): 2, vs(3, 4): 2}

    def test_single_cluster(self):
        assert len(separator_table(JunctionTree((vs(1, 2, 3),)))) == 0

    def test_fig3_counts_three_clusters_on_23(self):
        table = separator_table(fig3().base)
        assert table.as_dict() == {vs(2, 3): 3, vs(3, 4): 2}
        assert table.multiplicity((2, 3)) == 3
        assert table.multiplicity((1, 2)) == 0

    @given(st.integers(0, 10_000), st.integers(2, 10), st.integers(1, 5))
    def test_multiplicity_identity(self, seed, d, k):
        ct = random_cherry_tree(np.random.default_rng(seed), d, min(k, d))
        table = separator_table(ct.base)
        assert sum(nu - 1 for _, nu in table) == len(ct.clusters) - 1


class TestValidateCherry:
    def test_fig3_and_fig1(self):
        assert validate_cherry(fig3().base, 3).order == 3
        assert validate_cherry(fig1_junction_tree(), 3).order == 3

    def test_short_separator(self):
        with pytest.raises(CherryTreeError):
            validate_cherry(chain((1, 2, 3), (3, 4, 5)), 3)

    def test_wrong_cluster_size(self):
        with pytest.raises(CherryTreeError) as err:
            validate_cherry(chain((1, 2, 3), (2, 3, 4, 5)), 3)
        assert err.value.offenders

    def test_disjoint_pair_rejected(self):
        with pytest.raises(CherryTreeError):
            validate_cherry(chain((1, 2), (3, 4)), 2)

    def test_rip_failure_is_cherry_error(self):
        with pytest.raises(CherryTreeError):
            validate_cherry(chain((1, 2), (2, 3), (3, 1)), 2)


class TestCanonicalize:
    def test_chain_with_repeated_separator_becomes_star(self):
        ct = CherryTree(chain((1, 2, 3), (2, 3, 4), (2, 3, 6)), 3)
        can = canonicalize(ct)
        hub = vs(1, 2, 3)
        assert set(map(frozenset, can.links())) == {frozenset({hub, vs(2, 3, 4)}), frozenset({hub, vs(2, 3, 6)})}
        assert separator_table(can.base) == separator_table(ct.base)

    def test_distinct_separators_identity(self):
        ct = CherryTree(fig1_junction_tree(), 3)
        assert canonicalize(ct).same_structure(ct)
        assert set(map(frozenset, canonicalize(ct).links())) == set(map(frozenset, ct.links()))

    def test_fig3_hub_is_smallest_cluster_on_23(self):
        can = canonicalize(fig3())
        hub = vs(1, 2, 3)
        on_23 = [set(link) for link in can.links() if link[0] & link[1] == vs(2, 3)]
        assert all(hub in link for link in on_23)

    @given(st.integers(0, 10_000), st.integers(3, 10), st.integers(2, 5))
    def test_idempotent_and_structure_preserving(self, seed, d, k):
        ct = random_cherry_tree(np.random.default_rng(seed), d, min(k, d - 1))
        once = canonicalize(ct)
        assert once.same_structure(ct)
        twice = canonicalize(once)
        assert set(map(frozenset, twice.links())) == set(map(frozenset, once.links()))


def _spanning_trees(n):
    # Pruefer sequences enumerate all labelled trees on n nodes
    if n == 1:
        yield ()
        return
    if n == 2:
        yield ((0, 1),)
        return
    for seq in itertools.product(range(n), repeat=n - 2):
        degree = [1] * n
        for x in seq:
            degree[x] += 1
        edges = []
        for x in seq:
            leaf = min(i for i in range(n) if degree[i] == 1)
            edges.append((leaf, x))
            degree[leaf] -= 1
            degree[x] -= 1
        u, v = [i for i in range(n) if degree[i] == 1]
        edges.append((u, v))
        yield tuple(edges)


def _exists_by_enumeration(clusters):
    return any(check_rip(JunctionTree(tuple(clusters), e)) for e in _spanning_trees(len(clusters)))


class TestJunctionTreeExists:
    def test_fig1_clusters(self):
        jt = junction_tree_exists([vs(3, 4, 5), vs(1, 2, 3), vs(2, 3, 4)])
        assert jt is not None and check_rip(jt)

    def test_triangle_of_pairs_absent(self):
        assert junction_tree_exists([vs(1, 2, 3), vs(1, 3, 4), vs(1, 2, 4)]) is None

    def test_single_cluster(self):
        jt = junction_tree_exists([vs(1, 2)])
        assert jt is not None and jt.edges == ()

    def test_empty_input(self):
        with pytest.raises(ValueError):
            junction_tree_exists([])

    def test_pruefer_enumeration_counts(self):
        assert sum(1 for _ in _spanning_trees(4)) == 16
        assert sum(1 for _ in _spanning_trees(5)) == 125

    @given(
        st.lists(st.frozensets(st.integers(1, 6), min_size=1, max_size=4), min_size=1, max_size=6, unique=True)
    )
    def test_agrees_with_exhaustive_enumeration(self, sets):
        clusters = [VertexSet(s) for s in sets]
        found = junction_tree_exists(clusters)
        if found is not None:
            assert check_rip(found)
            assert set(found.clusters) == set(clusters)
        assert (found is not None) == _exists_by_enumeration(clusters)
