import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import face_walks, piece_census, unit_grid
from planarcut.errors import Disconnected, InvalidR
from planarcut.harness.generators import FAMILIES, generate
from planarcut.plane_graph import PlaneGraph
from planarcut.rdivision import (
    C_BOUNDARY,
    C_SIZE,
    C_TOTAL_BOUNDARY,
    H_MAX,
    Subtree,
    _refine_boundary,
    contract_and_thin,
    fast_r_division,
    make_piece,
    partition_spanning_tree,
    r_division,
    weak_r_division,
)


def path_graph(n):
    edges = [(i, i + 1, 1) for i in range(n - 1)]
    rot = [[0]] + [[i - 1, i] for i in range(1, n - 1)] + [[n - 2]]
    return PlaneGraph.build(edges, rot)


def star_of_paths(arms, length):
    """A hub with ``arms`` paths of ``length`` edges, consecutive arm tips joined in a ring."""
    edges = []
    tips = []
    rot = [[]]
    for a in range(arms):
        prev = 0
        for k in range(length):
            v = len(rot)
            rot.append([])
            e = len(edges)
            edges.append((prev, v, 1))
            rot[prev].append(e)
            rot[v].append(e)
            prev = v
        tips.append(prev)
    ring = []
    for a in range(arms):
        e = len(edges)
        edges.append((tips[a], tips[(a + 1) % arms], 1))
        ring.append(e)
    # arms leave the hub counterclockwise; at a tip the ring edge to the previous arm comes first
    for a in range(arms):
        rot[tips[a]] = [rot[tips[a]][0], ring[a - 1], ring[a]]
    return PlaneGraph.build(edges, rot)


def check_division(div, g, r):
    """The invariant suite, with boundaries and holes recomputed from scratch."""
    seen = np.zeros(g.m, np.int64)
    for p in div.pieces:
        np.add.at(seen, p.edges, 1)
    assert (seen == 1).all()
    total = 0
    for p in div.pieces:
        boundary, _, holes = piece_census(g, p.edges)
        assert p.boundary == boundary
        if p.tracked_boundary is not None:
            assert p.tracked_boundary == boundary
        assert p.num_holes == holes
        assert p.num_vertices <= C_SIZE * r
        assert len(boundary) <= C_BOUNDARY * math.sqrt(r)
        assert holes <= H_MAX
        total += len(boundary)
    assert total <= C_TOTAL_BOUNDARY * g.n / math.sqrt(r)
    assert div.violations() == []


class TestDivisions:
    def test_small_graph_single_piece(self):
        g = unit_grid(3, 3)
        for build in (weak_r_division, r_division, fast_r_division):
            div = build(g, 16)
            assert len(div.pieces) == 1
            assert div.pieces[0].boundary == set() and div.pieces[0].num_holes == 0

    def test_weak_division_grid(self):
        g = unit_grid(32, 32, diagonals=True)
        div = weak_r_division(g, 64)
        seen = np.zeros(g.m, np.int64)
        for p in div.pieces:
            np.add.at(seen, p.edges, 1)
            assert p.num_vertices <= C_SIZE * 64
            assert p.num_holes <= H_MAX
        assert (seen == 1).all()
        assert div.total_boundary() <= C_TOTAL_BOUNDARY * 1024 / 8

    def test_path_pieces_are_intervals(self):
        n = 40
        g = path_graph(n)
        div = r_division(g, 4)
        count = {}
        for p in div.pieces:
            e = np.sort(p.edges)
            assert (np.diff(e) == 1).all()
            lo, hi = int(e[0]), int(e[-1]) + 1
            assert set(p.vertices.tolist()) == set(range(lo, hi + 1))
            for v in range(lo, hi + 1):
                count[v] = count.get(v, 0) + 1
        cuts = {v for v, c in count.items() if c > 1}
        assert set().union(*(p.boundary for p in div.pieces)) == cuts
        check_division(div, g, 4)

    def test_r_division_boundary_bound(self):
        g = unit_grid(64, 64, diagonals=True)
        div = r_division(g, 256)
        assert all(len(p.boundary) <= C_BOUNDARY * 16 for p in div.pieces)
        check_division(div, g, 256)

    def test_star_of_paths(self):
        g = star_of_paths(40, 50)
        assert g.n == 2001
        for build in (r_division, fast_r_division):
            check_division(build(g, 64), g, 64)

    def test_refinement_keeps_good_division(self):
        g = unit_grid(20, 20, diagonals=True)
        div = r_division(g, 64)
        before = [p.edges.copy() for p in div.pieces]
        after = _refine_boundary(list(div.pieces), 64, H_MAX, C_BOUNDARY)
        assert sorted(map(tuple, before)) == sorted(tuple(p.edges) for p in after)

    def test_fast_division_grid(self):
        g = unit_grid(100, 100, diagonals=True)
        div = fast_r_division(g, 256)
        assert div.builder == "fast"
        check_division(div, g, 256)

    def test_bad_r(self):
        g = unit_grid(3, 3)
        with pytest.raises(InvalidR):
            r_division(g, 0)
        with pytest.raises(InvalidR):
            fast_r_division(g, 2.5)

    def test_disconnected(self):
        g = PlaneGraph.build([(0, 1, 1), (2, 3, 1)], [[0], [0], [1], [1]])
        with pytest.raises(Disconnected):
            r_division(g, 1)

    @settings(max_examples=15, deadline=None)
    @given(st.sampled_from(FAMILIES), st.integers(20, 300), st.integers(0, 999),
           st.sampled_from([16, 25, 36, 64]))
    def test_both_builders_pass_invariants(self, family, n, seed, r):
        g = generate(family, n, seed).graph
        for build in (r_division, fast_r_division):
            check_division(build(g, r), g, r)


class TestSpanningTreePartition:
    def test_small(self):
        g = unit_grid(3, 3)
        parts = partition_spanning_tree(g, 20)
        assert len(parts) == 1
        assert sorted(parts[0].vertices) == list(range(9))
        assert len(parts[0].edges) == 8

    def test_path(self):
        g = path_graph(100)
        parts = partition_spanning_tree(g, 10)
        assert len(parts) == 10
        for p in parts:
            vs = sorted(p.vertices)
            assert vs == list(range(vs[0], vs[-1] + 1))
            assert len(vs) == 10

    def test_random_planar_sizes(self):
        g = generate("random-planar", 5000, 0).graph
        target = 70
        parts = partition_spanning_tree(g, target)
        cover = sorted(v for p in parts for v in p.vertices)
        assert cover == list(range(g.n))
        sizes = [len(p.vertices) for p in parts]
        assert max(sizes) <= 4 * target
        assert sum(1 for s in sizes if s < target // 4) <= 1
        assert len(parts) <= 4 * g.n / target
        for p in parts:
            assert len(p.edges) == len(p.vertices) - 1
            vs = set(p.vertices)
            assert all(g.tail[2 * e] in vs and g.tail[2 * e + 1] in vs for e in p.edges)


def thin_faces_ok(thin):
    if thin.m <= 1:
        return True
    walks = face_walks(2 * thin.m, thin.tail, thin.rotation)
    return all(len(w) >= 3 or (len(w) == 1) for w in walks)


class TestContractAndThin:
    def test_bigon(self):
        g = PlaneGraph.build([(0, 1, 1), (0, 1, 2)], [[0, 1], [1, 0]])
        ct = contract_and_thin(g, [Subtree([0], []), Subtree([1], [])])
        assert ct.thin.m == 1
        assert sorted(ct.bundles[0]) == [0, 1]

    def test_triangle_unchanged(self):
        g = PlaneGraph.build([(0, 1, 1), (1, 2, 1), (2, 0, 1)], [[0, 2], [1, 0], [2, 1]])
        ct = contract_and_thin(g, [Subtree([v], []) for v in range(3)])
        assert (ct.thin.n, ct.thin.m) == (3, 3)
        assert sorted(map(sorted, ct.bundles)) == [[0], [1], [2]]
        assert ct.subdivided.n == 6 and ct.subdivided.m == 6
        assert ct.color == ["black"] * 3 + ["white"] * 3 or set(ct.color[3:]) == {ct.color[3]}

    def test_contracted_grid(self):
        g = unit_grid(100, 100)
        parts = partition_spanning_tree(g, 10)
        ct = contract_and_thin(g, parts)
        thin = ct.thin
        assert thin_faces_ok(thin)
        assert thin.m <= 3 * thin.n
        provenance = sorted(e for b in ct.bundles for e in b)
        provenance += [e for t in ct.tree_edges for e in t]
        provenance += [e for t in ct.loop_edges for e in t]
        assert sorted(provenance) == list(range(g.m))
        assert [sorted(t) for t in ct.tree_map] == [sorted(p.vertices) for p in parts]
