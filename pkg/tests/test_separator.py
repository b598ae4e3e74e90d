from collections import deque
from fractions import Fraction

import numpy as np
import pytest

from conftest import face_walks, piece_census, unit_grid
from planarcut.errors import BadParams, Disconnected, TooManyHoles
from planarcut.plane_graph import PlaneGraph
from planarcut.rdivision import H_MAX, make_piece, split_piece_bounded_holes
from planarcut.separator import cycle_separator, separator_bound, triangulate


def k4():
    # outer triangle 0,1,2 counterclockwise with 3 in the middle
    edges = [(0, 1, 1), (1, 2, 1), (2, 0, 1), (0, 3, 1), (1, 3, 1), (2, 3, 1)]
    rot = [[0, 3, 2], [1, 4, 0], [2, 5, 1], [5, 3, 4]]
    return PlaneGraph.build(edges, rot)


def balanced(sep, n):
    return 3 * len(sep.inside) <= 2 * n and 3 * len(sep.outside) <= 2 * n


def left_side(t, cycle):
    """Vertices reached from the darts counterclockwise between a cycle's out and in darts."""
    on = set(cycle)
    seeds = []
    k = len(cycle)
    for i, v in enumerate(cycle):
        rot = t.rotation[v]
        heads = [t.head(d) for d in rot]
        out = heads.index(cycle[(i + 1) % k])
        into = heads.index(cycle[i - 1])
        j = (out + 1) % len(rot)
        while j != into:
            seeds.append(heads[j])
            j = (j + 1) % len(rot)
    seen = {u for u in seeds if u not in on}
    queue = deque(seen)
    while queue:
        v = queue.popleft()
        for d in t.rotation[v]:
            u = t.head(d)
            if u not in on and u not in seen:
                seen.add(u)
                queue.append(u)
    return seen


def bfs_tree(nbrs, root):
    parent = {root: None}
    depth = {root: 0}
    q = deque([root])
    while q:
        v = q.popleft()
        for u in nbrs[v]:
            if u not in parent:
                parent[u] = v
                depth[u] = depth[v] + 1
                q.append(u)
    return parent, depth


def fundamental_cycle(parent, depth, a, b):
    left, right = [a], [b]
    while left[-1] != right[-1]:
        if depth[left[-1]] >= depth[right[-1]]:
            left.append(parent[left[-1]])
        else:
            right.append(parent[right[-1]])
    return left + right[-2::-1]


class TestCycleSeparator:
    def test_triangle(self):
        g = PlaneGraph.build([(0, 1, 1), (1, 2, 1), (2, 0, 1)], [[0, 2], [1, 0], [2, 1]])
        sep = cycle_separator(g)
        assert sorted(sep.cycle) == [0, 1, 2]
        assert sep.inside == set() and sep.outside == set()

    def test_k4(self):
        sep = cycle_separator(k4())
        assert len(sep.cycle) == 3
        assert sorted([len(sep.inside), len(sep.outside)]) == [0, 1]
        assert balanced(sep, 4)

    def test_triangulated_grid_against_fundamental_cycles(self):
        g = unit_grid(10, 10, diagonals=True)
        t, _ = triangulate(g)
        n = g.n
        assert all(len(set(t.head(d) for d in t.rotation[v])) == t.degree(v) for v in range(n))
        sep = cycle_separator(g)
        assert len(sep.cycle) <= separator_bound(n) == 40
        assert balanced(sep, n)
        assert left_side(t, sep.cycle) in (sep.inside, sep.outside)
        # exhaustive search: the best fundamental cycle over all breadth-first roots
        nbrs = [[t.head(d) for d in t.rotation[v]] for v in range(n)]
        best = n
        for root in range(n):
            parent, depth = bfs_tree(nbrs, root)
            for e in range(t.m):
                a, b = t.tail[2 * e], t.tail[2 * e + 1]
                if parent.get(a) == b or parent.get(b) == a:
                    continue
                c = fundamental_cycle(parent, depth, a, b)
                inner = len(left_side(t, c))
                best = min(best, max(inner, n - len(c) - inner))
        ours = max(len(sep.inside), len(sep.outside))
        assert 3 * best <= 2 * n
        assert 3 * ours <= 2 * n

    def test_weighted_balance(self):
        g = unit_grid(6, 6, diagonals=True)
        w = [Fraction(0)] * g.n
        w[0] = w[35] = Fraction(1, 2)
        sep = cycle_separator(g, w)
        total = sum(w)
        for side in (sep.inside, sep.outside):
            assert 3 * sum(w[v] for v in side) <= 2 * total

    def test_errors(self):
        edges = [(0, 1, 1), (2, 3, 1)]
        with pytest.raises(Disconnected):
            cycle_separator(PlaneGraph.build(edges, [[0], [0], [1], [1]]))
        with pytest.raises(BadParams):
            cycle_separator(k4(), [1, 1])


class TestTriangulate:
    def test_triangle_unchanged(self):
        g = PlaneGraph.build([(0, 1, 1), (1, 2, 1), (2, 0, 1)], [[0, 2], [1, 0], [2, 1]])
        t, added = triangulate(g)
        assert t is g and added == set()

    def test_four_cycle_gets_one_chord_per_face(self):
        g = PlaneGraph.build([(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)],
                             [[0, 3], [1, 0], [2, 1], [3, 2]])
        t, added = triangulate(g)
        assert t.n == 4 and len(added) == 2
        for face in g.faces:
            corners = {g.tail[d] for d in face}
            inside = [e for e in added if {t.tail[2 * e], t.tail[2 * e + 1]} <= corners]
            assert len(inside) >= 1
        assert all(len(f) == 3 for f in t.faces)

    def test_grid_chord_count(self):
        g = unit_grid(3, 3)
        walks = face_walks(2 * g.m, g.tail, g.rotation)
        expected = sum(len(w) - 3 for w in walks)
        t, added = triangulate(g)
        assert len(added) == expected == 9
        assert all(len(f) == 3 for f in t.faces)
        assert t.n - t.m + t.num_faces == 2


def holed_grid(size, blocks):
    """Unit grid minus the edges strictly inside some square blocks."""
    g = unit_grid(size, size)
    vid = lambda i, j: i * size + j
    drop = set()
    for (i0, j0, k) in blocks:
        inner = {vid(i, j) for i in range(i0, i0 + k + 1) for j in range(j0, j0 + k + 1)}
        ring = {vid(i, j) for i in range(i0, i0 + k + 1) for j in range(j0, j0 + k + 1)
                if i in (i0, i0 + k) or j in (j0, j0 + k)}
        for e in range(g.m):
            a, b = g.tail[2 * e], g.tail[2 * e + 1]
            if a in inner and b in inner and not (a in ring and b in ring):
                drop.add(e)
    keep = [e for e in range(g.m) if e not in drop]
    return g, keep


class TestSplitBoundedHoles:
    def test_hole_free_piece(self):
        g = unit_grid(12, 12, diagonals=True)
        p = make_piece(g, np.arange(g.m))
        assert p.num_holes == 0
        p1, p2, p3 = split_piece_bounded_holes(p)
        assert all(x.num_holes <= 1 for x in p1 + p2)
        assert p3 == []
        edges = np.sort(np.concatenate([x.edges for x in p1 + p2]))
        assert np.array_equal(edges, np.arange(g.m))

    def test_piece_with_max_holes(self):
        blocks = [(2, 2, 3), (2, 8, 3), (2, 14, 3), (9, 2, 3), (9, 8, 3), (9, 14, 3)]
        g, keep = holed_grid(20, blocks)
        p = make_piece(g, keep)
        _, _, holes = piece_census(g, keep)
        assert p.num_holes == holes == H_MAX
        p1, p2, p3 = split_piece_bounded_holes(p, H_MAX)
        out = p1 + p2 + p3
        for x in out:
            _, _, h = piece_census(g, x.edges)
            assert h == x.num_holes <= H_MAX
        edges = np.sort(np.concatenate([x.edges for x in out]))
        assert np.array_equal(edges, np.sort(np.asarray(keep)))

    def test_too_many_holes(self):
        blocks = [(2, 2, 3), (2, 8, 3), (2, 14, 3), (9, 2, 3), (9, 8, 3), (9, 14, 3), (15, 8, 3)]
        g, keep = holed_grid(20, blocks)
        p = make_piece(g, keep)
        assert p.num_holes == 6
        with pytest.raises(TooManyHoles):
            split_piece_bounded_holes(p, H_MAX)
