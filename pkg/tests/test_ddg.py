import random

import numpy as np
import pytest

from conftest import adjacency, dijkstra, piece_census, unit_grid
from planarcut.ddg import build_ddg, incise_pieces, recover_path
from planarcut.errors import Unreachable
from planarcut.harness.generators import generate, grid_graph
from planarcut.mincut import prepare
from planarcut.plane_graph import INF, PlaneGraph
from planarcut.rdivision import fast_r_division, make_piece, r_division


def by_vertex(ddg):
    b = ddg.boundary
    return {(b[i], b[j]): ddg.dist[i][j] for i in range(len(b)) for j in range(len(b))}


def walk_weight(g, darts):
    return sum(g.weight[d >> 1] for d in darts)


def block_piece(g, cols, lo, hi):
    """Edges with both ends in the square block of rows and columns ``lo..hi``."""
    inside = lambda v: lo <= v // cols <= hi and lo <= v % cols <= hi
    return [e for e in range(g.m) if inside(g.tail[2 * e]) and inside(g.tail[2 * e + 1])]


def brute_force(g, piece):
    adj = adjacency(g, piece.edges)
    out = {}
    for u in piece.boundary:
        dist, _ = dijkstra(adj, u)
        for v in piece.boundary:
            out[(u, v)] = dist.get(v, INF)
    return out


class TestBuildDDG:
    def test_single_edge(self):
        g = PlaneGraph.build([(0, 1, 4), (1, 2, 1), (2, 0, 1)], [[0, 2], [1, 0], [2, 1]])
        ddg = build_ddg(make_piece(g, [0]))
        assert sorted(ddg.boundary) == [0, 1]
        assert ddg.dist == [[0, 4], [4, 0]]

    def test_path_through_interior_vertex(self):
        # u=0, x=1, v=2; the edge u-v lies outside the piece
        g = PlaneGraph.build([(0, 1, 1), (1, 2, 2), (2, 0, 10)], [[0, 2], [1, 0], [2, 1]])
        piece = make_piece(g, [0, 1])
        ddg = build_ddg(piece)
        assert piece.boundary == {0, 2}
        d = by_vertex(ddg)
        assert d[(0, 2)] == d[(2, 0)] == 3
        i, j = ddg.position[0], ddg.position[2]
        assert list(recover_path(ddg, i, j)) == [0, 2]

    def test_adjacent_pair_uses_light_edge(self):
        g = PlaneGraph.build([(0, 1, 5), (0, 1, 2), (1, 2, 1), (2, 0, 1)],
                             [[0, 1, 3], [1, 0, 2], [2, 3]])
        ddg = build_ddg(make_piece(g, [0, 1]))
        i, j = ddg.position[0], ddg.position[1]
        assert ddg.dist[i][j] == 2
        assert list(recover_path(ddg, i, j)) == [2]

    def test_grid_block_matches_dijkstra(self):
        g = generate("grid", 36, 42).graph
        piece = make_piece(g, block_piece(g, 6, 1, 4))
        assert len(piece.boundary) == 12
        assert by_vertex(build_ddg(piece)) == brute_force(g, piece)

    def test_recovered_paths(self):
        g = generate("grid", 144, 7).graph
        piece = make_piece(g, block_piece(g, 12, 1, 10))
        ddg = build_ddg(piece)
        edges = set(piece.edges.tolist())
        rng = random.Random(0)
        b = len(ddg.boundary)
        for _ in range(100):
            i, j = rng.randrange(b), rng.randrange(b)
            darts = list(recover_path(ddg, i, j))
            assert walk_weight(g, darts) == ddg.dist[i][j]
            assert all(d >> 1 in edges for d in darts)
            verts = [ddg.boundary[i]] + [g.head(d) for d in darts]
            assert verts[-1] == ddg.boundary[j]
            assert len(set(verts)) == len(verts)
            assert all(g.tail[d] == v for d, v in zip(darts, verts))

    def test_unreachable_pair(self):
        edges = [(i, i + 1, 1) for i in range(4)]
        g = PlaneGraph.build(edges, [[0], [0, 1], [1, 2], [2, 3], [3]])
        piece = make_piece(g, [0, 3])
        ddg = build_ddg(piece)
        assert piece.boundary == {1, 3}
        i, j = ddg.position[1], ddg.position[3]
        assert ddg.dist[i][j] == INF
        with pytest.raises(Unreachable):
            recover_path(ddg, i, j)

    def test_infinite_edge_reported_as_inf(self):
        g = PlaneGraph.build([(0, 1, INF), (1, 2, 1), (2, 0, 1)], [[0, 2], [1, 0], [2, 1]])
        ddg = build_ddg(make_piece(g, [0]))
        assert ddg.dist == [[0, INF], [INF, 0]]

    @pytest.mark.parametrize("family,n,seed", [("tri-grid", 400, 1), ("random-planar", 300, 2)])
    def test_division_pieces(self, family, n, seed):
        g = generate(family, n, seed).graph
        for p in r_division(g, 36).pieces:
            assert by_vertex(build_ddg(p)) == brute_force(g, p)


@pytest.fixture(scope="module", params=[("tri-grid", 144, 0, False), ("grid", 400, 3, True),
                                        ("random-planar", 500, 1, True)])
def incised(request):
    family, n, seed, fast = request.param
    inst = generate(family, n, seed)
    setup = prepare(inst.graph, inst.s, inst.t)
    div = (fast_r_division if fast else r_division)(setup.dual, 16)
    return setup, div, incise_pieces(div, setup.sliced)


class TestIncision:
    def test_union_is_sliced_graph(self, incised):
        setup, div, inc = incised
        co = setup.sliced
        allv = np.sort(np.concatenate([p.edges for p in inc.pieces]))
        assert np.array_equal(allv, np.arange(co.graph.m))
        for old, new in zip(div.pieces, inc.pieces):
            origin = {co.edge_origin[e] for e in new.edges.tolist()}
            assert origin == set(old.edges.tolist())

    def test_untouched_pieces_unchanged(self, incised):
        setup, div, inc = incised
        on_path = set(setup.sliced.p_seq)
        untouched = 0
        for old, new in zip(div.pieces, inc.pieces):
            if on_path.isdisjoint(old.vertices.tolist()):
                untouched += 1
                assert np.array_equal(old.edges, new.edges)
                assert old.boundary == new.boundary
        assert untouched > 0

    def test_boundary_growth(self, incised):
        setup, div, inc = incised
        co = setup.sliced
        copy_of = dict(zip(co.p_seq, co.p_copy_seq))
        for old, new in zip(div.pieces, inc.pieces):
            verts = set(new.vertices.tolist())
            doubled = [v for v in old.boundary if v in copy_of and v in verts
                       and copy_of[v] in verts]
            assert len(new.boundary) == len(old.boundary) + len(doubled)

    def test_boundary_faces(self, incised):
        setup, div, inc = incised
        g = setup.sliced.graph
        for p in inc.pieces:
            boundary, faces, _ = piece_census(g, p.edges)
            assert boundary <= p.boundary
            assert faces <= 6
