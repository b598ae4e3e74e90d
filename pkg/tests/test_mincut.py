from collections import deque

import pytest
from hypothesis import given, settings, strategies as st

from conftest import adjacency, dijkstra, unit_grid
from planarcut import INF, PlaneGraph, SeparatingCycle, Stats, cycle_to_cut, min_st_cut, reif_baseline
from planarcut.errors import EmptyGraph, NotSeparating, SameVertex
from planarcut.harness.generators import FAMILIES, generate
from planarcut.harness.oracle import maxflow_oracle
from planarcut.mincut import baseline_search, prepare
from planarcut.plane_graph import subgraph_between
from planarcut.twophase import (
    UNWIND_C,
    coarse_reif,
    expand_path,
    extract_strips,
    prepare_coarse,
    two_phase,
    unwind_paths,
)

MODES = ("baseline", "twophase")


def separates(g, cut, s, t):
    removed = set(cut.edges)
    seen = {s}
    queue = deque([s])
    while queue:
        v = queue.popleft()
        for d in g.rotation[v]:
            u = g.head(d)
            if d >> 1 not in removed and u not in seen:
                seen.add(u)
                queue.append(u)
    return t not in seen


def check_cut(g, s, t, cut):
    assert separates(g, cut, s, t)
    assert cut.weight == sum(g.weight[e] for e in cut.edges)
    assert s in cut.s_side and t not in cut.s_side


def key_distance(setup, a, b):
    g = setup.sliced.graph
    dist, _ = dijkstra(adjacency(g, weights=setup.sliced_keys), a)
    return dist.get(b)


def combined(setup, key):
    return (key[0] << setup.keys.shift) + key[1]


class TestMinCut:
    @pytest.mark.parametrize("mode", MODES)
    def test_single_edge(self, mode):
        g = PlaneGraph.build([(0, 1, 7)], [[0], [0]])
        cut = min_st_cut(g, 0, 1, mode=mode)
        assert cut.edges == [0] and cut.weight == 7

    @pytest.mark.parametrize("mode", MODES)
    def test_path(self, mode):
        g = PlaneGraph.build([(0, 1, 3), (1, 2, 5)], [[0], [0, 1], [1]])
        cut = min_st_cut(g, 0, 2, mode=mode)
        assert cut.weight == 3 and cut.edges == [0]

    @pytest.mark.parametrize("mode", MODES)
    def test_grid_matches_oracle(self, mode):
        inst = generate("grid", 16, 42)
        cut = min_st_cut(inst.graph, inst.s, inst.t, mode=mode)
        assert cut.weight == maxflow_oracle(inst.graph, inst.s, inst.t)
        check_cut(inst.graph, inst.s, inst.t, cut)

    @pytest.mark.parametrize("mode", MODES)
    def test_disconnected_terminals(self, mode):
        g = PlaneGraph.build([(0, 1, 4), (2, 3, 9)], [[0], [0], [1], [1]])
        cut = min_st_cut(g, 0, 3, mode=mode)
        assert cut.weight == 0 and cut.edges == []
        assert maxflow_oracle(g, 0, 3) == 0

    @pytest.mark.parametrize("mode", MODES)
    def test_infinite_edges(self, mode):
        g = PlaneGraph.build([(0, 1, INF), (1, 2, 4), (2, 0, 6)], [[0, 2], [1, 0], [2, 1]])
        assert min_st_cut(g, 0, 1, mode=mode).weight == INF
        cut = min_st_cut(g, 0, 2, mode=mode)
        assert cut.weight == 10 == maxflow_oracle(g, 0, 2)

    def test_errors(self):
        g = PlaneGraph.build([(0, 1, 7)], [[0], [0]])
        with pytest.raises(SameVertex):
            min_st_cut(g, 0, 0)
        with pytest.raises(EmptyGraph):
            min_st_cut(PlaneGraph.build([], [[]]), 0, 0)

    def test_division_choices_agree(self):
        inst = generate("random-planar", 600, 5)
        w = {min_st_cut(inst.graph, inst.s, inst.t, r=16, division=d).weight
             for d in ("fast", "lemma3")}
        assert w == {maxflow_oracle(inst.graph, inst.s, inst.t)}

    @settings(max_examples=40, deadline=None)
    @given(st.sampled_from(FAMILIES), st.integers(4, 120), st.integers(0, 10_000),
           st.integers(0, 3), st.sampled_from([16, 25]))
    def test_modes_oracle_and_validity(self, family, n, seed, wmin, r):
        inst = generate(family, n, seed, wmin=wmin, wmax=wmin + 6)
        g, s, t = inst.graph, inst.s, inst.t
        flow = maxflow_oracle(g, s, t)
        for mode in MODES:
            cut = min_st_cut(g, s, t, mode=mode, r=r)
            assert cut.weight == flow
            check_cut(g, s, t, cut)


class TestReifBaseline:
    def test_corner_of_unit_grid(self):
        g = unit_grid(3, 3)
        dual = g.dual()
        cyc = reif_baseline(dual, dual.face_of[g.rotation[0][0]], dual.face_of[g.rotation[8][0]])
        assert cyc.weight == 2
        assert sum(dual.weight[d >> 1] for d in cyc.darts) == 2

    @pytest.mark.parametrize("family,n,seed", [("grid", 49, 1), ("tri-grid", 64, 2),
                                               ("random-planar", 80, 3)])
    def test_minimum_over_all_indices(self, family, n, seed):
        inst = generate(family, n, seed)
        setup = prepare(inst.graph, inst.s, inst.t)
        best = min(key_distance(setup, p, q) for _, p, q in setup.terminals)
        cycle, res = baseline_search(setup)
        assert res.best_key == best
        assert cycle.weight == setup.keys.weight_of(best)
        assert all(c.key is None or c.key >= best for c in res.candidates)
        assert len(res.candidates) == len(setup.terminals)

    def test_cycle_is_closed(self):
        inst = generate("tri-grid", 100, 4)
        setup = prepare(inst.graph, inst.s, inst.t)
        cycle, _ = baseline_search(setup)
        dual = setup.dual
        darts = cycle.darts
        assert all(dual.head(a) == dual.tail[b] for a, b in zip(darts, darts[1:] + darts[:1]))
        assert cycle.weight == sum(dual.weight[d >> 1] for d in darts)


class TestCycleToCut:
    def test_self_loop(self):
        g = PlaneGraph.build([(0, 1, 7)], [[0], [0]])
        cut = cycle_to_cut(SeparatingCycle([0], 7, 0), g, 0, 1)
        assert cut.edges == [0] and cut.s_side == [0] and cut.weight == 7

    def test_grid_corner(self):
        g = unit_grid(3, 3)
        corner = [d >> 1 for d in g.rotation[0]]
        cut = cycle_to_cut(SeparatingCycle([2 * e for e in corner], 2, 0), g, 0, 8)
        assert sorted(cut.edges) == sorted(corner)
        assert cut.s_side == [0] and cut.weight == 2

    def test_not_separating(self):
        g = unit_grid(3, 3)
        e = g.rotation[0][0] >> 1
        with pytest.raises(NotSeparating):
            cycle_to_cut(SeparatingCycle([2 * e], 1, 0), g, 0, 8)


@pytest.fixture(scope="module", params=[("grid", 400, 0), ("tri-grid", 900, 1),
                                        ("random-planar", 1200, 2)])
def coarse(request):
    family, n, seed = request.param
    inst = generate(family, n, seed)
    setup = prepare(inst.graph, inst.s, inst.t)
    cs = prepare_coarse(setup, 16)
    return setup, cs, coarse_reif(cs)


class TestCoarsePhase:
    def test_no_terminals(self, coarse):
        setup, cs, _ = coarse
        cs0 = prepare_coarse(setup, 16)
        cs0.terms = []
        assert coarse_reif(cs0) == []

    def test_single_terminal(self, coarse):
        setup, cs, _ = coarse
        cs1 = prepare_coarse(setup, 16)
        cs1.terms = cs.terms[len(cs.terms) // 2:][:1]
        out = coarse_reif(cs1)
        assert len(out) == 1
        _, p, q = cs1.terms[0]
        assert combined(setup, out[0].path.key) == key_distance(setup, p, q)

    def test_weights_are_global_distances(self, coarse):
        setup, cs, paths = coarse
        assert len(paths) == len(cs.terms) > 1
        by_index = {t[0]: t for t in cs.terms}
        for cp in paths:
            _, p, q = by_index[cp.index]
            assert combined(setup, cp.path.key) == key_distance(setup, p, q)
            darts = expand_path(cs.ddgs, cp.path, cp.supers)
            g = setup.sliced.graph
            assert g.tail[darts[0]] == p and g.head(darts[-1]) == q
            assert sum(setup.sliced_keys[d >> 1] for d in darts) == combined(setup, cp.path.key)

    def test_unwinding_single_path(self, coarse):
        setup, cs, paths = coarse
        cp = paths[0]
        plain = expand_path(cs.ddgs, cp.path, cp.supers)
        un = unwind_paths([cp], cs.ddgs)
        assert un.darts == [plain] and un.steps == len(plain) and un.fallbacks == 0

    def test_unwinding_repeated_path(self, coarse):
        setup, cs, paths = coarse
        cp = paths[0]
        un = unwind_paths([cp, cp], cs.ddgs)
        assert un.darts[0] == un.darts[1]
        assert un.steps == len(un.darts[0])

    def test_unwinding_matches_plain_expansion(self, coarse):
        setup, cs, paths = coarse
        order = sorted(paths, key=lambda c: c.index)
        un = unwind_paths(order, cs.ddgs)
        assert un.steps <= UNWIND_C * setup.sliced.graph.n
        keys = setup.sliced_keys
        for cp, darts in zip(order, un.darts):
            assert sum(keys[d >> 1] for d in darts) == combined(setup, cp.path.key)
            plain = expand_path(cs.ddgs, cp.path, cp.supers)
            assert darts == plain

    def test_strips(self, coarse):
        setup, cs, paths = coarse
        co = setup.sliced
        g = co.graph
        order = sorted(paths, key=lambda c: c.index)
        un = unwind_paths(order, cs.ddgs)
        strips = extract_strips(co, setup.terminals, [c.index for c in order], un.darts)
        assert len(strips) == len(order) + 1
        covered = set().union(*(s.vertices for s in strips))
        assert covered == set(range(g.n))
        coarse_idx = {c.index for c in order}
        inner = sorted(t[0] for s in strips for t in s.terms)
        assert inner == [i for i in range(len(co.p_seq)) if i not in coarse_idx]
        for a, b in zip(strips, strips[1:]):
            path = a.right
            verts = {g.tail[path[0]]} | {g.head(d) for d in path} if path else set()
            assert verts <= a.vertices & b.vertices

    def test_strip_edges_cover_graph_once_plus_paths(self, coarse):
        setup, cs, paths = coarse
        co = setup.sliced
        order = sorted(paths, key=lambda c: c.index)
        un = unwind_paths(order, cs.ddgs)
        bounds = [d for d in un.darts if d]
        sides = [[]] + bounds + [[]]
        count = {}
        for left, right in zip(sides, sides[1:]):
            for e in subgraph_between(co, left, right).edges:
                count[e] = count.get(e, 0) + 1
        on_paths = {d >> 1 for d in sum(bounds, [])}
        assert set(count) == set(range(co.graph.m))
        assert {e for e, c in count.items() if c > 1} <= on_paths
        assert all(c == 1 for e, c in count.items() if e not in on_paths)


class TestTwoPhase:
    def test_no_coarse_terminals_is_baseline(self):
        inst = generate("grid", 100, 8)
        setup = prepare(inst.graph, inst.s, inst.t)
        stats = Stats()
        cyc = two_phase(setup, setup.dual.n + 1, stats)
        assert stats.coarse_indices == 0
        base = reif_baseline(setup.dual, setup.s, setup.t)
        assert cyc.weight == base.weight
        assert sorted(cyc.darts) == sorted(base.darts)

    @pytest.mark.parametrize("family,n,seed", [("grid", 2500, 1), ("tri-grid", 3000, 2),
                                               ("random-planar", 3000, 3)])
    def test_counters(self, family, n, seed):
        inst = generate(family, n, seed)
        stats = Stats()
        cut = min_st_cut(inst.graph, inst.s, inst.t, r=16, stats=stats)
        base = min_st_cut(inst.graph, inst.s, inst.t, mode="baseline")
        assert cut.weight == base.weight
        assert stats.coarse_indices > 0
        assert stats.unwind_steps <= UNWIND_C * (inst.graph.dual().n + stats.path_length)
        assert stats.candidates >= stats.path_length
        assert set(stats.timings) >= {"division", "coarse", "refined", "total"}
