"""Minimum s-t cuts of plane graphs through separating cycles of the dual.

The dual is sliced open along a shortest path ``P`` from a vertex of face
``s`` to a vertex of face ``t``.  For every path index ``i`` the shortest
path from ``p_i`` to its copy closes into a cycle around ``s``; the lightest
such cycle is a minimum cut.  ``baseline`` mode runs Reif's recursion over
the whole sliced dual.  ``twophase`` mode first runs the recursion only at
path vertices that are boundary vertices of an r-division, using dense
distance graphs, then solves the strips between those paths separately.
"""
from __future__ import annotations

import math
import time
from collections import deque
from dataclasses import dataclass, field

from .errors import BadParams, EmptyGraph, NotSeparating, SameVertex
from .plane_graph import INF, CutOpenGraph, PlaneGraph, connect_components, cut_open
from .reif import (
    KeyScheme,
    ReifResult,
    SegmentStore,
    compress,
    perturbed_keys,
    reif,
    shortest_path,
    work_graph,
)


@dataclass
class Cut:
    edges: list[int]
    weight: object
    s_side: list[int]


@dataclass
class SeparatingCycle:
    darts: list[int]
    weight: object
    anchor: int


@dataclass
class Stats:
    """Instrumentation gathered by one solve."""

    mode: str = ""
    r: int = 0
    path_length: int = 0
    candidates: int = 0
    coarse_indices: int = 0
    strip_total: int = 0
    unwind_steps: int = 0
    super_edges: int = 0
    timings: dict = field(default_factory=dict)


@dataclass
class DualSetup:
    """Everything derived from the input before any candidate search."""

    graph: PlaneGraph
    dual: PlaneGraph
    keys: KeyScheme
    s: int
    t: int
    path: list[int]
    sliced: CutOpenGraph
    sliced_keys: list[int]
    store: SegmentStore = None

    @property
    def terminals(self):
        co = self.sliced
        return [(i, p, q) for i, (p, q) in enumerate(zip(co.p_seq, co.p_copy_seq))]


def default_r(n: int) -> int:
    return max(16, math.ceil(math.log2(max(n, 2))) ** 2)


def prepare(g: PlaneGraph, s: int, t: int, seed: int = 0) -> DualSetup:
    """Dual, shortest face-to-face path and the sliced dual."""
    if g.n < 2 or g.m == 0:
        raise EmptyGraph("graph needs at least two vertices and one edge")
    if s == t:
        raise SameVertex("s and t must differ")
    g, _ = connect_components(g)
    dual = g.dual()
    # the dual face of a primal vertex is the orbit of its rotation darts
    setup = prepare_dual(dual, dual.face_of[g.rotation[s][0]], dual.face_of[g.rotation[t][0]], seed)
    setup.graph = g
    setup.s, setup.t = s, t
    return setup


def prepare_dual(dual: PlaneGraph, s_face: int, t_face: int, seed: int = 0) -> DualSetup:
    """Shortest path between the lowest-id vertices of two dual faces, and the slicing along it."""
    keys = perturbed_keys(dual.weight, seed)
    corners = []
    for f in (s_face, t_face):
        walk = dual.faces[f]
        low = min(dual.tail[d] for d in walk)
        corners.append(next(d for d in walk if dual.tail[d] == low))
    p1, pk = dual.tail[corners[0]], dual.tail[corners[1]]
    adj = work_graph(dual, keys.keys)
    _, steps = shortest_path(adj, p1, pk)
    path = []
    for v, i in steps:
        ref = adj[v][i][2]
        path.append(2 * ref if ref >= 0 else 2 * ~ref + 1)
    sliced = cut_open(dual, path, start=p1, start_corner=corners[0], end_corner=corners[1])
    sliced_keys = [keys.keys[e] for e in sliced.edge_origin]
    setup = DualSetup(None, dual, keys, s_face, t_face, path, sliced, sliced_keys)
    setup.store = SegmentStore(sliced.graph.m)
    return setup


def sliced_to_dual_dart(setup: DualSetup, d: int) -> int:
    co = setup.sliced
    e = d >> 1
    orig = co.edge_origin[e]
    if e < setup.dual.m:
        return d
    i = e - setup.dual.m
    return co.path_darts[i] ^ (d & 1)


def baseline_search(setup: DualSetup) -> tuple[SeparatingCycle, ReifResult]:
    """Reif's recursion over every index of the path."""
    adj = work_graph(setup.sliced.graph, setup.sliced_keys)
    terms = setup.terminals
    compress(adj, {x for t in terms for x in t[1:]}, setup.store)
    res = reif(adj, terms, setup.store)
    return _cycle_from(setup, res.best_key, res.best_index, res.best_refs), res


def reif_baseline(dual: PlaneGraph, s_face: int, t_face: int, seed: int = 0) -> SeparatingCycle:
    """Lightest cycle of ``dual`` separating faces ``s_face`` and ``t_face``."""
    return baseline_search(prepare_dual(dual, s_face, t_face, seed))[0]


def _cycle_from(setup: DualSetup, key, index, refs) -> SeparatingCycle:
    darts = []
    for ref in refs:
        darts += setup.store.darts(ref)
    dual_darts = [sliced_to_dual_dart(setup, d) for d in darts]
    return SeparatingCycle(dual_darts, setup.keys.weight_of(key), index)


def cycle_to_cut(cycle: SeparatingCycle, g: PlaneGraph, s: int, t: int) -> Cut:
    """Primal cut induced by a separating dual cycle."""
    blocked = {d >> 1 for d in cycle.darts}
    side = [False] * g.n
    side[s] = True
    queue = deque([s])
    while queue:
        v = queue.popleft()
        for d in g.rotation[v]:
            u = g.tail[d ^ 1]
            if not side[u] and (d >> 1) not in blocked:
                side[u] = True
                queue.append(u)
    if side[t]:
        raise NotSeparating("cycle does not separate s from t")
    edges = [e for e in range(g.m) if side[g.tail[2 * e]] != side[g.tail[2 * e + 1]]]
    weight = sum(g.weight[e] for e in edges)
    if weight > cycle.weight:
        raise NotSeparating("cut is heavier than its cycle")
    return Cut(edges, weight, [v for v in range(g.n) if side[v]])


def min_st_cut(g: PlaneGraph, s: int, t: int, mode: str = "twophase", r: int | None = None,
               seed: int = 0, stats: Stats | None = None, division: str = "fast") -> Cut:
    """Minimum s-t cut of ``g``; both modes return the same weight.

    ``division`` picks the r-division builder of the two-phase mode:
    ``"fast"`` (contraction based) or ``"lemma3"`` (separator based).
    """
    if division not in ("fast", "lemma3"):
        raise BadParams(f"unknown division builder {division!r}")
    stats = stats if stats is not None else Stats()
    stats.mode = mode
    t0 = time.perf_counter()
    setup = prepare(g, s, t, seed)
    stats.path_length = len(setup.sliced.p_seq)
    stats.timings["prepare"] = time.perf_counter() - t0
    if mode == "baseline":
        cycle, res = baseline_search(setup)
        stats.candidates = len(res.candidates)
    elif mode == "twophase":
        from .twophase import two_phase
        cycle = two_phase(setup, r if r is not None else default_r(setup.dual.n), stats,
                          fast=(division == "fast"))
    else:
        raise BadParams(f"unknown mode {mode!r}")
    t1 = time.perf_counter()
    cut = cycle_to_cut(cycle, setup.graph, s, t)
    cut.edges = [e for e in cut.edges if e < g.m]
    stats.timings["total"] = time.perf_counter() - t0
    stats.timings["cut"] = time.perf_counter() - t1
    return cut
