"""The two-phase search for the lightest separating cycle.

Coarse phase: Reif's recursion restricted to the path vertices that are
boundary vertices of an r-division, with shortest paths computed over dense
distance graphs.  The coarse paths are then expanded into explicit paths,
reusing earlier expansions wherever a path meets an already expanded one.
Refined phase: the strips between consecutive coarse paths are solved with
the ordinary recursion.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .boundary_sp import (
    ActiveScope,
    ImplicitPath,
    SuperEdge,
    eliminate_degree2,
    expand,
    reverse,
    shortest_path,
)
from .ddg import DDGSet, incise_pieces, scheme_keys
from .errors import Unreachable, VisitAccountingOverflow
from .plane_graph import CutOpenGraph, PlaneGraph, side_darts, subgraph_between
from .rdivision import Division, fast_r_division, make_piece, r_division
from .reif import ReifResult, compress, reif, work_graph

UNWIND_C = 4
STRIP_C = 4


@dataclass
class CoarsePath:
    index: int
    path: ImplicitPath | None
    supers: list[SuperEdge] = field(default_factory=list)


@dataclass
class Strip:
    """Part of the sliced dual between two consecutive coarse paths.

    ``terms`` are the ``(index, p, p_copy)`` triples strictly between the
    bounding paths; ``left`` and ``right`` are those paths as dart lists
    (``None`` at the two ends of the path).
    """

    vertices: frozenset
    terms: list
    left: list | None
    right: list | None


@dataclass
class CoarseSetup:
    division: Division
    incised: Division
    ddgs: DDGSet
    terms: list


def _dual_division(dual: PlaneGraph, r: int, fast: bool) -> Division:
    if dual.n <= r:
        return Division([make_piece(dual, np.arange(dual.m))], r, dual, builder="whole")
    return fast_r_division(dual, r) if fast else r_division(dual, r)


def prepare_coarse(setup, r: int, fast: bool = True) -> CoarseSetup:
    """Division of the dual, its incision along the path, and the dense distance graphs."""
    co = setup.sliced
    div = _dual_division(setup.dual, r, fast)
    inc = incise_pieces(div, co)
    kw, kn = scheme_keys(setup.sliced_keys, setup.keys.shift)
    ddgs = DDGSet(co.graph, inc.pieces, kw, kn)
    on_boundary = set()
    for p in div.pieces:
        on_boundary |= p.boundary
    terms = [t for t in setup.terminals if co.p_seq[t[0]] in on_boundary]
    return CoarseSetup(div, inc, ddgs, terms)


# ---------------------------------------------------------------------------
# coarse recursion
# ---------------------------------------------------------------------------

def expand_path(ddgs: DDGSet, path: ImplicitPath, supers: list[SuperEdge]) -> list[int]:
    darts = []
    for seg in path.segments:
        darts.extend(expand(ddgs, supers, seg))
    return darts


def split_region(g: PlaneGraph, region: np.ndarray, qverts: list[int], qdarts: list[int],
                 before: list, after: list) -> tuple[np.ndarray, np.ndarray]:
    """Left and right parts of ``region`` (a 0/1 vertex mask) on either side of a path.

    Both parts contain the path.  Vertices attached to neither side follow
    the terminals in ``before`` (left) or ``after`` (right); whatever is still
    unplaced goes to both parts.
    """
    ga = g.arrays()
    blocked = np.zeros(g.n, np.uint8)
    blocked[qverts] = 1
    right_d, left_d = side_darts(g, qverts, qdarts)
    tail = g.tail
    rseeds = np.array([tail[d ^ 1] for d in right_d], np.int64)
    lseeds = np.array([tail[d ^ 1] for d in left_d], np.int64)
    right = _kernels.flood(ga.rot_ptr, ga.rot_darts, ga.tail, region, blocked, rseeds)
    left = _kernels.flood(ga.rot_ptr, ga.rot_darts, ga.tail, region, blocked, lseeds)
    rest = region & ~(right | left | blocked)
    if rest.any():
        free = blocked | right | left
        lx = np.array([x for t in before for x in t[1:]], np.int64)
        rx = np.array([x for t in after for x in t[1:]], np.int64)
        left |= _kernels.flood(ga.rot_ptr, ga.rot_darts, ga.tail, rest, free, lx)
        right |= _kernels.flood(ga.rot_ptr, ga.rot_darts, ga.tail, rest, free, rx)
        rest = region & ~(right | left | blocked)
        left |= rest
        right |= rest
    left |= blocked
    right |= blocked
    return left & region, right & region


def coarse_reif(cs: CoarseSetup, stats=None) -> list[CoarsePath]:
    """Reif's recursion over the coarse terminals, one union-graph search per terminal.

    Returns the paths in the order the recursion computes them.  Each
    search sees the boundary vertices of its subgraph, after degree-two
    vertices other than terminals have been replaced by super edges.
    """
    ddgs = cs.ddgs
    g = ddgs.graph
    bmask = np.zeros(g.n, np.uint8)
    bmask[ddgs.bverts] = 1
    out: list[CoarsePath] = []
    super_count = 0
    stack = [(np.ones(g.n, np.uint8), cs.terms)]
    while stack:
        region, ts = stack.pop()
        if not ts:
            continue
        mid = (len(ts) + 1) // 2 - 1
        index, p, pc = ts[mid]
        scope = ActiveScope(g.n, np.flatnonzero(region & bmask))
        supers: list[SuperEdge] = []
        eliminate_degree2(scope, ddgs, supers, keep={x for t in ts for x in t[1:]})
        super_count += len(supers)
        try:
            path = shortest_path(ddgs, supers, scope, p, pc)
        except Unreachable:
            path = None
        out.append(CoarsePath(index, path, supers))
        if len(ts) == 1:
            continue
        if path is None:
            left = right = region
        else:
            darts = expand_path(ddgs, path, supers)
            verts = [p] + [g.tail[d ^ 1] for d in darts]
            left, right = split_region(g, region, verts, darts, ts[:mid], ts[mid + 1:])
        del region
        stack.append((right, ts[mid + 1:]))
        stack.append((left, ts[:mid]))
    if stats is not None:
        stats.super_edges = super_count
    return out


# ---------------------------------------------------------------------------
# unwinding
# ---------------------------------------------------------------------------

@dataclass
class Unwound:
    darts: list[list[int] | None]
    steps: int
    fallbacks: int


def _walk_until(ddgs, supers, segments, start, owner, tail, steps):
    """Expand ``segments`` from ``start`` until a vertex in ``owner`` is reached.

    Returns ``(darts, hit, steps)`` where ``hit`` is the vertex reached or ``None``.
    """
    darts = []
    if start in owner:
        return darts, start, steps
    for seg in segments:
        for d in expand(ddgs, supers, seg):
            steps += 1
            darts.append(d)
            x = tail[d ^ 1]
            if x in owner:
                return darts, x, steps
    return darts, None, steps


def unwind_paths(paths: list[CoarsePath], ddgs: DDGSet, limit_c: float = UNWIND_C) -> Unwound:
    """Explicit dart lists of coarse paths ordered along the path ``P``.

    Each path is expanded from its start until it meets a vertex of an
    already expanded path, then from its end backwards likewise; the part in
    between is copied from an earlier path that holds both meeting vertices.
    Unique shortest paths make that copy exact.  ``steps`` counts the darts
    produced by expansion; more than ``limit_c`` times the vertex count means
    the paths were not laid out as assumed.
    """
    g = ddgs.graph
    tail = g.tail
    owner: dict[int, int] = {}
    positions: list[dict[int, int] | None] = []
    result: list[list[int] | None] = []
    steps = 0
    fallbacks = 0
    limit = limit_c * g.n
    for cp in paths:
        path = cp.path
        if path is None:
            result.append(None)
            positions.append(None)
            continue
        fwd, v1, steps = _walk_until(ddgs, cp.supers, path.segments, path.src, owner, tail, steps)
        if v1 is None:
            darts = fwd
        else:
            back_segs = [reverse(s) for s in reversed(path.segments)]
            bwd, v2, steps = _walk_until(ddgs, cp.supers, back_segs, path.dst, owner, tail, steps)
            middle = _shared(result, positions, owner, v1, v2)
            if middle is None:
                fallbacks += 1
                darts = []
                for seg in path.segments:
                    for d in expand(ddgs, cp.supers, seg):
                        steps += 1
                        darts.append(d)
            else:
                darts = fwd + middle + [d ^ 1 for d in reversed(bwd)]
        if steps > limit:
            raise VisitAccountingOverflow(f"unwinding used {steps} steps for {g.n} vertices")
        idx = len(result)
        pos = {path.src: 0}
        for k, d in enumerate(darts):
            pos[tail[d ^ 1]] = k + 1
        for v in pos:
            owner.setdefault(v, idx)
        result.append(darts)
        positions.append(pos)
    return Unwound(result, steps, fallbacks)


def _shared(result, positions, owner, v1, v2):
    """Darts from ``v1`` to ``v2`` along an expanded path holding both, or ``None``."""
    if v1 == v2:
        return []
    for idx in (owner[v1], owner[v2]):
        pos = positions[idx]
        a, b = pos.get(v1), pos.get(v2)
        if a is None or b is None:
            continue
        darts = result[idx]
        if a <= b:
            return darts[a:b]
        return [d ^ 1 for d in reversed(darts[b:a])]
    return None


# ---------------------------------------------------------------------------
# strips and the refined phase
# ---------------------------------------------------------------------------

def extract_strips(co: CutOpenGraph, terms: list, coarse_index: list[int],
                   darts: list[list[int] | None]) -> list[Strip]:
    """Strips between consecutive coarse paths, ordered along the path.

    ``coarse_index`` lists the path indices of the coarse paths in order and
    ``darts`` their explicit dart lists.  A strip holds the terminals whose
    index lies strictly between its bounding paths.
    """
    bounds = [(i, d) for i, d in zip(coarse_index, darts) if d is not None]
    if not bounds:
        return [Strip(frozenset(range(co.graph.n)), list(terms), None, None)]
    strips = []
    edges = [(None, None)] + bounds + [(None, None)]
    by_index = {t[0]: t for t in terms}
    all_idx = sorted(by_index)
    for (li, ld), (ri, rd) in zip(edges, edges[1:]):
        lo = -1 if li is None else li
        hi = len(co.p_seq) if ri is None else ri
        sub = [by_index[i] for i in all_idx if lo < i < hi]
        region = subgraph_between(
            co, ld or [], rd or [],
            left_start=co.p_seq[li] if ld == [] else None,
            right_start=co.p_seq[ri] if rd == [] else None)
        strips.append(Strip(region.vertices, sub, ld, rd))
    return strips


def refined_reif(strip: Strip, g: PlaneGraph, keys: list[int], store, result: ReifResult) -> int:
    """Ordinary recursion over the terminals of one strip; returns the compressed strip size."""
    if not strip.terms:
        return 0
    adj = work_graph(g, keys, strip.vertices)
    compress(adj, {x for t in strip.terms for x in t[1:]}, store)
    reif(adj, strip.terms, store, result)
    return len(adj)


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------

def two_phase(setup, r: int, stats=None, fast: bool = True):
    """Lightest separating cycle through the coarse and refined phases."""
    from .mincut import SeparatingCycle, _cycle_from, sliced_to_dual_dart

    timings = stats.timings if stats is not None else {}
    t0 = time.perf_counter()
    co = setup.sliced
    cs = prepare_coarse(setup, r, fast)
    timings["division"] = time.perf_counter() - t0
    t1 = time.perf_counter()
    coarse = coarse_reif(cs, stats)
    order = sorted(coarse, key=lambda c: c.index)
    unwound = unwind_paths(order, cs.ddgs)
    timings["coarse"] = time.perf_counter() - t1
    t2 = time.perf_counter()
    strips = extract_strips(co, setup.terminals, [c.index for c in order], unwound.darts)
    result = ReifResult()
    strip_total = 0
    for strip in strips:
        strip_total += refined_reif(strip, co.graph, setup.sliced_keys, setup.store, result)
    timings["refined"] = time.perf_counter() - t2
    if stats is not None:
        stats.r = r
        stats.coarse_indices = len(cs.terms)
        stats.candidates = len(coarse) + len(result.candidates)
        stats.strip_total = strip_total
        stats.unwind_steps = unwound.steps
        if strip_total > STRIP_C * co.graph.n:
            raise VisitAccountingOverflow(f"strips hold {strip_total} vertices for {co.graph.n}")
    shift = setup.keys.shift
    best_key, best_cycle = None, None
    for cp, darts in zip(order, unwound.darts):
        if cp.path is None:
            continue
        key = cp.path.key[0] << shift | cp.path.key[1]
        if best_key is None or key < best_key:
            best_key = key
            best_cycle = SeparatingCycle([sliced_to_dual_dart(setup, d) for d in darts],
                                         setup.keys.weight_of(key), cp.index)
    if result.best_key is not None and (best_key is None or result.best_key < best_key):
        best_cycle = _cycle_from(setup, result.best_key, result.best_index, result.best_refs)
    return best_cycle
