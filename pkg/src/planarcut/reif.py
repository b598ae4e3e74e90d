"""Reif's recursion over a compressible working graph.

A working graph maps each vertex to its rotation-ordered list of entries
``(neighbour, key, ref)``.  ``ref`` names the run of cut-open darts the entry
stands for: ``e >= 0`` is edge ``e`` walked from its first dart, ``~e`` the
reverse, and refs at or above the leaf count are concatenations held in a
``SegmentStore``.  Merging a degree-two vertex replaces its two entries by a
single one whose ref is the concatenation, so expanding refs recovers the
original darts.

Keys are exact integers: ``weight << shift | noise`` with small random
noise, which makes every shortest path unique without changing which paths
are shortest by weight.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from heapq import heappop, heappush

from .plane_graph import INF, PlaneGraph, split_rotation


# ---------------------------------------------------------------------------
# keys
# ---------------------------------------------------------------------------

NOISE_BITS = 40


@dataclass
class KeyScheme:
    """Integer edge keys that order paths by weight and break every tie."""

    keys: list[int]
    shift: int
    big: int

    def weight_of(self, key: int):
        w = key >> self.shift
        return INF if w >= self.big else w


def perturbed_keys(weights, seed: int = 0) -> KeyScheme:
    finite = sum(w for w in weights if w != INF)
    big = finite + 1
    shift = NOISE_BITS + max(1, len(weights)).bit_length() + 1
    rng = random.Random(seed)
    keys = [((big if w == INF else w) << shift) | rng.getrandbits(NOISE_BITS) for w in weights]
    return KeyScheme(keys, shift, big)


# ---------------------------------------------------------------------------
# segments
# ---------------------------------------------------------------------------

class SegmentStore:
    """Concatenation nodes above ``leaves`` leaf edges."""

    def __init__(self, leaves: int):
        self.leaves = leaves
        self.parts: list[tuple[int, int]] = []

    def concat(self, a: int, b: int) -> int:
        self.parts.append((a, b))
        return self.leaves + len(self.parts) - 1

    def darts(self, ref: int) -> list[int]:
        """Expand a ref into its dart sequence."""
        out = []
        stack = [ref]
        leaves, parts = self.leaves, self.parts
        while stack:
            r = stack.pop()
            node = r if r >= 0 else ~r
            if node < leaves:
                out.append(2 * node if r >= 0 else 2 * node + 1)
                continue
            a, b = parts[node - leaves]
            if r >= 0:
                stack.append(b)
                stack.append(a)
            else:
                stack.append(~a)
                stack.append(~b)
        return out


def work_graph(g: PlaneGraph, keys: list[int], vertices=None) -> dict[int, list]:
    """Working graph of ``g`` (optionally induced on ``vertices``); loops dropped."""
    tail = g.tail
    adj = {}
    keep = None if vertices is None else vertices
    it = range(g.n) if vertices is None else vertices
    for v in it:
        row = []
        for d in g.rotation[v]:
            u = tail[d ^ 1]
            if u == v or (keep is not None and u not in keep):
                continue
            e = d >> 1
            row.append((u, keys[e], e if not d & 1 else ~e))
        adj[v] = row
    return adj


def compress(adj: dict[int, list], keep, store: SegmentStore) -> int:
    """Merge away vertices with two distinct neighbours that are not in ``keep``."""
    merged = 0
    for x in list(adj):
        row = adj.get(x)
        if row is None or len(row) != 2 or x in keep:
            continue
        (u, k1, r1), (v, k2, r2) = row
        if u == v:
            continue
        # x->u is r1, so u->x is ~r1; the new edge runs u->x->v.
        ref = store.concat(~r1, r2)
        urow = adj[u]
        vrow = adj[v]
        iu = _find(urow, ~r1)
        iv = _find(vrow, ~r2)
        urow[iu] = (v, k1 + k2, ref)
        vrow[iv] = (u, k1 + k2, ~ref)
        del adj[x]
        merged += 1
    return merged


def _find(row, ref):
    for i, entry in enumerate(row):
        if entry[2] == ref:
            return i
    raise KeyError(ref)


# ---------------------------------------------------------------------------
# shortest paths
# ---------------------------------------------------------------------------

def shortest_path(adj: dict[int, list], src: int, dst: int):
    """Dijkstra from ``src`` that stops at ``dst``.

    Returns ``(key, steps)`` where ``steps`` is the list of ``(vertex,
    entry index)`` pairs walked, or ``(None, None)`` if ``dst`` is unreachable.
    """
    if src == dst:
        return 0, []
    dist = {src: 0}
    prev = {}
    heap = [(0, src)]
    done = set()
    while heap:
        d, v = heappop(heap)
        if v in done:
            continue
        if v == dst:
            break
        done.add(v)
        for i, (u, w, _) in enumerate(adj[v]):
            nd = d + w
            old = dist.get(u)
            if old is None or nd < old:
                dist[u] = nd
                prev[u] = (v, i)
                heappush(heap, (nd, u))
    else:
        return None, None
    steps = []
    v = dst
    while v != src:
        p, i = prev[v]
        steps.append((p, i))
        v = p
    steps.reverse()
    return dist[dst], steps


# ---------------------------------------------------------------------------
# the recursion
# ---------------------------------------------------------------------------

@dataclass
class Candidate:
    key: int
    index: int


@dataclass
class ReifResult:
    best_key: int | None = None
    best_index: int | None = None
    best_refs: list[int] = field(default_factory=list)
    candidates: list[Candidate] = field(default_factory=list)
    work: int = 0

    def offer(self, key, index, refs):
        self.candidates.append(Candidate(key, index))
        if key is not None and (self.best_key is None or key < self.best_key):
            self.best_key, self.best_index, self.best_refs = key, index, refs


def path_sides(adj, src, steps):
    """Vertices of a working-graph path and the entries leaving it on each side.

    Returns ``(verts, path_entries, right, left)`` where the last three map a
    path vertex to a set of entry indices.
    """
    verts = [src]
    outs = []
    for v, i in steps:
        outs.append(i)
        verts.append(adj[v][i][0])
    ins = [None]
    for (v, i), u in zip(steps, verts[1:]):
        ins.append(_find(adj[u], ~adj[v][i][2]))
    outs.append(None)
    on_path = {}
    right = {}
    left = {}
    for v, a, b in zip(verts, ins, outs):
        row = adj[v]
        idx = list(range(len(row)))
        pos = idx  # positions coincide with indices
        r, l = split_rotation(idx, pos, a, b)
        on_path.setdefault(v, set()).update(x for x in (a, b) if x is not None)
        right.setdefault(v, set()).update(r)
        left.setdefault(v, set()).update(l)
    return verts, on_path, right, left


def _flood(adj, seeds, blocked, into):
    stack = [u for u in seeds if u not in blocked and u not in into]
    into.update(stack)
    while stack:
        v = stack.pop()
        for u, _, _ in adj[v]:
            if u not in blocked and u not in into:
                into.add(u)
                stack.append(u)


def split_by_path(adj, src, steps, terms, mid):
    """Partition ``adj`` along the path into the left and right child graphs.

    ``terms`` are ``(index, p, p_copy)`` triples; those before ``mid`` seed
    the left side and those after it the right side when a component is not
    attached to the path.  Anything that cannot be placed goes to both sides.
    """
    verts, on_path, right, left = path_sides(adj, src, steps)
    qset = set(verts)
    rset: set = set()
    lset: set = set()
    _flood(adj, [adj[v][i][0] for v in right for i in right[v]], qset, rset)
    _flood(adj, [adj[v][i][0] for v in left for i in left[v]], qset, lset)
    placed = rset | lset | qset
    if len(placed) < len(adj):
        seeds_l = [x for t in terms[:mid] for x in t[1:] if x not in placed]
        seeds_r = [x for t in terms[mid + 1:] for x in t[1:] if x not in placed]
        extra_l: set = set()
        extra_r: set = set()
        _flood(adj, seeds_l, qset | rset | lset, extra_l)
        _flood(adj, seeds_r, qset | rset | lset, extra_r)
        lset |= extra_l
        rset |= extra_r
        rest = [v for v in adj if v not in qset and v not in lset and v not in rset]
        lset.update(rest)
        rset.update(rest)
    children = []
    for side, sset, keep_idx in (("left", lset, left), ("right", rset, right)):
        members = sset | qset
        child = {}
        for v in sset:
            if v in qset:
                continue
            child[v] = [e for e in adj[v] if e[0] in members]
        for v in qset:
            row = adj[v]
            allowed = on_path[v] | keep_idx[v]
            child[v] = [row[i] for i in range(len(row)) if i in allowed and row[i][0] in members]
        _repair_twins(child)
        children.append(child)
    return children[0], children[1], verts


def _repair_twins(adj):
    """Drop entries whose partner entry did not survive the split."""
    refs = {}
    for v, row in adj.items():
        for u, _, r in row:
            refs[r] = v
    for v, row in adj.items():
        if any(refs.get(~r) != u for u, _, r in row):
            adj[v] = [e for e in row if refs.get(~e[2]) == e[0]]


def reif(adj: dict[int, list], terms: list[tuple[int, int, int]], store: SegmentStore,
         result: ReifResult | None = None, compress_children: bool = True) -> ReifResult:
    """Run Reif's midpoint recursion over the terminal triples ``terms``.

    Each triple ``(index, p, p_copy)`` asks for the shortest ``p -> p_copy``
    path; the answer for every index is offered to ``result``.
    """
    result = result or ReifResult()
    stack = [(adj, terms)]
    while stack:
        g, ts = stack.pop()
        if not ts:
            continue
        mid = (len(ts) + 1) // 2 - 1
        index, p, pc = ts[mid]
        key, steps = shortest_path(g, p, pc)
        result.work += len(g)
        refs = [g[v][i][2] for v, i in steps] if steps is not None else []
        result.offer(key, index, refs)
        if len(ts) == 1 or steps is None:
            if steps is None and len(ts) > 1:
                stack.append((g, ts[:mid]))
                stack.append((g, ts[mid + 1:]))
            continue
        left, right, _ = split_by_path(g, p, steps, ts, mid)
        del g
        for child, sub in ((right, ts[mid + 1:]), (left, ts[:mid])):
            if not sub:
                continue
            if compress_children:
                compress(child, {x for t in sub for x in t[1:]}, store)
            stack.append((child, sub))
    return result
