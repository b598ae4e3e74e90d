import functools
import heapq
import math

import pytest

from planarcut.harness.generators import grid_graph
from planarcut.plane_graph import INF

ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def record(name: str, ok: bool, detail: str = "") -> None:
    ACCEPTANCE[name] = (ok, detail)
    print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for name, (ok, detail) in ACCEPTANCE.items():
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  ({detail})")


# -- independent graph helpers -------------------------------------------------

def unit_grid(rows, cols, diagonals=False, weight=1):
    return grid_graph(rows, cols, lambda _: weight, diagonals)


def adjacency(g, edges=None, weights=None):
    """Undirected adjacency ``v -> [(u, w, dart)]`` over an edge subset."""
    adj = {}
    for e in (range(g.m) if edges is None else edges):
        e = int(e)
        w = g.weight[e] if weights is None else weights[e]
        u, v = g.tail[2 * e], g.tail[2 * e + 1]
        adj.setdefault(u, []).append((v, w, 2 * e))
        adj.setdefault(v, []).append((u, w, 2 * e + 1))
    return adj


def dijkstra(adj, src, allowed=None):
    """Plain textbook Dijkstra; returns ``(dist, parent_dart)`` dicts."""
    dist = {src: 0}
    par = {src: None}
    heap = [(0, src)]
    done = set()
    while heap:
        d, v = heapq.heappop(heap)
        if v in done:
            continue
        done.add(v)
        for u, w, dart in adj.get(v, ()):
            if allowed is not None and u not in allowed:
                continue
            nd = d + w
            if nd < dist.get(u, INF):
                dist[u] = nd
                par[u] = dart
                heapq.heappush(heap, (nd, u))
    return dist, par


def path_darts(g, par, dst):
    out = []
    while par.get(dst) is not None:
        d = par[dst]
        out.append(d)
        dst = g.tail[d]
    return out[::-1]


def face_walks(n_darts, tail, rotation, darts=None):
    """Faces as dart lists, traced from the rotation lists alone."""
    keep = set(range(n_darts)) if darts is None else set(darts)
    rot = {}
    for v, r in enumerate(rotation):
        lst = [d for d in r if d in keep]
        for i, d in enumerate(lst):
            rot[d] = lst[(i + 1) % len(lst)]
    seen = set()
    faces = []
    for d0 in sorted(keep):
        if d0 in seen:
            continue
        walk = []
        d = d0
        while d not in seen:
            seen.add(d)
            walk.append(d)
            d = rot[d ^ 1]
        faces.append(walk)
    return faces


@functools.lru_cache(maxsize=8)
def _parent_faces(g):
    return {frozenset(w) for w in face_walks(2 * g.m, g.tail, g.rotation)}


def piece_census(g, edges):
    """Boundary vertices, boundary-face count and hole count of an edge set, from scratch."""
    edges = {int(e) for e in edges}
    verts = {g.tail[2 * e] for e in edges} | {g.tail[2 * e + 1] for e in edges}
    outside = set(range(g.m)) - edges
    boundary = {g.tail[2 * e] for e in outside} | {g.tail[2 * e + 1] for e in outside}
    boundary &= verts
    parent_faces = _parent_faces(g)
    darts = [2 * e + b for e in edges for b in (0, 1)]
    faces = face_walks(2 * g.m, g.tail, g.rotation, darts)
    new = [f for f in faces if frozenset(f) not in parent_faces]
    return boundary, len(new), max(0, len(new) - 1)


def sqrt_bound(c, r):
    return c * math.sqrt(r)


@pytest.fixture
def grid4():
    return unit_grid(4, 4)
