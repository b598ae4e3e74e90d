"""Shortest paths among boundary vertices over dense distance graphs.

The union graph has the boundary vertices of all pieces as vertices and one
edge per pair of boundary vertices of a common piece, weighted by their
in-piece distance.  Super edges stand in for removed vertices of degree two.
A search only sees the vertices of its scope.

Segments name what an edge of the union graph stands for: ``("ddg", q, i,
j)`` is the in-piece path from boundary vertex ``i`` to ``j`` of piece ``q``
and ``("super", k, forward)`` is super edge ``k`` walked from its ``u`` end
when ``forward`` is true.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .ddg import DDGSet
from .errors import Unreachable
from .plane_graph import INF


@dataclass
class SuperEdge:
    u: int
    v: int
    key: tuple[int, int]
    chain: list[tuple]

    @property
    def weight(self) -> int:
        return self.key[0]


@dataclass
class ImplicitPath:
    src: int
    dst: int
    vertices: list[int]
    segments: list[tuple]
    key: tuple[int, int] | None

    @property
    def weight(self):
        return INF if self.key is None else self.key[0]


class ActiveScope:
    """The vertices a search may use, as a sorted id array and a 0/1 mask."""

    def __init__(self, n: int, vertices):
        self.mask = np.zeros(n, np.uint8)
        self.mask[np.asarray(list(vertices) if not isinstance(vertices, np.ndarray) else vertices,
                             np.int64)] = 1
        self.removed: set[int] = set()

    @property
    def vertices(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    def __contains__(self, v: int) -> bool:
        return bool(self.mask[v])

    def remove(self, v: int) -> None:
        self.mask[v] = 0
        self.removed.add(v)


def reverse(seg: tuple) -> tuple:
    if seg[0] == "ddg":
        return ("ddg", seg[1], seg[3], seg[2])
    return ("super", seg[1], not seg[2])


def segment_key(ddgs: DDGSet, supers: list[SuperEdge], seg: tuple) -> tuple[int, int]:
    if seg[0] == "ddg":
        return ddgs.key(seg[1], seg[2], seg[3])
    return supers[seg[1]].key


def segment_ends(ddgs: DDGSet, supers: list[SuperEdge], seg: tuple) -> tuple[int, int]:
    if seg[0] == "ddg":
        return ddgs.vertex(seg[1], seg[2]), ddgs.vertex(seg[1], seg[3])
    s = supers[seg[1]]
    return (s.u, s.v) if seg[2] else (s.v, s.u)


def expand(ddgs: DDGSet, supers: list[SuperEdge], seg: tuple):
    """Darts of a segment in walking order, produced lazily."""
    if seg[0] == "ddg":
        yield from ddgs.walk(seg[1], seg[2], seg[3])
        return
    s = supers[seg[1]]
    parts = s.chain if seg[2] else [reverse(x) for x in reversed(s.chain)]
    for part in parts:
        yield from expand(ddgs, supers, part)


def _super_csr(n: int, supers: list[SuperEdge]):
    k = len(supers)
    src = np.empty(2 * k, np.int64)
    dst = np.empty(2 * k, np.int64)
    sw = np.empty(2 * k, np.int64)
    sn = np.empty(2 * k, np.int64)
    ref = np.empty(2 * k, np.int64)
    for idx, s in enumerate(supers):
        src[2 * idx], dst[2 * idx] = s.u, s.v
        src[2 * idx + 1], dst[2 * idx + 1] = s.v, s.u
        sw[2 * idx] = sw[2 * idx + 1] = s.key[0]
        sn[2 * idx] = sn[2 * idx + 1] = s.key[1]
        ref[2 * idx], ref[2 * idx + 1] = 2 * idx, 2 * idx + 1
    order = np.argsort(src, kind="stable")
    ptr = np.zeros(n + 1, np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=ptr[1:])
    return ptr, dst[order], sw[order], sn[order], ref[order]


def shortest_path(ddgs: DDGSet, supers: list[SuperEdge], scope: ActiveScope, src: int, dst: int,
                  stats: dict | None = None) -> ImplicitPath:
    """Shortest ``src -> dst`` path in the union graph restricted to ``scope``.

    Raises ``Unreachable`` when no path exists inside the scope.
    """
    if src == dst:
        return ImplicitPath(src, dst, [src], [], (0, 0))
    n = ddgs.graph.n
    sptr, sdst, sw, sn, sref = _super_csr(n, supers)
    mask = scope.mask
    if not (mask[src] and mask[dst]):
        raise Unreachable("endpoint outside the scope")
    w, nz, verts, sq, sa, sb, settled = _kernels.union_dijkstra(
        ddgs.mem_ptr, ddgs.mem_q, ddgs.mem_i, ddgs.bptr, ddgs.bverts, ddgs.moff, ddgs.dw, ddgs.dn,
        sptr, sdst, sw, sn, mask, src, dst)
    if stats is not None:
        stats["settled"] = stats.get("settled", 0) + int(settled)
    if w < 0:
        raise Unreachable(f"no path from {src} to {dst} in scope")
    segs = []
    for q, a, b in zip(sq.tolist(), sa.tolist(), sb.tolist()):
        if q >= 0:
            segs.append(("ddg", q, a, b))
        else:
            r = int(sref[a])
            segs.append(("super", r >> 1, not r & 1))
    return ImplicitPath(src, dst, verts.tolist(), segs, (int(w), int(nz)))


def _neighbours(ddgs: DDGSet, supers: list[SuperEdge], incident: dict, scope: ActiveScope, v: int):
    """Best segment from ``v`` to each scope neighbour: ``{u: (key, segment)}``."""
    out = {}
    u, w, nz, q, i, j = _kernels.neighbours(v, ddgs.mem_ptr, ddgs.mem_q, ddgs.mem_i, ddgs.bptr,
                                            ddgs.bverts, ddgs.moff, ddgs.dw, ddgs.dn, scope.mask)
    for row in zip(u.tolist(), w.tolist(), nz.tolist(), q.tolist(), i.tolist(), j.tolist()):
        out[row[0]] = ((row[1], row[2]), ("ddg", row[3], row[4], row[5]))
    for k in incident.get(v, ()):
        s = supers[k]
        seg = ("super", k, s.u == v)
        other = s.v if s.u == v else s.u
        if other == v or other not in scope:
            continue
        old = out.get(other)
        if old is None or s.key < old[0]:
            out[other] = (s.key, seg)
    return out


def eliminate_degree2(scope: ActiveScope, ddgs: DDGSet, supers: list[SuperEdge] | None = None,
                      keep=()) -> list[SuperEdge]:
    """Bypass scope vertices with exactly two scope neighbours until none is left.

    Each removed vertex ``p`` with neighbours ``q1`` and ``q2`` becomes a
    super edge ``q1 -> q2`` whose chain is the best ``q1 -> p`` segment followed
    by the best ``p -> q2`` segment.  Removed vertices leave ``scope``;
    vertices in ``keep`` are never removed.  New super edges are appended to
    ``supers`` (when given) and returned.
    """
    supers = supers if supers is not None else []
    keep = set(keep)
    incident: dict[int, list[int]] = {}
    for k, s in enumerate(supers):
        incident.setdefault(s.u, []).append(k)
        incident.setdefault(s.v, []).append(k)
    verts = scope.vertices
    stamp = np.full(ddgs.graph.n, -1, np.int64)
    deg = _kernels.scope_degrees(verts, ddgs.mem_ptr, ddgs.mem_q, ddgs.mem_i, ddgs.bptr,
                                 ddgs.bverts, ddgs.moff, ddgs.dw, scope.mask, stamp, 3)
    work = [int(v) for v in verts[deg <= 2]] + [v for v in incident if v in scope]
    created = []
    while work:
        p = work.pop()
        if p in keep or p not in scope:
            continue
        nb = _neighbours(ddgs, supers, incident, scope, p)
        if len(nb) != 2:
            continue
        (q1, (k1, s1)), (q2, (k2, s2)) = sorted(nb.items())
        edge = SuperEdge(q1, q2, (k1[0] + k2[0], k1[1] + k2[1]), [reverse(s1), s2])
        idx = len(supers)
        supers.append(edge)
        created.append(edge)
        incident.setdefault(q1, []).append(idx)
        incident.setdefault(q2, []).append(idx)
        scope.remove(p)
        work += [q1, q2]
    return created
