"""Combinatorial plane multigraphs stored as rotation systems over darts.

Edge ``e`` owns the two darts ``2e`` and ``2e + 1``; ``d ^ 1`` is the twin
of ``d``.  ``rotation[v]`` lists the darts leaving ``v`` in counterclockwise
order.  Faces are the orbits of ``face_next(d) = succ(twin(d))`` where
``succ`` steps to the next dart in the rotation at the dart's tail.

Weights are exact: non-negative Python integers (a fixed-point value whose
decimal scale is kept in ``scale``) or ``INF``.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from typing import Iterable, Sequence

from .errors import (
    CrossingPaths,
    Disconnected,
    MalformedRotation,
    NegativeWeight,
    NonPlanarEmbedding,
    NonSimplePath,
)

INF = math.inf


def twin(d: int) -> int:
    return d ^ 1


# ---------------------------------------------------------------------------
# weights
# ---------------------------------------------------------------------------

def parse_weight(text) -> tuple[int | float, int]:
    """Parse a weight into ``(mantissa, decimals)``; ``inf`` gives ``(INF, 0)``."""
    s = str(text).strip()
    if s.lower() in ("inf", "+inf", "infinity"):
        return INF, 0
    try:
        dec = Decimal(s)
    except InvalidOperation as exc:
        raise NegativeWeight(f"unparseable weight {text!r}") from exc
    if not dec.is_finite():
        raise NegativeWeight(f"unsupported weight {text!r}")
    if dec < 0:
        raise NegativeWeight(f"negative weight {text!r}")
    sign, digits, exp = dec.as_tuple()
    decimals = max(0, -exp)
    return int(dec.scaleb(decimals)), decimals


def scale_weights(texts: Iterable) -> tuple[list, int]:
    """Parse weight strings onto one common fixed-point scale."""
    parsed = [parse_weight(t) for t in texts]
    scale = max((dp for _, dp in parsed), default=0)
    out = []
    for mant, dp in parsed:
        out.append(INF if mant == INF else mant * 10 ** (scale - dp))
    return out, scale


def format_weight(value, scale: int) -> str:
    """Render a scaled integer weight as its shortest exact decimal string."""
    if value == INF:
        return "inf"
    if scale == 0:
        return str(value)
    text = str(Decimal(value).scaleb(-scale))
    if "E" in text or "e" in text:
        text = format(Decimal(value).scaleb(-scale), "f")
    if "." in text:
        text = text.rstrip("0").rstrip(".")
    return text


# ---------------------------------------------------------------------------
# the graph
# ---------------------------------------------------------------------------

class PlaneGraph:
    """An embedded multigraph; immutable once constructed.

    Parameters
    ----------
    n : int
        Number of vertices.
    tail : sequence of int
        ``tail[d]`` is the vertex dart ``d`` leaves; its length is ``2m``.
    rotation : sequence of sequences
        Counterclockwise dart order around every vertex.
    weight : sequence
        Per-edge weight, an ``int`` or ``INF``.
    scale : int
        Number of implied decimal places of the integer weights.
    """

    __slots__ = ("n", "m", "tail", "rotation", "weight", "scale", "pos",
                 "face_of", "faces", "_components", "_arrays")

    def __init__(self, n: int, tail: Sequence[int], rotation: Sequence[Sequence[int]],
                 weight: Sequence, scale: int = 0, check_euler: bool = True):
        self.n = n
        self.tail = list(tail)
        self.m = len(self.tail) // 2
        self.rotation = [list(r) for r in rotation]
        self.weight = list(weight)
        self.scale = scale
        self._components = None
        self._arrays = None
        if len(self.tail) != 2 * len(self.weight):
            raise MalformedRotation("dart count does not match edge count")
        if len(self.rotation) != n:
            raise MalformedRotation(f"expected {n} rotation lists, got {len(self.rotation)}")
        for w in self.weight:
            if not (w == INF or (isinstance(w, int) and w >= 0)):
                raise NegativeWeight(f"invalid weight {w!r}")
        pos = [-1] * len(self.tail)
        for v, rot in enumerate(self.rotation):
            for i, d in enumerate(rot):
                if not 0 <= d < len(pos):
                    raise MalformedRotation(f"dart {d} out of range at vertex {v}")
                if pos[d] != -1:
                    raise MalformedRotation(f"dart {d} appears twice")
                if self.tail[d] != v:
                    raise MalformedRotation(f"dart {d} listed at {v} but leaves {self.tail[d]}")
                pos[d] = i
        if -1 in pos:
            raise MalformedRotation(f"dart {pos.index(-1)} missing from every rotation")
        self.pos = pos
        self._trace_faces()
        if check_euler:
            self.check_euler()

    # -- construction helpers ------------------------------------------------

    @classmethod
    def build(cls, edges: Sequence[tuple], rotations: Sequence[Sequence[int]],
              n: int | None = None, scale: int = 0) -> "PlaneGraph":
        """Build from ``(u, v, weight)`` edges and per-vertex edge orders.

        A self-loop's edge index appears twice in its vertex's list; the first
        occurrence is taken as dart ``2e`` and the second as ``2e + 1``.
        """
        if n is None:
            n = len(rotations)
        tail = [0] * (2 * len(edges))
        weight = []
        for e, (u, v, w) in enumerate(edges):
            if not (0 <= u < n and 0 <= v < n):
                raise MalformedRotation(f"edge {e} has endpoint outside 0..{n - 1}")
            tail[2 * e], tail[2 * e + 1] = u, v
            weight.append(w)
        seen = [0] * len(edges)
        rot = []
        for v, order in enumerate(rotations):
            darts = []
            for e in order:
                if not 0 <= e < len(edges):
                    raise MalformedRotation(f"unknown edge {e} at vertex {v}")
                u, x, _ = edges[e]
                if u == x:
                    if u != v or seen[e] >= 2:
                        raise MalformedRotation(f"self-loop {e} misplaced at {v}")
                    darts.append(2 * e + seen[e])
                    seen[e] += 1
                elif v == u and not seen[e] & 1:
                    darts.append(2 * e)
                    seen[e] |= 1
                elif v == x and not seen[e] & 2:
                    darts.append(2 * e + 1)
                    seen[e] |= 2
                else:
                    raise MalformedRotation(f"edge {e} is not incident to {v} or repeated")
            rot.append(darts)
        return cls(n, tail, rot, weight, scale)

    def edge_rotations(self) -> list[list[int]]:
        return [[d >> 1 for d in r] for r in self.rotation]

    def edges(self) -> list[tuple]:
        t = self.tail
        return [(t[2 * e], t[2 * e + 1], self.weight[e]) for e in range(self.m)]

    # -- dart algebra --------------------------------------------------------

    def head(self, d: int) -> int:
        return self.tail[d ^ 1]

    def succ(self, d: int) -> int:
        rot = self.rotation[self.tail[d]]
        return rot[(self.pos[d] + 1) % len(rot)]

    def pred(self, d: int) -> int:
        rot = self.rotation[self.tail[d]]
        return rot[self.pos[d] - 1]

    def face_next(self, d: int) -> int:
        return self.succ(d ^ 1)

    def degree(self, v: int) -> int:
        return len(self.rotation[v])

    # -- faces and connectivity ---------------------------------------------

    def _trace_faces(self) -> None:
        tail, rotation, pos = self.tail, self.rotation, self.pos
        face_of = [-1] * len(tail)
        faces = []
        for start in range(len(tail)):
            if face_of[start] != -1:
                continue
            f = len(faces)
            walk = []
            d = start
            while face_of[d] == -1:
                face_of[d] = f
                walk.append(d)
                t = d ^ 1
                rot = rotation[tail[t]]
                d = rot[(pos[t] + 1) % len(rot)]
            if d != start:
                raise MalformedRotation("face walk does not close")
            faces.append(walk)
        self.face_of = face_of
        self.faces = faces

    @property
    def num_faces(self) -> int:
        return len(self.faces)

    def components(self) -> list[int]:
        """Component label per vertex."""
        if self._components is None:
            comp = [-1] * self.n
            c = 0
            for s in range(self.n):
                if comp[s] != -1:
                    continue
                comp[s] = c
                stack = [s]
                while stack:
                    v = stack.pop()
                    for d in self.rotation[v]:
                        u = self.tail[d ^ 1]
                        if comp[u] == -1:
                            comp[u] = c
                            stack.append(u)
                c += 1
            self._components = comp
        return self._components

    def num_components(self) -> int:
        comp = self.components()
        return max(comp) + 1 if comp else 0

    def is_connected(self) -> bool:
        return self.num_components() <= 1

    def check_euler(self) -> None:
        """Every component must satisfy ``n - m + f = 2`` (isolated vertices own a face)."""
        comp = self.components()
        k = self.num_components()
        nv = [0] * k
        ne = [0] * k
        nf = [0] * k
        for v in range(self.n):
            nv[comp[v]] += 1
            if not self.rotation[v]:
                nf[comp[v]] += 1
        for e in range(self.m):
            ne[comp[self.tail[2 * e]]] += 1
        for walk in self.faces:
            nf[comp[self.tail[walk[0]]]] += 1
        for c in range(k):
            if nv[c] - ne[c] + nf[c] != 2:
                raise NonPlanarEmbedding(
                    f"component {c}: V - E + F = {nv[c]} - {ne[c]} + {nf[c]} != 2")

    # -- dual ------------------------------------------------------------------

    def dual(self) -> "PlaneGraph":
        """The dual graph on the same dart set.

        Dual vertex ``f`` is face ``f``; dart ``d`` leaves ``face_of[d]`` and its
        rotation order is the face walk.  The faces of the dual are the
        rotations of this graph, so ``g.dual().dual()`` equals ``g`` up to a
        relabelling of vertices.
        """
        if not self.is_connected():
            raise Disconnected("dual requires a connected graph")
        return PlaneGraph(self.num_faces, self.face_of, self.faces, self.weight, self.scale)

    def arrays(self) -> "GraphArrays":
        """Flat numpy views used by the compiled kernels (built once)."""
        if self._arrays is None:
            self._arrays = GraphArrays(self)
        return self._arrays

    # -- misc --------------------------------------------------------------------

    def total_weight(self):
        return sum(self.weight)

    def __repr__(self) -> str:
        return f"PlaneGraph(n={self.n}, m={self.m}, faces={self.num_faces})"


class GraphArrays:
    """CSR rotation arrays plus scratch buffers for one graph."""

    def __init__(self, g: PlaneGraph):
        import numpy as np

        self.tail = np.array(g.tail, np.int64)
        self.rot_ptr = np.zeros(g.n + 1, np.int64)
        self.rot_ptr[1:] = np.cumsum([len(r) for r in g.rotation])
        self.rot_darts = np.fromiter((d for r in g.rotation for d in r), np.int64, 2 * g.m)
        self.face_of = np.array(g.face_of, np.int64)
        self.face_len = np.array([len(f) for f in g.faces], np.int64)
        self.vmark = np.full(g.n, -1, np.int64)
        self.emark = np.full(g.m, -1, np.int64)


def connect_components(g: PlaneGraph) -> tuple[PlaneGraph, list[int]]:
    """Join the components of ``g`` with zero-weight edges.

    Each extra edge links the first vertex of one component to the first
    vertex of the next; it is placed at the end of both rotations, which keeps
    the embedding planar.  Returns the new graph and the added edge ids.
    """
    comp = g.components()
    reps = {}
    for v in range(g.n):
        reps.setdefault(comp[v], v)
    order = [reps[c] for c in sorted(reps)]
    if len(order) <= 1:
        return g, []
    tail = list(g.tail)
    rotation = [list(r) for r in g.rotation]
    weight = list(g.weight)
    added = []
    for a, b in zip(order, order[1:]):
        e = len(weight)
        weight.append(0)
        tail += [a, b]
        rotation[a].append(2 * e)
        rotation[b].append(2 * e + 1)
        added.append(e)
    return PlaneGraph(g.n, tail, rotation, weight, g.scale), added


# ---------------------------------------------------------------------------
# cutting open along a path
# ---------------------------------------------------------------------------

@dataclass
class CutOpenGraph:
    """Result of slicing a graph along a simple path.

    ``p_seq[i]`` and ``p_copy_seq[i]`` are the two sides of the i-th path
    vertex; ``edge_origin[e]`` maps every edge of ``graph`` back to the edge
    of the source graph it was copied from.  Rotation lists of path vertices
    start right after the slit, so "before the first dart" is the slit side.
    """

    graph: PlaneGraph
    p_seq: list[int]
    p_copy_seq: list[int]
    origin: dict[int, int]
    edge_origin: list[int]
    path_darts: list[int]
    copy_darts: list[int] = field(default_factory=list)

    def index_of(self) -> dict[int, int]:
        """Map each path or copy vertex to its 0-based position along the path."""
        idx = {v: i for i, v in enumerate(self.p_seq)}
        idx.update({v: i for i, v in enumerate(self.p_copy_seq)})
        return idx


def _path_vertices(g: PlaneGraph, darts: Sequence[int], start: int | None) -> list[int]:
    if darts:
        verts = [g.tail[darts[0]]]
        for d in darts:
            if g.tail[d] != verts[-1]:
                raise NonSimplePath("darts do not form a walk")
            verts.append(g.tail[d ^ 1])
    else:
        if start is None:
            raise NonSimplePath("an empty path needs an explicit start vertex")
        verts = [start]
    if len(set(verts)) != len(verts):
        raise NonSimplePath("path repeats a vertex")
    return verts


def _arc(rot: list[int], pos: list[int], start: int, stop: int) -> list[int]:
    """Darts from ``start`` (inclusive) to ``stop`` (exclusive) around one rotation."""
    out = []
    k = len(rot)
    i = pos[start]
    while rot[i] != stop:
        out.append(rot[i])
        i = (i + 1) % k
        if len(out) > k:
            raise MalformedRotation("arc end not found in rotation")
    return out


def cut_open(g: PlaneGraph, path: Sequence[int], start: int | None = None,
             start_corner: int | None = None, end_corner: int | None = None) -> CutOpenGraph:
    """Slice ``g`` along the dart path ``path``.

    At every interior path vertex the darts strictly between the incoming and
    the outgoing path dart, scanning counterclockwise from the incoming one,
    lie to the right of the path; they move to a fresh copy vertex.  Copies of
    the path edges join the copies.  Endpoints are left intact unless a
    corner is supplied: ``start_corner`` names the dart just after the gap where
    the slit enters the first vertex, ``end_corner`` the dart just after the
    gap where it leaves the last one.  For a single-vertex path both corners
    are required.
    """
    verts = _path_vertices(g, path, start)
    k = len(verts)
    n, m = g.n, g.m
    tail = list(g.tail)
    rotation = [list(r) for r in g.rotation]
    weight = list(g.weight)
    edge_origin = list(range(m))
    copies = list(range(n, n + k))
    copy_darts = []
    for i in range(k - 1):
        e = m + i
        pe = path[i] >> 1
        weight.append(g.weight[pe])
        edge_origin.append(pe)
        tail += [copies[i], copies[i + 1]]
        copy_darts.append(2 * e)
    rotation += [[] for _ in range(k)]

    for i, v in enumerate(verts):
        rot = g.rotation[v]
        into = path[i - 1] ^ 1 if i > 0 else None
        out = path[i] if i < k - 1 else None
        in_copy = 2 * (m + i - 1) + 1 if i > 0 else None
        out_copy = 2 * (m + i) if i < k - 1 else None
        if into is not None and out is not None:
            right = _arc(rot, g.pos, g.succ(into), out)
            first = out
        elif into is None and out is not None:
            right = _arc(rot, g.pos, start_corner, out) if start_corner is not None else []
            first = out
        elif into is not None:
            right = _arc(rot, g.pos, g.succ(into), end_corner) if end_corner is not None else []
            first = end_corner if end_corner is not None else g.succ(into)
        elif start_corner is not None and end_corner is not None:
            right = _arc(rot, g.pos, start_corner, end_corner)
            first = end_corner
        else:
            right = []
            first = rot[0] if rot else None
        moved = set(right)
        keep = [d for d in _rotate_to(rot, g.pos, first) if d not in moved] if rot else []
        copy_rot = []
        if in_copy is not None:
            copy_rot.append(in_copy)
        copy_rot += right
        if out_copy is not None:
            copy_rot.append(out_copy)
        for d in right:
            tail[d] = copies[i]
        rotation[v] = keep
        rotation[copies[i]] = copy_rot

    cg = PlaneGraph(n + k, tail, rotation, weight, g.scale)
    return CutOpenGraph(cg, verts, copies, dict(zip(copies, verts)), edge_origin,
                        list(path), copy_darts)


def _rotate_to(rot: list[int], pos: list[int], first: int) -> list[int]:
    i = pos[first]
    return rot[i:] + rot[:i]


# ---------------------------------------------------------------------------
# sides of paths and regions between paths
# ---------------------------------------------------------------------------

def side_darts(g: PlaneGraph, path_verts: Sequence[int], path_darts: Sequence[int]):
    """Darts leaving the path on its right and on its left, per path vertex.

    Right means counterclockwise after the incoming dart and before the
    outgoing one.  At an endpoint the missing dart is replaced by the slit
    gap, which sits before the first entry of the rotation list.
    """
    right: list[int] = []
    left: list[int] = []
    k = len(path_verts)
    for i, v in enumerate(path_verts):
        rot = g.rotation[v]
        if not rot:
            continue
        a = path_darts[i - 1] ^ 1 if i > 0 else None
        b = path_darts[i] if i < k - 1 else None
        r, l = split_rotation(rot, g.pos, a, b)
        right += r
        left += l
    return right, left


def split_rotation(rot, pos, a, b):
    """Split ``rot`` minus ``a`` and ``b`` into the (right, left) arcs."""
    size = len(rot)
    ia = pos[a] if a is not None else -1
    ib = pos[b] if b is not None else size
    if a is not None and b is not None:
        if ia < ib:
            right = rot[ia + 1:ib]
            left = rot[ib + 1:] + rot[:ia]
        else:
            right = rot[ia + 1:] + rot[:ib]
            left = rot[ib + 1:ia]
    elif a is None and b is None:
        right, left = list(rot), []
    elif a is None:
        right = rot[:ib]
        left = rot[ib + 1:]
    else:
        right = rot[ia + 1:]
        left = rot[:ia]
    return right, left


@dataclass(frozen=True)
class Region:
    vertices: frozenset
    edges: frozenset


def subgraph_between(cog: CutOpenGraph, q_left: Sequence[int], q_right: Sequence[int],
                     left_start: int | None = None, right_start: int | None = None) -> Region:
    """The part of a cut-open graph enclosed by two non-crossing paths.

    Both paths are dart lists running from a path vertex to its copy (an
    empty list needs ``*_start``).  The region holds both paths and every
    vertex reachable from the right of ``q_left`` or the left of ``q_right``
    without touching either path.  A missing path (empty, no start) leaves
    that side open.
    """
    g = cog.graph
    lv = _path_vertices(g, q_left, left_start) if q_left or left_start is not None else []
    rv = _path_vertices(g, q_right, right_start) if q_right or right_start is not None else []
    if not lv and not rv:
        return Region(frozenset(range(g.n)), frozenset(range(g.m)))
    on_left, on_right = set(lv), set(rv)
    on_path = on_left | on_right
    r_of_left, l_of_left = map(set, side_darts(g, lv, q_left))
    r_of_right, l_of_right = map(set, side_darts(g, rv, q_right))
    # where the paths share a vertex a dart must be inside both half-planes
    inward = {d for d in r_of_left | l_of_right
              if (g.tail[d] not in on_left or d in r_of_left)
              and (g.tail[d] not in on_right or d in l_of_right)}
    outward = (l_of_left | r_of_right) - inward
    seen = set()
    queue = deque()
    for d in inward:
        u = g.tail[d ^ 1]
        if u not in on_path and u not in seen:
            seen.add(u)
            queue.append(u)
    while queue:
        v = queue.popleft()
        for d in g.rotation[v]:
            u = g.tail[d ^ 1]
            if u not in on_path and u not in seen:
                seen.add(u)
                queue.append(u)
    for d in outward:
        if g.tail[d ^ 1] in seen:
            raise CrossingPaths("a vertex is reachable from both sides of a bounding path")
    verts = seen | on_path
    path_edges = {d >> 1 for d in q_left} | {d >> 1 for d in q_right}
    edges = set(path_edges)
    for d in inward:
        edges.add(d >> 1)
    for v in seen:
        for d in g.rotation[v]:
            edges.add(d >> 1)
    return Region(frozenset(verts), frozenset(edges))
