"""r-divisions with a bounded number of holes.

A piece is a set of edges of the parent graph.  Its boundary vertices are
the piece vertices that also touch an edge outside the piece, and its
boundary faces are the faces of the piece that are not faces of the parent.
One boundary face is designated external; the others are holes.

Pieces are split with fundamental-cycle separators on a triangulation of the
piece in which every boundary face gets a centre vertex.  Putting weight on
those centres is the same as contracting each boundary face to a single
vertex, which is how the hole count is kept down.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

from .errors import Disconnected, InvalidR, TooManyHoles
import numpy as np

from . import _kernels
from .plane_graph import PlaneGraph
from .separator import fundamental_cycle_separator, triangulate_faces

H_MAX = 5
C_SIZE = 4
C_BOUNDARY = 6
C_PIECES = 4
C_TOTAL_BOUNDARY = 12


# ---------------------------------------------------------------------------
# pieces
# ---------------------------------------------------------------------------

class _Local:
    """A piece re-indexed as a standalone rotation system with traced faces."""

    __slots__ = ("verts", "tail", "rot_ptr", "rot", "face_ptr", "face_darts",
                 "boundary_face", "boundary_vertex")

    def __init__(self, g: PlaneGraph, edges: np.ndarray):
        ga = g.arrays()
        (self.verts, self.tail, self.rot_ptr, self.rot, self.face_ptr, self.face_darts,
         self.boundary_face, self.boundary_vertex) = _kernels.build_local(
            edges, ga.tail, ga.rot_ptr, ga.rot_darts, ga.face_of, ga.face_len, ga.vmark, ga.emark)

    @property
    def n(self) -> int:
        return len(self.verts)

    def face(self, f: int) -> np.ndarray:
        return self.face_darts[self.face_ptr[f]:self.face_ptr[f + 1]]


@dataclass(eq=False)
class Piece:
    """Edge-induced piece of ``parent_graph``.

    ``edges`` is a sorted array of parent edge ids.  ``holes`` holds the
    boundary faces other than the external one, each as a list of parent
    darts.  ``tracked_boundary`` is maintained incrementally by the splitting
    code and must agree with ``boundary``.
    """

    edges: np.ndarray
    boundary: set
    holes: list
    parent_graph: PlaneGraph = field(repr=False)
    vertices: np.ndarray = field(default=None, repr=False)
    external: list | None = field(default=None, repr=False)
    tracked_boundary: set | None = field(default=None, repr=False)
    _local: _Local | None = field(default=None, repr=False)

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def num_holes(self) -> int:
        return len(self.holes)

    def local(self) -> _Local:
        if self._local is None:
            self._local = _Local(self.parent_graph, self.edges)
        return self._local

    def release(self) -> None:
        """Drop the cached local structure (it is rebuilt on demand)."""
        self._local = None


def make_piece(g: PlaneGraph, edges, tracked: set | None = None) -> Piece:
    """Piece of ``g`` on ``edges`` with boundary and holes from their definitions."""
    edges = np.unique(np.asarray(edges, np.int64))
    loc = _Local(g, edges)
    verts = loc.verts
    bmask = loc.boundary_vertex.astype(bool)
    boundary = set(verts[bmask].tolist())
    walks = []
    for f in np.flatnonzero(loc.boundary_face).tolist():
        walk = loc.face(f)
        lv = np.unique(loc.tail[walk])
        touched = int(bmask[lv].sum())
        parent = (2 * edges[walk >> 1] + (walk & 1)).tolist()
        walks.append((-touched, f, parent))
    walks.sort(key=lambda x: (x[0], x[1]))
    external = walks[0][2] if walks else None
    holes = [w for _, _, w in walks[1:]]
    return Piece(edges, boundary, holes, g, verts, external, tracked, loc)


# ---------------------------------------------------------------------------
# splitting
# ---------------------------------------------------------------------------

def _separate(piece: Piece, mode: str) -> tuple[np.ndarray, np.ndarray]:
    """Edge sets on the two sides of a separator of ``piece``."""
    loc = piece.local()
    t = triangulate_faces(loc.n, loc.tail, loc.face_ptr, loc.face_darts, loc.boundary_face)
    w = np.zeros(t.n, np.int64)
    if mode == "holes" and loc.boundary_face.any():
        w[t.centres[loc.boundary_face.astype(bool)]] = 1
    elif mode == "boundary" and loc.boundary_vertex.any():
        w[:loc.n] = loc.boundary_vertex
    else:
        w[:loc.n] = 1
    sep = fundamental_cycle_separator(t, w)
    mask = sep.inside_faces
    face_of = t.face_of()
    k = len(piece.edges)
    inside = (mask[face_of[0:2 * k:2]] | mask[face_of[1:2 * k:2]]).astype(bool)
    a, b = piece.edges[inside], piece.edges[~inside]
    if len(a) == 0 or len(b) == 0:
        return _halve(piece)
    return a, b


def _halve(piece: Piece) -> tuple[np.ndarray, np.ndarray]:
    """Fallback split: edges in breadth-first discovery order, cut in half."""
    loc = piece.local()
    tail = loc.tail.tolist()
    ptr = loc.rot_ptr.tolist()
    rot = loc.rot.tolist()
    seen = bytearray(loc.n)
    seen[0] = 1
    queue = deque([0])
    order = []
    taken = bytearray(len(piece.edges))
    while queue:
        v = queue.popleft()
        for d in rot[ptr[v]:ptr[v + 1]]:
            e = d >> 1
            if not taken[e]:
                taken[e] = 1
                order.append(e)
            u = tail[d ^ 1]
            if not seen[u]:
                seen[u] = 1
                queue.append(u)
    half = (len(order) + 1) // 2
    order = np.array(order, np.int64)
    return piece.edges[order[:half]], piece.edges[order[half:]]


def _components(g: PlaneGraph, edges: np.ndarray) -> list[np.ndarray]:
    """Split an edge set into connected pieces (by shared endpoints)."""
    ga = g.arrays()
    labels, count = _kernels.edge_components(edges, ga.tail, ga.vmark)
    if count == 1:
        return [edges]
    order = np.argsort(labels, kind="stable")
    cuts = np.flatnonzero(np.diff(labels[order])) + 1
    return np.split(edges[order], cuts)


def _children(piece: Piece, sides) -> list[list[Piece]]:
    g = piece.parent_graph
    groups = [_components(g, side) for side in sides]
    pieces = [[make_piece(g, comp) for comp in side] for side in groups]
    allv = np.concatenate([c.vertices for side in pieces for c in side])
    vals, counts = np.unique(allv, return_counts=True)
    shared = set(vals[counts > 1].tolist())
    base = piece.tracked_boundary if piece.tracked_boundary is not None else piece.boundary
    known = base | shared
    for side in pieces:
        for child in side:
            child.tracked_boundary = {v for v in child.vertices.tolist() if v in known}
    piece.release()
    return pieces


def split_piece(piece: Piece, mode: str = "uniform") -> tuple[list[Piece], list[Piece]]:
    """One separator split; each side comes back as its connected pieces."""
    if len(piece.edges) <= 1:
        return [piece], []
    a, b = _children(piece, _separate(piece, mode))
    return a, b


def _fix_holes(pieces: list[Piece], h_max: int) -> list[Piece]:
    """Re-split with hole-contraction weights until every piece is within ``h_max``."""
    out = []
    stack = list(pieces)
    while stack:
        p = stack.pop()
        if p.num_holes <= h_max or len(p.edges) <= 1:
            out.append(p)
            continue
        a, b = split_piece(p, "holes")
        stack.extend(a + b)
    return out


def split_piece_bounded_holes(p: Piece, h_max: int = H_MAX, mode: str = "uniform"):
    """Split ``p`` by ``mode`` weights and repair hole counts.

    Returns ``(P1, P2, P3)`` as lists of connected pieces: ``P1`` is the side
    with fewer holes, ``P2`` and ``P3`` come from re-splitting the other side
    with hole-contraction weights (``P3`` is empty when no re-split was
    needed).
    """
    if p.num_holes > h_max:
        raise TooManyHoles(f"piece has {p.num_holes} holes, more than {h_max}")
    a, b = split_piece(p, mode)
    if sum(x.num_holes for x in a) > sum(x.num_holes for x in b):
        a, b = b, a
    p1 = _fix_holes(a, h_max)
    if all(x.num_holes <= h_max for x in b):
        return p1, b, []
    keep = [x for x in b if x.num_holes <= h_max]
    p2, p3 = [], []
    for x in b:
        if x.num_holes > h_max:
            s2, s3 = split_piece(x, "holes")
            p2 += _fix_holes(s2, h_max)
            p3 += _fix_holes(s3, h_max)
    return p1, keep + p2, p3


# ---------------------------------------------------------------------------
# divisions
# ---------------------------------------------------------------------------

@dataclass
class Division:
    pieces: list[Piece]
    r: int
    graph: PlaneGraph = field(repr=False)
    h_max: int = H_MAX
    builder: str = ""

    def total_boundary(self) -> int:
        return sum(len(p.boundary) for p in self.pieces)

    def violations(self, c_size=C_SIZE, c_boundary=C_BOUNDARY, c_pieces=C_PIECES,
                   c_total=C_TOTAL_BOUNDARY, per_piece_boundary=True) -> list[str]:
        """Human-readable list of broken invariants (empty when all hold)."""
        g = self.graph
        out = []
        seen = np.zeros(g.m, np.int64)
        for p in self.pieces:
            np.add.at(seen, p.edges, 1)
        bad = int((seen != 1).sum())
        if bad:
            out.append(f"{bad} edges not in exactly one piece")
        if len(self.pieces) > 1 or g.n > self.r:
            limit_b = c_boundary * math.sqrt(self.r)
            for i, p in enumerate(self.pieces):
                if p.num_vertices > c_size * self.r:
                    out.append(f"piece {i}: {p.num_vertices} vertices > {c_size}r")
                if per_piece_boundary and len(p.boundary) > limit_b:
                    out.append(f"piece {i}: {len(p.boundary)} boundary > {limit_b:.1f}")
                if p.num_holes > self.h_max:
                    out.append(f"piece {i}: {p.num_holes} holes > {self.h_max}")
            if len(self.pieces) > c_pieces * g.n / self.r:
                out.append(f"{len(self.pieces)} pieces > {c_pieces}n/r")
            if self.total_boundary() > c_total * g.n / math.sqrt(self.r):
                out.append(f"total boundary {self.total_boundary()} > {c_total}n/sqrt(r)")
        return out

    def stats_rows(self) -> list[tuple[int, int, int, int, int]]:
        return [(i, p.num_vertices, len(p.edges), len(p.boundary), p.num_holes)
                for i, p in enumerate(self.pieces)]


def _check_r(g: PlaneGraph, r) -> None:
    if not isinstance(r, int) or isinstance(r, bool) or r <= 0:
        raise InvalidR(f"r must be a positive integer, got {r!r}")
    if not g.is_connected():
        raise Disconnected("divisions need a connected graph")


def _sorted(pieces: list[Piece]) -> list[Piece]:
    for p in pieces:
        p.release()
    return sorted(pieces, key=lambda p: int(p.edges[0]) if len(p.edges) else -1)


def _weak(start: list[Piece], r: int, h_max: int) -> list[Piece]:
    done = []
    stack = list(start)
    while stack:
        p = stack.pop()
        if p.num_vertices <= r or len(p.edges) <= 1:
            done.append(p)
            continue
        p1, p2, p3 = split_piece_bounded_holes(p, h_max)
        stack += p1 + p2 + p3
    return done


def _refine_boundary(pieces: list[Piece], r: int, h_max: int, c_boundary: float) -> list[Piece]:
    limit = c_boundary * math.sqrt(r)
    done = []
    stack = list(pieces)
    while stack:
        p = stack.pop()
        if len(p.boundary) <= limit or len(p.edges) <= 1:
            done.append(p)
            continue
        p1, p2, p3 = split_piece_bounded_holes(p, h_max, mode="boundary")
        stack += p1 + p2 + p3
    return done


def _whole(g: PlaneGraph) -> Piece:
    p = make_piece(g, np.arange(g.m))
    p.tracked_boundary = set()
    return p


def weak_r_division(g: PlaneGraph, r: int, h_max: int = H_MAX) -> Division:
    """Recursive uniform-weight splitting until every piece has at most ``r`` vertices."""
    _check_r(g, r)
    return Division(_sorted(_weak([_whole(g)], r, h_max)), r, g, h_max, "weak")


def r_division(g: PlaneGraph, r: int, h_max: int = H_MAX, c_boundary: float = C_BOUNDARY) -> Division:
    """Weak division refined until every piece has at most ``c_boundary * sqrt(r)`` boundary vertices."""
    _check_r(g, r)
    pieces = _weak([_whole(g)], r, h_max)
    pieces = _refine_boundary(pieces, r, h_max, c_boundary)
    return Division(_sorted(pieces), r, g, h_max, "lemma3")


# ---------------------------------------------------------------------------
# contraction-based division
# ---------------------------------------------------------------------------

@dataclass
class Subtree:
    vertices: list[int]
    edges: list[int]


def partition_spanning_tree(g: PlaneGraph, target: int) -> list[Subtree]:
    """Cut a breadth-first spanning tree into connected clusters of about ``target`` vertices.

    Clusters are grown bottom-up: a vertex collects the uncut clusters of
    its children and is cut off once the total reaches ``target``.  When the
    total would exceed ``4 * target`` the children carrying at least a
    quarter of ``target`` become clusters of their own.  The cluster left at
    the root may be smaller than the others.
    """
    n = g.n
    if n == 0:
        return []
    target = max(1, int(target))
    quarter = max(1, target // 4)
    tail = g.tail
    parent = [-1] * n
    pdart = [-1] * n
    seen = bytearray(n)
    order = []
    for s in range(n):
        if seen[s]:
            continue
        seen[s] = 1
        order.append(s)
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for d in g.rotation[v]:
                u = tail[d ^ 1]
                if not seen[u]:
                    seen[u] = 1
                    parent[u] = v
                    pdart[u] = d
                    order.append(u)
                    queue.append(u)
    pend = [1] * n
    kids: list[list[int]] = [[] for _ in range(n)]
    head = bytearray(n)
    for v in reversed(order):
        total = pend[v] + sum(pend[c] for c in kids[v])
        if total > 4 * target:
            small = []
            for c in kids[v]:
                if pend[c] >= quarter:
                    head[c] = 1
                else:
                    small.append(c)
            total = 1 + _group_light(g, small, kids, pend, parent, pdart, head, target)
        if total >= target or parent[v] < 0:
            head[v] = 1
        else:
            pend[v] = total
            kids[parent[v]].append(v)
            continue
        pend[v] = total
    label = [-1] * n
    clusters: list[Subtree] = []
    for v in order:
        trail = []
        x = v
        while label[x] < 0 and not head[x] and parent[x] >= 0:
            trail.append(x)
            x = parent[x]
        if label[x] < 0:
            label[x] = len(clusters)
            clusters.append(Subtree([x], []))
        for y in trail:
            label[y] = label[x]
            c = clusters[label[x]]
            c.vertices.append(y)
            c.edges.append(pdart[y] >> 1)
    return clusters


def _group_light(g, small, kids, pend, parent, pdart, head, target) -> int:
    """Group light children of a heavy vertex into clusters that bypass it.

    Two children are linked when an edge joins their pending subtrees.
    Groups grow breadth-first over these links, in rotation order, up to
    ``target``; one reaching a quarter of ``target`` becomes a cluster, its
    subtrees re-hung from each other through the linking edges.  Returns the weight left hanging
    from the heavy vertex.
    """
    pos = g.pos
    tail = g.tail
    small.sort(key=lambda c: pos[pdart[c]])
    owner = {}
    for c in small:
        stack = [c]
        while stack:
            x = stack.pop()
            owner[x] = c
            stack.extend(kids[x])
    links: dict[int, list[tuple[int, int]]] = {c: [] for c in small}
    for x, c in owner.items():
        for d in g.rotation[x]:
            o = owner.get(tail[d ^ 1], c)
            if o != c:
                links[c].append((o, d))
    done = set()
    left = 0
    for c in small:
        if c in done:
            continue
        group = [(c, -1)]
        seen = {c}
        weight = pend[c]
        k = 0
        while k < len(group) and weight < target:
            for o, d in links[group[k][0]]:
                if o not in seen and o not in done and weight < target:
                    seen.add(o)
                    group.append((o, d))
                    weight += pend[o]
            k += 1
        if weight < max(1, target // 4):
            left += pend[c]
            done.add(c)
            continue
        done.update(seen)
        head[c] = 1
        for o, d in group[1:]:
            _rehang(tail[d ^ 1], o, tail[d], d, parent, pdart)
    return left


def _rehang(y, root, x, d, parent, pdart) -> None:
    """Re-root the pending subtree of ``root`` at ``y`` and hang it from ``x`` by dart ``d``."""
    chain = [y]
    while chain[-1] != root:
        chain.append(parent[chain[-1]])
    darts = [pdart[z] for z in chain[:-1]]
    for z, nxt, dz in zip(chain, chain[1:], darts):
        parent[nxt] = z
        pdart[nxt] = dz ^ 1
    parent[y] = x
    pdart[y] = d


@dataclass
class ContractedGraph:
    """Clusters contracted (``graph``), bigons merged (``thin``) and edges subdivided (``subdivided``).

    Vertex ``b`` of ``graph`` and ``thin`` is cluster ``b``.  ``bundles[j]``
    lists the original edges carried by edge ``j`` of ``thin``.  In
    ``subdivided`` the first ``len(tree_map)`` vertices are black (clusters)
    and white vertex ``len(tree_map) + j`` sits on edge ``j`` of ``thin``,
    whose two halves are edges ``2j`` and ``2j + 1``.
    """

    graph: PlaneGraph
    color: list[str]
    tree_map: list[list[int]]
    tree_edges: list[list[int]]
    loop_edges: list[list[int]]
    thin: PlaneGraph
    bundles: list[list[int]]
    subdivided: PlaneGraph


def _contract(g: PlaneGraph, label: list[int], k: int, tree: bytearray):
    """Rotation system of ``g`` with every cluster contracted to one vertex.

    Walking around a cluster's spanning tree lists the darts that leave it
    in rotation order; darts of edges inside the cluster become loops and
    are dropped.
    """
    tail = g.tail
    rotation = g.rotation
    pos = g.pos
    firsts = [-1] * k
    for v in range(g.n):
        c = label[v]
        if firsts[c] < 0 and rotation[v]:
            firsts[c] = rotation[v][0]
    rot_out = []
    for c in range(k):
        x0 = firsts[c]
        row = []
        if x0 >= 0:
            x = x0
            while True:
                rv = rotation[tail[x]]
                y = rv[(pos[x] + 1) % len(rv)]
                if tree[y >> 1]:
                    x = y ^ 1
                else:
                    if label[tail[y ^ 1]] != c:
                        row.append(y)
                    x = y
                if x == x0:
                    break
        rot_out.append(row)
    return rot_out


def contract_and_thin(g: PlaneGraph, subtrees: list[Subtree]) -> ContractedGraph:
    """Contract clusters, identify bigons, then subdivide every remaining edge."""
    k = len(subtrees)
    label = [-1] * g.n
    for c, st in enumerate(subtrees):
        for v in st.vertices:
            label[v] = c
    tree = bytearray(g.m)
    for st in subtrees:
        for e in st.edges:
            tree[e] = 1
    loops: list[list[int]] = [[] for _ in range(k)]
    inter = []
    for e in range(g.m):
        a, b = label[g.tail[2 * e]], label[g.tail[2 * e + 1]]
        if a == b:
            if not tree[e]:
                loops[a].append(e)
        else:
            inter.append(e)
    rot = _contract(g, label, k, tree)
    # contracted multigraph: keep original edge ids through a renumbering
    new_id = {e: i for i, e in enumerate(inter)}
    ctail = []
    for e in inter:
        ctail += [label[g.tail[2 * e]], label[g.tail[2 * e + 1]]]
    crot = [[2 * new_id[d >> 1] | (d & 1) for d in row] for row in rot]
    contracted = PlaneGraph(k, ctail, crot, [1] * len(inter), check_euler=False)

    # identify bigons with a work list over rotation neighbours
    nxt = {}
    prv = {}
    for row in crot:
        for i, d in enumerate(row):
            nxt[d] = row[(i + 1) % len(row)]
            prv[d] = row[i - 1]
    alive = [True] * len(inter)
    members = [[e] for e in inter]
    work = [d for row in crot for d in row]
    while work:
        x = work.pop()
        if not alive[x >> 1]:
            continue
        y = nxt[x]
        if y == x or not alive[y >> 1] or (x >> 1) == (y >> 1):
            continue
        if ctail[x ^ 1] != ctail[y ^ 1] or nxt[y ^ 1] != (x ^ 1):
            continue
        # x and y bound a bigon: fold y's edge into x's
        alive[y >> 1] = False
        members[x >> 1] += members[y >> 1]
        for d in (y, y ^ 1):
            p, q = prv[d], nxt[d]
            nxt[p] = q
            prv[q] = p
        work.append(x)
        work.append(prv[x])
        work.append(x ^ 1)
        work.append(prv[x ^ 1])
    keep = [i for i in range(len(inter)) if alive[i]]
    renum = {i: j for j, i in enumerate(keep)}
    ttail = []
    for i in keep:
        ttail += [ctail[2 * i], ctail[2 * i + 1]]
    trot = []
    for row in crot:
        out = []
        if row:
            start = next((d for d in row if alive[d >> 1]), None)
            if start is not None:
                d = start
                while True:
                    out.append(2 * renum[d >> 1] | (d & 1))
                    d = nxt[d]
                    if d == start:
                        break
        trot.append(out)
    bundles = [members[i] for i in keep]
    thin = PlaneGraph(k, ttail, trot, [1] * len(keep), check_euler=False)

    # subdivide: half-edges 2j (black tail -> white) and 2j + 1 (white -> black head)
    mt = len(keep)
    stail = []
    for j in range(mt):
        u, v = ttail[2 * j], ttail[2 * j + 1]
        w = k + j
        stail += [u, w, w, v]
    srot = [[4 * (d >> 1) if not d & 1 else 4 * (d >> 1) + 3 for d in row] for row in trot]
    srot += [[4 * j + 1, 4 * j + 2] for j in range(mt)]
    sub = PlaneGraph(k + mt, stail, srot, [1] * (2 * mt), check_euler=False)
    color = ["black"] * k + ["white"] * mt
    return ContractedGraph(contracted, color, [st.vertices for st in subtrees],
                           [st.edges for st in subtrees], loops, thin, bundles, sub)


def fast_r_division(g: PlaneGraph, r: int, h_max: int = H_MAX, c_boundary: float = C_BOUNDARY) -> Division:
    """r-division through a contracted graph of about ``n / sqrt(r)`` vertices.

    Clusters of about ``sqrt(r)`` vertices are contracted and thinned, the
    subdivided result is divided, and every piece of it is expanded back.
    A cluster's own edges go to the first coarse piece holding it.  The
    expanded pieces are then refined against the original graph and small
    leftovers merged into neighbours.
    """
    _check_r(g, r)
    if g.n <= r or g.m == 0:
        return Division([_release(_whole(g))], r, g, h_max, "fast")
    clusters = partition_spanning_tree(g, math.isqrt(r))
    if len(clusters) <= 2:
        return r_division(g, r, h_max, c_boundary)
    cg = contract_and_thin(g, clusters)
    k = len(clusters)
    sub = cg.subdivided
    coarse = r_division(sub, r, h_max, c_boundary) if sub.n > r else None
    coarse_pieces = coarse.pieces if coarse else [_whole(sub)]
    # each cluster's inner edges go to the first coarse piece holding it
    owner = [0] * k
    seen = bytearray(k)
    for i, q in enumerate(coarse_pieces):
        for v in q.vertices.tolist():
            if v < k and not seen[v]:
                seen[v] = 1
                owner[v] = i
    expanded = [[] for _ in coarse_pieces]
    for i, q in enumerate(coarse_pieces):
        for e in q.edges.tolist():
            if not e & 1:
                expanded[i] += cg.bundles[e >> 1]
    for b in range(k):
        expanded[owner[b]] += cg.tree_edges[b] + cg.loop_edges[b]
    expanded = [edges for edges in expanded if edges]
    start = []
    for edges in expanded:
        for comp in _components(g, np.asarray(edges, np.int64)):
            start.append(make_piece(g, comp))
    for p in start:
        p.tracked_boundary = None
    pieces = _fix_holes(start, h_max)
    pieces = _weak(pieces, r, h_max)
    pieces = _refine_boundary(pieces, r, h_max, c_boundary)
    pieces = _merge_small(g, pieces, r, h_max, c_boundary)
    return Division(_sorted(pieces), r, g, h_max, "fast")


def _merge_small(g: PlaneGraph, pieces: list[Piece], r: int, h_max: int,
                 c_boundary: float) -> list[Piece]:
    """Fold pieces of fewer than ``r / 2`` vertices into a neighbour when the union stays within bounds.

    Expansion leaves fragments behind where cluster bundles split; merging
    them keeps the piece count near ``n / r``.
    """
    limit_b = c_boundary * math.sqrt(r)
    alive: dict[int, Piece] = dict(enumerate(pieces))
    at: dict[int, set[int]] = {}
    for i, p in alive.items():
        for v in p.boundary:
            at.setdefault(v, set()).add(i)
    nxt = len(pieces)
    small = sorted((p.num_vertices, i) for i, p in alive.items() if 2 * p.num_vertices < r)
    for _, i in small:
        p = alive.get(i)
        if p is None:
            continue
        shared: dict[int, int] = {}
        for v in p.boundary:
            for j in at[v]:
                if j != i:
                    shared[j] = shared.get(j, 0) + 1
        for j in sorted(shared, key=lambda j: (-shared[j], alive[j].num_vertices)):
            q = alive[j]
            if p.num_vertices + q.num_vertices - shared[j] > C_SIZE * r:
                continue
            u = make_piece(g, np.concatenate([p.edges, q.edges]))
            if u.num_vertices > C_SIZE * r or len(u.boundary) > limit_b or u.num_holes > h_max:
                continue
            u.release()
            for k, old in ((i, p), (j, q)):
                del alive[k]
                for v in old.boundary:
                    at[v].discard(k)
            alive[nxt] = u
            for v in u.boundary:
                at.setdefault(v, set()).add(nxt)
            nxt += 1
            break
    return list(alive.values())


def _release(p: Piece) -> Piece:
    p.release()
    return p
