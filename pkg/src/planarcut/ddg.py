"""Dense distance graphs: exact boundary-to-boundary distances inside pieces.

Distances are computed with one Dijkstra run per boundary vertex over the
piece's own edges.  Edge costs are two-part integer keys ``(weight, noise)``
compared lexicographically; with zero noise this is plain weighted distance
with ties broken by vertex id and then dart id.

``DDGSet`` holds the matrices of every piece of a division in flat arrays
so that the coarse search can run compiled; ``DenseDistanceGraph`` is the
per-piece view.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import Unreachable
from .plane_graph import INF, CutOpenGraph, PlaneGraph
from .rdivision import Division, Piece, make_piece


def weight_keys(g: PlaneGraph) -> tuple[np.ndarray, np.ndarray, int]:
    """Two-part keys for plain weights and the cost standing in for an infinite edge.

    An infinite edge costs more than all finite edges together, so any path
    at or above that cost uses one.
    """
    big = sum(w for w in g.weight if w != INF) + 1
    kw = np.array([big if w == INF else w for w in g.weight], np.int64)
    return kw, np.zeros(g.m, np.int64), big


def scheme_keys(keys: list[int], shift: int) -> tuple[np.ndarray, np.ndarray]:
    """Split combined integer keys ``weight << shift | noise`` into their parts."""
    low = (1 << shift) - 1
    kw = np.array([k >> shift for k in keys], np.int64)
    kn = np.array([k & low for k in keys], np.int64)
    return kw, kn


def boundary_order(piece: Piece) -> list[int]:
    """Boundary vertices face by face (external first), in walk order around each face."""
    g = piece.parent_graph
    out = []
    seen = set()
    faces = ([piece.external] if piece.external else []) + list(piece.holes)
    for walk in faces:
        for d in walk:
            v = g.tail[d]
            if v in piece.boundary and v not in seen:
                seen.add(v)
                out.append(v)
    out += sorted(piece.boundary - seen)
    return out


class DDGSet:
    """Dense distance graphs of a list of pieces of one graph.

    Piece ``q`` has boundary ``bverts[bptr[q]:bptr[q+1]]``; the distance from
    its ``i``-th to its ``j``-th boundary vertex is ``(dw, dn)[moff[q] + i*b + j]``
    with ``dw == -1`` meaning unreachable.  ``mem_*`` is the inverse map from
    a vertex to the pieces it is a boundary vertex of.
    """

    def __init__(self, g: PlaneGraph, pieces: list[Piece], kw: np.ndarray, kn: np.ndarray,
                 boundaries: list[list[int]] | None = None, big: int | None = None):
        self.graph = g
        self.big = big
        self.pieces = pieces
        self.kw = np.asarray(kw, np.int64)
        self.kn = np.asarray(kn, np.int64)
        if boundaries is None:
            boundaries = [boundary_order(p) for p in pieces]
        self.boundaries = boundaries
        sizes = np.array([len(b) for b in boundaries], np.int64)
        self.bptr = np.zeros(len(pieces) + 1, np.int64)
        np.cumsum(sizes, out=self.bptr[1:])
        self.bverts = np.fromiter((v for b in boundaries for v in b), np.int64, int(self.bptr[-1]))
        esz = np.array([p.num_edges for p in pieces], np.int64)
        self.piece_ptr = np.zeros(len(pieces) + 1, np.int64)
        np.cumsum(esz, out=self.piece_ptr[1:])
        self.piece_edges = (np.concatenate([p.edges for p in pieces]) if pieces
                            else np.zeros(0, np.int64))
        ga = g.arrays()
        self.dw, self.dn, self.moff = _kernels.ddg_all(
            ga.tail, self.kw, self.kn, self.piece_ptr, self.piece_edges,
            self.bptr, self.bverts, ga.vmark)
        owner = np.repeat(np.arange(len(pieces), dtype=np.int64), sizes)
        local = np.arange(len(self.bverts), dtype=np.int64) - np.repeat(self.bptr[:-1], sizes)
        order = np.argsort(self.bverts, kind="stable")
        self.mem_q = owner[order]
        self.mem_i = local[order]
        counts = np.bincount(self.bverts, minlength=g.n)
        self.mem_ptr = np.zeros(g.n + 1, np.int64)
        np.cumsum(counts, out=self.mem_ptr[1:])
        self._trees: dict[tuple[int, int], tuple[np.ndarray, dict]] = {}
        self.tree_builds = 0

    def __len__(self) -> int:
        return len(self.pieces)

    def size(self, q: int) -> int:
        return int(self.bptr[q + 1] - self.bptr[q])

    def vertex(self, q: int, i: int) -> int:
        return int(self.bverts[self.bptr[q] + i])

    def key(self, q: int, i: int, j: int) -> tuple[int, int] | None:
        k = int(self.moff[q] + i * self.size(q) + j)
        w = int(self.dw[k])
        return None if w < 0 else (w, int(self.dn[k]))

    def _tree(self, q: int, root: int):
        hit = self._trees.get((q, root))
        if hit is None:
            ga = self.graph.arrays()
            edges = self.piece_edges[self.piece_ptr[q]:self.piece_ptr[q + 1]]
            verts, par = _kernels.source_tree(edges, ga.tail, self.kw, self.kn, root, ga.vmark)
            hit = (par.tolist(), {v: i for i, v in enumerate(verts.tolist())})
            self._trees[(q, root)] = hit
            self.tree_builds += 1
        return hit

    def walk(self, q: int, i: int, j: int):
        """Darts of the shortest path from boundary vertex ``i`` to ``j`` of piece ``q``, in order."""
        if self.key(q, i, j) is None:
            raise Unreachable(f"no path between boundary vertices {i} and {j} of piece {q}")
        target = self.vertex(q, j)
        par, index = self._tree(q, target)
        tail = self.graph.tail
        x = self.vertex(q, i)
        while x != target:
            d = par[index[x]]
            yield d ^ 1
            x = tail[d]

    def view(self, q: int) -> "DenseDistanceGraph":
        b = self.size(q)
        big = self.big
        dist = []
        for i in range(b):
            row = []
            for j in range(b):
                k = self.key(q, i, j)
                row.append(INF if k is None or (big is not None and k[0] >= big) else k[0])
            dist.append(row)
        return DenseDistanceGraph(self.pieces[q], self.boundaries[q], dist, self, q)


@dataclass
class DenseDistanceGraph:
    """Boundary distance matrix of one piece with path recovery.

    ``dist[i][j]`` is the exact in-piece distance between ``boundary[i]``
    and ``boundary[j]`` (``INF`` when unreachable).
    """

    piece: Piece
    boundary: list[int]
    dist: list[list]
    path_handles: DDGSet = field(repr=False)
    index: int = 0

    def __post_init__(self):
        self.position = {v: i for i, v in enumerate(self.boundary)}


def build_ddg(piece: Piece, keys: tuple[np.ndarray, np.ndarray] | None = None) -> DenseDistanceGraph:
    """Dense distance graph of ``piece`` under its parent graph's weights.

    ``keys`` optionally replaces the weights by two-part keys; the matrix
    then reports the weight part.
    """
    g = piece.parent_graph
    if keys is None:
        kw, kn, big = weight_keys(g)
    else:
        (kw, kn), big = keys, None
    return DDGSet(g, [piece], kw, kn, big=big).view(0)


def recover_path(ddg: DenseDistanceGraph, i: int, j: int):
    """Shortest path from ``boundary[i]`` to ``boundary[j]`` inside the piece.

    Darts are yielded one at a time from the ``i`` end, so a caller may stop
    early.  Raises ``Unreachable`` if the pair is disconnected in the piece.
    """
    if ddg.path_handles.key(ddg.index, i, j) is None:
        raise Unreachable("boundary vertices are not connected inside the piece")
    return ddg.path_handles.walk(ddg.index, i, j)


# ---------------------------------------------------------------------------
# incision
# ---------------------------------------------------------------------------

def incise_pieces(div: Division, sliced: CutOpenGraph) -> Division:
    """Carry a division of a graph over to the graph sliced open along a path.

    Every edge of the sliced graph goes to the piece of the edge it was
    copied from.  Boundaries are recomputed in the sliced graph, and both
    sides of each path vertex that was a boundary vertex stay boundary
    vertices wherever they appear.
    """
    g = sliced.graph
    src = div.graph
    piece_of = np.empty(src.m, np.int64)
    for q, p in enumerate(div.pieces):
        piece_of[p.edges] = q
    origin = np.asarray(sliced.edge_origin, np.int64)
    owner = piece_of[origin]
    order = np.argsort(owner, kind="stable")
    cuts = np.searchsorted(owner[order], np.arange(len(div.pieces) + 1))
    was_boundary = set()
    for p in div.pieces:
        was_boundary |= p.boundary
    path_boundary = {v for v in sliced.p_seq if v in was_boundary}
    copies = {c for c, v in sliced.origin.items() if v in path_boundary}
    marked = path_boundary | copies
    pieces = []
    for q in range(len(div.pieces)):
        edges = order[cuts[q]:cuts[q + 1]]
        p = make_piece(g, edges)
        extra = marked.intersection(p.vertices.tolist())
        p.boundary |= extra
        p.tracked_boundary = None
        p.release()
        pieces.append(p)
    return Division(pieces, div.r, g, div.h_max, "incised")
