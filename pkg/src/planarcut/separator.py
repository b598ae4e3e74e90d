"""Simple-cycle separators for plane graphs.

The search works on a triangulation.  A breadth-first tree is grown from an
approximate centre; every non-tree edge closes a fundamental cycle, and the
non-tree edges form a spanning tree of the faces (the cotree).  One pass
over the cotree computes, for every fundamental cycle, the weight enclosed on
its cotree side.  Among balanced cycles of at most about ``sqrt(n)``
vertices the most balanced wins; otherwise the shortest balanced one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .errors import BadParams, Disconnected
from .plane_graph import INF, PlaneGraph

DEFAULT_C_SEP = 4


@dataclass
class SeparatorCycle:
    cycle: list[int]
    inside: set
    outside: set
    inside_faces: np.ndarray | None = None
    balanced: bool = True


class Triangulation:
    """Triangular faces over a dart set; all the separator search needs.

    The first darts are those of the source graph, with unchanged ids.
    ``centres[f]`` is the vertex placed inside source face ``f`` or ``-1``.
    """

    __slots__ = ("n", "tail", "faces", "centres")

    def __init__(self, n: int, tail: np.ndarray, faces: np.ndarray, centres: np.ndarray):
        self.n = n
        self.tail = tail
        self.faces = faces
        self.centres = centres

    @property
    def m(self) -> int:
        return len(self.tail) // 2

    def face_of(self) -> np.ndarray:
        out = np.empty(len(self.tail), np.int64)
        out[self.faces.ravel()] = np.repeat(np.arange(len(self.faces)), 3)
        return out


def face_arrays(faces) -> tuple[np.ndarray, np.ndarray]:
    """Face walks in CSR form: ``(pointers, darts)``."""
    ptr = np.zeros(len(faces) + 1, np.int64)
    ptr[1:] = np.cumsum([len(f) for f in faces])
    darts = np.fromiter((d for f in faces for d in f), np.int64, int(ptr[-1]))
    return ptr, darts


def triangulate_faces(n: int, tail, face_ptr, face_darts, starred=None) -> Triangulation:
    """Triangulate a plane graph given by its face walks in CSR form.

    Faces flagged in ``starred`` and faces shorter than three get a centre
    vertex joined to every corner; longer faces are fanned from a corner.
    """
    nf = len(face_ptr) - 1
    if starred is None:
        starred = np.zeros(nf, np.uint8)
    nn, t, tri, centre = _kernels.triangulate(
        n, np.asarray(tail, np.int64), face_ptr, face_darts, starred)
    return Triangulation(int(nn), t, tri, centre)


def triangulate(g: PlaneGraph) -> tuple[PlaneGraph, set[int]]:
    """Triangulate every face with infinite-weight edges.

    Faces longer than three are fanned from a corner; faces of length one or
    two (loops and bigons) get a new centre vertex.  Original darts keep their
    ids and added edges are numbered after them; their ids are returned.
    """
    ptr, darts = face_arrays(g.faces)
    t = triangulate_faces(g.n, g.tail, ptr, darts)
    if t.m == g.m:
        return g, set()
    return to_plane_graph(t, g.weight, g.scale), set(range(g.m, t.m))


def to_plane_graph(t: Triangulation, weight, scale: int = 0) -> PlaneGraph:
    """Rebuild rotations from the triangles (``succ(twin(a)) = next(a)``)."""
    tail = t.tail.tolist()
    succ = [0] * len(tail)
    for a, b, c in t.faces.tolist():
        succ[a ^ 1] = b
        succ[b ^ 1] = c
        succ[c ^ 1] = a
    first = [-1] * t.n
    for d, v in enumerate(tail):
        if first[v] < 0:
            first[v] = d
    rotation = []
    for v in range(t.n):
        rot = []
        d = first[v]
        if d >= 0:
            while True:
                rot.append(d)
                d = succ[d]
                if d == first[v]:
                    break
        rotation.append(rot)
    weight = list(weight) + [INF] * (t.m - len(weight))
    return PlaneGraph(t.n, tail, rotation, weight, scale)


def fundamental_cycle_separator(t: Triangulation, w) -> SeparatorCycle:
    """Best fundamental cycle of a connected triangulation under integer weights ``w``.

    ``inside_faces`` is a 0/1 mask over the triangles on the enclosed side.
    When no fundamental cycle balances the weight, the cycle minimising the
    heavier side is returned with ``balanced=False``.
    """
    w = np.asarray(w, np.int64)
    status, cycle, mask = _kernels.separator(t.n, t.tail, t.faces, w, math.isqrt(t.n) + 1)
    if status == -2:
        raise Disconnected("separator needs a connected graph")
    if status == -1:
        total = int(w.sum())
        return SeparatorCycle(list(range(t.n)), set(), set(), np.zeros(len(t.faces), np.uint8),
                              3 * int(w.max(initial=0)) <= 2 * total)
    cycle = cycle.tolist()
    on_cycle = set(cycle)
    touched = set(np.unique(t.tail[t.faces[mask.astype(bool)].ravel()]).tolist())
    inside = touched - on_cycle
    outside = set(range(t.n)) - touched - on_cycle
    return SeparatorCycle(cycle, inside, outside, mask, status == 1)


def integer_weights(w) -> list[int]:
    """Scale rational weights to integers; balance tests are scale-free."""
    w = [Fraction(x) for x in w]
    den = math.lcm(*(x.denominator for x in w)) if w else 1
    return [int(x * den) for x in w]


def cycle_separator(g: PlaneGraph, w=None) -> SeparatorCycle:
    """Cycle separator of a connected plane graph under vertex weights ``w``.

    The graph is triangulated first, so the cycle may use an added edge,
    which amounts to passing through a face.  Vertices added inside loops or
    bigons never appear in the returned sets.  Default weights are uniform.
    """
    if g.n == 0:
        raise BadParams("empty graph")
    if not g.is_connected():
        raise Disconnected("cycle_separator needs a connected graph")
    if w is None:
        w = [Fraction(1, g.n)] * g.n
    if len(w) != g.n or any(x < 0 for x in w):
        raise BadParams("weights must be non-negative, one per vertex")
    if g.m == 0:
        return SeparatorCycle([0], set(), set(), None, True)
    ptr, darts = face_arrays(g.faces)
    t = triangulate_faces(g.n, g.tail, ptr, darts)
    iw = integer_weights(w) + [0] * (t.n - g.n)
    sep = fundamental_cycle_separator(t, iw)
    if t.n > g.n:
        sep.cycle = [v for v in sep.cycle if v < g.n]
        sep.inside = {v for v in sep.inside if v < g.n}
        sep.outside = {v for v in sep.outside if v < g.n}
    return sep


def separator_bound(n: int, c_sep: float = DEFAULT_C_SEP) -> float:
    return c_sep * math.sqrt(n)
