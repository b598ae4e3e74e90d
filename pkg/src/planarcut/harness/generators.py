"""Deterministic planar instance families.

Every generator is a pure function of ``(family, n, seed, wmin, wmax)``.
Grids are laid out with row ``i`` at height ``i`` and column ``j`` at
abscissa ``j``, so counterclockwise neighbour order is E, (NE), N, W, (SW), S.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass

from ..errors import BadParams
from ..plane_graph import PlaneGraph

FAMILIES = ("grid", "tri-grid", "random-planar")


@dataclass
class Instance:
    graph: PlaneGraph
    s: int
    t: int
    family: str = ""
    seed: int = 0


def grid_shape(n: int) -> tuple[int, int]:
    """Rows and columns of the near-square grid used for ``n`` vertices."""
    rows = max(1, math.isqrt(n))
    return rows, max(1, n // rows)


def _from_neighbour_lists(nbrs: list[list[int]], weights) -> PlaneGraph:
    """Build a simple plane graph from ccw neighbour lists."""
    eid: dict[tuple[int, int], int] = {}
    edges = []
    for u, lst in enumerate(nbrs):
        for v in lst:
            if u < v:
                eid[(u, v)] = len(edges)
                edges.append((u, v, weights(len(edges))))
    rotations = [[eid[(min(u, v), max(u, v))] for v in lst] for u, lst in enumerate(nbrs)]
    return PlaneGraph.build(edges, rotations, n=len(nbrs))


def grid_graph(rows: int, cols: int, weights, diagonals: bool = False) -> PlaneGraph:
    def vid(i, j):
        return i * cols + j

    nbrs = []
    for i in range(rows):
        for j in range(cols):
            lst = []
            if j + 1 < cols:
                lst.append(vid(i, j + 1))
            if diagonals and i + 1 < rows and j + 1 < cols:
                lst.append(vid(i + 1, j + 1))
            if i + 1 < rows:
                lst.append(vid(i + 1, j))
            if j > 0:
                lst.append(vid(i, j - 1))
            if diagonals and i > 0 and j > 0:
                lst.append(vid(i - 1, j - 1))
            if i > 0:
                lst.append(vid(i - 1, j))
            nbrs.append(lst)
    return _from_neighbour_lists(nbrs, weights)


def stacked_triangulation(n: int, rng: random.Random, weights) -> PlaneGraph:
    """Random maximal planar graph grown by repeatedly splitting a random face."""
    if n == 2:
        return _from_neighbour_lists([[1], [0]], weights)
    nbrs = [[1, 2], [2, 0], [0, 1]]
    faces = [(0, 1, 2), (0, 2, 1)]
    for x in range(3, n):
        k = rng.randrange(len(faces))
        a, b, c = faces[k]
        for u, after in ((a, b), (b, c), (c, a)):
            lst = nbrs[u]
            lst.insert(lst.index(after) + 1, x)
        nbrs.append([a, b, c])
        faces[k] = (a, b, x)
        faces.append((b, c, x))
        faces.append((c, a, x))
    return _from_neighbour_lists(nbrs, weights)


def generate(family: str, n: int, seed: int = 0, wmin: int = 1, wmax: int = 100) -> Instance:
    """Produce an instance; ``s`` and ``t`` are drawn from the same seeded stream."""
    if family not in FAMILIES:
        raise BadParams(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    if n < 2:
        raise BadParams("n must be at least 2")
    if not (0 <= wmin <= wmax):
        raise BadParams("need 0 <= wmin <= wmax")
    rng = random.Random(f"{family}:{n}:{seed}")
    wrng = random.Random(f"w:{family}:{n}:{seed}")

    def weights(_):
        return wrng.randint(wmin, wmax)

    if family == "random-planar":
        g = stacked_triangulation(n, rng, weights)
    else:
        rows, cols = grid_shape(n)
        g = grid_graph(rows, cols, weights, diagonals=(family == "tri-grid"))
    s, t = rng.sample(range(g.n), 2)
    return Instance(g, s, t, family, seed)
