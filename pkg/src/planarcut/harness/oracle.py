"""Independent max-flow oracle (Dinic) on exact integer capacities.

The oracle only looks at the edge list; it never touches the embedding or
any shortest-path code, so agreement with the cut engine is meaningful.
"""
from __future__ import annotations

import math
from collections import deque

INF = math.inf


def max_flow(n: int, edges, s: int, t: int):
    """Value of a maximum s-t flow in an undirected graph.

    ``edges`` holds ``(u, v, capacity)`` triples with non-negative integer
    capacities or ``INF``.  Infinite capacities are replaced by a sentinel
    larger than every finite cut; a flow reaching it means no finite cut
    exists and ``INF`` is returned.
    """
    if s == t:
        raise ValueError("source and sink coincide")
    finite = sum(c for _, _, c in edges if c != INF)
    big = finite + 1
    head: list[int] = []
    cap: list[int] = []
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v, c in edges:
        if u == v:
            continue
        c = big if c == INF else c
        adj[u].append(len(head))
        head.append(v)
        cap.append(c)
        adj[v].append(len(head))
        head.append(u)
        cap.append(c)

    flow = 0
    while True:
        level = [-1] * n
        level[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for a in adj[v]:
                if cap[a] > 0 and level[head[a]] < 0:
                    level[head[a]] = level[v] + 1
                    queue.append(head[a])
        if level[t] < 0:
            break
        it = [0] * n
        while True:
            pushed = _augment(s, t, adj, head, cap, level, it)
            if not pushed:
                break
            flow += pushed
            if flow >= big:
                return INF
    return flow


def _augment(s, t, adj, head, cap, level, it):
    """Find one blocking-flow path with an explicit stack and push along it."""
    path: list[int] = []
    v = s
    while True:
        if v == t:
            amount = min(cap[a] for a in path)
            for a in path:
                cap[a] -= amount
                cap[a ^ 1] += amount
            return amount
        arcs = adj[v]
        advanced = False
        while it[v] < len(arcs):
            a = arcs[it[v]]
            u = head[a]
            if cap[a] > 0 and level[u] == level[v] + 1:
                path.append(a)
                v = u
                advanced = True
                break
            it[v] += 1
        if advanced:
            continue
        if not path:
            return 0
        level[v] = -1
        a = path.pop()
        v = head[a ^ 1]
        it[v] += 1


def maxflow_oracle(graph, s: int, t: int):
    """Max-flow value for a ``PlaneGraph`` using only its edge list."""
    return max_flow(graph.n, graph.edges(), s, t)
