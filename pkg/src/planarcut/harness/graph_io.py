"""JSON graph format.

``{"n": int, "edges": [[u, v, "weight"], ...], "rotations": [[edge, ...], ...],
"s": int, "t": int}`` with decimal weight strings or ``"inf"``.
"""
from __future__ import annotations

import json
from pathlib import Path

from ..errors import InputError, MalformedRotation
from ..plane_graph import PlaneGraph, format_weight, scale_weights
from .generators import Instance


def instance_to_dict(graph: PlaneGraph, s: int, t: int) -> dict:
    return {
        "n": graph.n,
        "edges": [[u, v, format_weight(w, graph.scale)] for u, v, w in graph.edges()],
        "rotations": graph.edge_rotations(),
        "s": s,
        "t": t,
    }


def dumps(graph: PlaneGraph, s: int, t: int) -> str:
    return json.dumps(instance_to_dict(graph, s, t), separators=(",", ":")) + "\n"


def instance_from_dict(data: dict) -> Instance:
    try:
        n = int(data["n"])
        raw_edges = data["edges"]
        rotations = data["rotations"]
        s, t = int(data["s"]), int(data["t"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed graph JSON: {exc}") from exc
    if not isinstance(raw_edges, list) or not isinstance(rotations, list):
        raise MalformedRotation("edges and rotations must be lists")
    try:
        weights, scale = scale_weights(e[2] for e in raw_edges)
        edges = [(int(e[0]), int(e[1]), w) for e, w in zip(raw_edges, weights)]
    except (IndexError, TypeError) as exc:
        raise InputError(f"malformed edge entry: {exc}") from exc
    graph = PlaneGraph.build(edges, rotations, n=n, scale=scale)
    if not (0 <= s < n and 0 <= t < n):
        raise InputError("s and t must be vertices of the graph")
    return Instance(graph, s, t)


def loads(text: str) -> Instance:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc
    return instance_from_dict(data)


def read_instance(path) -> Instance:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    return loads(text)


def write_instance(path, graph: PlaneGraph, s: int, t: int) -> None:
    Path(path).write_text(dumps(graph, s, t))
