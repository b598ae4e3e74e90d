"""Minimum s-t cuts in undirected plane graphs via separating cycles of the dual."""
from .errors import InputError, InvariantViolation, PlanarCutError
from .mincut import Cut, SeparatingCycle, Stats, cycle_to_cut, min_st_cut, reif_baseline
from .plane_graph import INF, PlaneGraph, cut_open, subgraph_between
from .rdivision import Division, fast_r_division, r_division, weak_r_division

__all__ = [
    "INF", "Cut", "Division", "InputError", "InvariantViolation", "PlanarCutError",
    "PlaneGraph", "SeparatingCycle", "Stats", "cut_open", "cycle_to_cut", "fast_r_division",
    "min_st_cut", "r_division", "reif_baseline", "subgraph_between", "weak_r_division",
]
