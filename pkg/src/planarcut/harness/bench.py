"""Benchmark runner: solve manifest instances in each mode and record timings."""
from __future__ import annotations

import csv
import json
import time
from dataclasses import dataclass
from pathlib import Path

from ..errors import BadParams, InputError, InvariantViolation
from ..mincut import Stats, min_st_cut
from .generators import generate

CSV_HEADER = ["family", "n", "r", "mode", "wall_ms", "cut_weight", "candidates", "strip_total"]


@dataclass
class BenchRecord:
    family: str
    n: int
    r: int
    mode: str
    wall_time: float
    cut_weight: object
    candidate_count: int
    strip_total_size: int

    def row(self) -> list:
        return [self.family, self.n, self.r, self.mode, f"{self.wall_time * 1000:.1f}",
                self.cut_weight, self.candidate_count, self.strip_total_size]


@dataclass
class InstanceSpec:
    family: str
    n: int
    seed: int = 0
    wmin: int = 1
    wmax: int = 100

    def build(self):
        return generate(self.family, self.n, self.seed, self.wmin, self.wmax)


def load_manifest(path) -> tuple[list[InstanceSpec], list[str], int | None]:
    """Instances, modes and optional fixed r of a manifest file."""
    try:
        data = json.loads(Path(path).read_text())
        specs = [InstanceSpec(**entry) for entry in data["instances"]]
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"bad manifest {path}: {exc}") from exc
    return specs, data.get("modes", ["baseline", "twophase"]), data.get("r")


def corpus_specs(families, sizes, seeds, wmin=1, wmax=100) -> list[InstanceSpec]:
    return [InstanceSpec(f, n, s, wmin, wmax) for f in families for n in sizes for s in seeds]


def parse_sizes(text: str) -> list[int]:
    """``"1k,4k,2^17,500"`` -> ``[1000, 4000, 131072, 500]``."""
    out = []
    for part in text.split(","):
        part = part.strip().lower()
        try:
            if "^" in part:
                base, exp = part.split("^")
                out.append(int(base) ** int(exp))
            elif part.endswith("k"):
                out.append(int(float(part[:-1]) * 1000))
            else:
                out.append(int(part))
        except ValueError as exc:
            raise BadParams(f"bad size {part!r}") from exc
    return out


def run_one(spec: InstanceSpec, mode: str, r: int | None = None, inst=None) -> BenchRecord:
    inst = inst or spec.build()
    stats = Stats()
    t0 = time.perf_counter()
    cut = min_st_cut(inst.graph, inst.s, inst.t, mode=mode, r=r, stats=stats)
    wall = time.perf_counter() - t0
    return BenchRecord(spec.family, spec.n, stats.r, mode, wall, cut.weight,
                       stats.candidates, stats.strip_total)


def run_bench(specs: list[InstanceSpec], modes: list[str], r: int | None = None,
              on_record=None) -> list[BenchRecord]:
    """Records in manifest order; weights must agree across modes per instance."""
    records = []
    for spec in specs:
        inst = spec.build()
        group = [run_one(spec, mode, r, inst) for mode in modes]
        if len({rec.cut_weight for rec in group}) > 1:
            raise InvariantViolation(f"modes disagree on {spec}: {[x.cut_weight for x in group]}")
        for rec in group:
            records.append(rec)
            if on_record:
                on_record(rec)
    return records


def write_csv(path, records: list[BenchRecord]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_HEADER)
        for rec in records:
            w.writerow(rec.row())
