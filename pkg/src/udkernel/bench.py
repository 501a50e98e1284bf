"""Latency benchmark: dynamic updates and queries versus rebuilding per update."""

from __future__ import annotations

import csv
import io
import json
import math
import random
import time
from typing import Sequence

from .core import CoreCluster
from .grid import GridIndex
from .harness import summarize
from .kpath import KPathIndex
from .shell import ShellState
from .vc import VCKernel

CSV_COLUMNS = ("structure", "n", "op", "mean_ns", "p50_ns", "p99_ns")
STRUCTURES = ("path", "vc", "ths", "fvs_cp")


class _Bench:
    """One grid with every structure built from scratch, then updated in place."""

    def __init__(self, points: dict[int, tuple[float, float]], path_k: int, with_path: bool = True):
        self.grid = GridIndex()
        for v, p in points.items():
            self.grid.insert(v, p)
        self.path_k = path_k
        self.kpath = KPathIndex(self.grid, path_k) if with_path else None
        self.vc = VCKernel(self.grid)
        self.core = CoreCluster(self.grid)
        self.shell = ShellState(self.grid, self.core)

    def update(self, op: str, v: int, p, out: dict[str, list[int]]) -> None:
        clock = time.perf_counter_ns
        grid = self.grid
        if op == "delete":
            p = grid.point(v)
        grid.update(op, v, p)
        t0 = clock()
        if self.kpath is not None:
            self.kpath.update(op, v, p)
        t1 = clock()
        self.vc.update(op, v, p)
        t2 = clock()
        delta = self.core.update(op, v, p)
        t3 = clock()
        self.shell.apply_update(op, v, p, delta)
        t4 = clock()
        out["path"].append(t1 - t0)
        out["vc"].append(t2 - t1)
        out["ths"].append(t3 - t2)
        out["fvs_cp"].append(t4 - t2)

    def rebuild(self, out: dict[str, list[int]]) -> None:
        clock = time.perf_counter_ns
        t0 = clock()
        if self.kpath is not None:
            KPathIndex(self.grid, self.path_k)
        t1 = clock()
        VCKernel(self.grid)
        t2 = clock()
        core = CoreCluster(self.grid)
        t3 = clock()
        ShellState.rebuild_from_scratch(self.grid, core)
        t4 = clock()
        out["path"].append(t1 - t0)
        out["vc"].append(t2 - t1)
        out["ths"].append(t3 - t2)
        out["fvs_cp"].append(t4 - t2)

    def query(self, name: str, k: int) -> None:
        if name == "path":
            self.kpath.query_decision()
            self.kpath.query_witness()
        elif name == "vc":
            self.vc.query_vc(k)
        elif name == "ths":
            self.core.query_ths(k)
        else:
            self.shell.query_fvs(k)
            self.shell.query_cp(max(k, 1))


def bench_run(
    sizes: Sequence[int] = (10_000, 100_000),
    density: float = 0.5,
    updates: int = 2000,
    queries: int = 3,
    rebuilds: int = 2,
    query_k: int = 2,
    path_k: int = 3,
    seed: int = 0,
    warmup: float = 0.1,
    layout: str = "uniform",
    structures: Sequence[str] = STRUCTURES,
) -> list[dict]:
    """Rows of ``CSV_COLUMNS`` for each structure, size and operation.

    The local density is fixed, so the plane grows with ``n``.  ``uniform``
    scatters points at ``density`` per unit area; ``lattice`` fills a
    ``density`` fraction of the sites of a jittered 0.9-spaced lattice, giving
    a triangle-free graph where everything lies in the shell.  Updates
    alternate a random deletion with a fresh insertion.
    """
    unknown = set(structures) - set(STRUCTURES)
    if unknown:
        raise ValueError(f"unknown structures {sorted(unknown)}")
    rows: list[dict] = []
    for n in sizes:
        rng = random.Random(seed * 7919 + n)
        fresh = _point_source(rng, n, density, layout)
        points = {v: fresh() for v in range(n)}
        bench = _Bench(points, path_k, with_path="path" in structures)
        timed: dict[str, list[int]] = {s: [] for s in STRUCTURES}
        live = list(points)
        next_id = n
        for i in range(updates):
            if i % 2 == 0:
                j = rng.randrange(len(live))
                v = live[j]
                live[j] = live[-1]
                live.pop()
                fresh.release(bench.grid.point(v))
                bench.update("delete", v, None, timed)
            else:
                bench.update("insert", next_id, fresh(), timed)
                live.append(next_id)
                next_id += 1
        skip = int(updates * warmup)
        for s in structures:
            rows.append(_row(s, n, "update", timed[s][skip:]))
        q_times: dict[str, list[int]] = {s: [] for s in STRUCTURES}
        for s in structures:
            reps = max(queries, 1) if s == "path" else queries
            for _ in range(reps):
                t0 = time.perf_counter_ns()
                bench.query(s, query_k)
                q_times[s].append(time.perf_counter_ns() - t0)
            if q_times[s]:
                rows.append(_row(s, n, "query", q_times[s]))
        rebuilt: dict[str, list[int]] = {s: [] for s in STRUCTURES}
        for _ in range(rebuilds):
            bench.rebuild(rebuilt)
        if rebuilds:
            for s in structures:
                rows.append(_row(s, n, "rebuild", rebuilt[s]))
    return rows


class _point_source:
    """Draws fresh points; the lattice layout never reuses an occupied site."""

    def __init__(self, rng: random.Random, n: int, density: float, layout: str):
        self.rng = rng
        self.layout = layout
        if layout == "uniform":
            self.side = math.sqrt(n / density)
        elif layout == "lattice":
            if not 0 < density < 1:
                raise ValueError("lattice density is a site fraction in (0, 1)")
            self.cols = math.ceil(math.sqrt(n / density))
            self.used: set[tuple[int, int]] = set()
        else:
            raise ValueError(f"unknown layout {layout!r}")

    def __call__(self) -> tuple[float, float]:
        rng = self.rng
        if self.layout == "uniform":
            return (rng.uniform(0, self.side), rng.uniform(0, self.side))
        while True:
            site = (rng.randrange(self.cols), rng.randrange(self.cols))
            if site not in self.used:
                self.used.add(site)
                return (site[0] * 0.9 + rng.uniform(-0.03, 0.03), site[1] * 0.9 + rng.uniform(-0.03, 0.03))

    def release(self, p: tuple[float, float]) -> None:
        if self.layout == "lattice":
            self.used.discard((round(p[0] / 0.9), round(p[1] / 0.9)))


def _row(structure: str, n: int, op: str, xs: Sequence[int]) -> dict:
    s = summarize(xs)
    return {
        "structure": structure,
        "n": n,
        "op": op,
        "mean_ns": round(s["mean_ns"], 1),
        "p50_ns": round(s["p50_ns"], 1),
        "p99_ns": round(s["p99_ns"], 1),
    }


def speedups(rows: Sequence[dict]) -> dict[tuple[str, int], float]:
    """Rebuild mean over dynamic update mean, per structure and size."""
    by = {(r["structure"], r["n"], r["op"]): r["mean_ns"] for r in rows}
    out = {}
    for (s, n, op), mean in by.items():
        if op == "update" and (s, n, "rebuild") in by and mean > 0:
            out[(s, n)] = by[(s, n, "rebuild")] / mean
    return out


def rows_to_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({c: r[c] for c in CSV_COLUMNS})
    return buf.getvalue()


def rows_to_json(rows: Sequence[dict]) -> str:
    doc = {
        "rows": list(rows),
        "speedup": [
            {"structure": s, "n": n, "rebuild_over_update": round(x, 2)}
            for (s, n), x in sorted(speedups(rows).items())
        ],
    }
    return json.dumps(doc, indent=2)
