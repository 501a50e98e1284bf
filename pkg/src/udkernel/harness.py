"""Replay traces against the dynamic structures, optionally checking every step."""

from __future__ import annotations

import json
import statistics
import time
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Sequence

from .core import CoreCluster
from .grid import GridIndex, cell_distance, cell_of
from .kpath import KPathIndex
from .oracle import oracle_solve, udg_from_points
from .shell import ShellState
from .trace import PROBLEMS, Delete, Event, Header, Insert, Query, verify_witness
from .vc import VCKernel


class DynamicUDG:
    """A grid plus whichever kernels the selected problems need, kept in lockstep."""

    def __init__(self, problems: Iterable[str] = PROBLEMS):
        self.problems = set(problems)
        unknown = self.problems - set(PROBLEMS)
        if unknown:
            raise ValueError(f"unknown problems {sorted(unknown)}")
        self.grid = GridIndex()
        self.vc = VCKernel(self.grid) if "VC" in self.problems else None
        need_core = self.problems & {"THS", "FVS", "CP"}
        self.core = CoreCluster(self.grid) if need_core else None
        need_shell = self.problems & {"FVS", "CP"}
        self.shell = ShellState(self.grid, self.core) if need_shell else None
        self.kpath: KPathIndex | None = None
        self.header: Header | None = None

    def set_header(self, h: Header) -> None:
        self.header = h
        if "PATH" in self.problems:
            self.kpath = KPathIndex(self.grid, h.k, h.mode)

    def apply(self, op: str, v: int, p=None, timings: dict[str, list[int]] | None = None) -> dict:
        """Apply one update everywhere; returns per-structure side information."""
        clock = time.perf_counter_ns
        info: dict = {}
        if op == "delete":
            p = self.grid.point(v)
        t0 = clock()
        self.grid.update(op, v, p)
        t1 = clock()
        spent = {"grid": t1 - t0}
        if self.kpath is not None:
            info["kpath"] = self.kpath.update(op, v, p)
            t2 = clock()
            spent["path"] = t2 - t1
            t1 = t2
        if self.vc is not None:
            info["vc"] = self.vc.update(op, v, p)
            t2 = clock()
            spent["vc"] = t2 - t1
            t1 = t2
        if self.core is not None:
            delta = self.core.update(op, v, p)
            info["core"] = delta
            t2 = clock()
            spent["ths"] = t2 - t1
            t1 = t2
            if self.shell is not None:
                self.shell.apply_update(op, v, p, delta)
                t2 = clock()
                # the FVS/CP structure needs both the core and the skeleton
                spent["fvs_cp"] = t2 - t1 + spent["ths"]
        info["point"] = p
        if timings is not None:
            for name, ns in spent.items():
                timings.setdefault(f"update:{name}", []).append(ns)
        return info

    def answer(self, problem: str, k: int):
        """``(decision, witness)`` from the dynamic structures."""
        if problem == "PATH":
            if self.kpath is None:
                raise ValueError("PATH query without a configured k-path structure")
            w = self.kpath.query_witness()
            return self.kpath.query_decision(), w
        if problem == "VC":
            w = self.vc.query_vc(k)
        elif problem == "THS":
            w = self.core.query_ths(k)
        elif problem == "FVS":
            w = self.shell.query_fvs(k)
        elif problem == "CP":
            w = self.shell.query_cp(k)
        else:
            raise ValueError(f"unknown problem {problem!r}")
        return w is not None, w

    def stats(self) -> dict[str, int]:
        out = {"n": len(self.grid), "cells": len(self.grid.cells)}
        if self.vc is not None:
            out["vc_kernel"] = len(self.vc.members)
        if self.core is not None:
            out["core_vertices"] = len(self.core.vcore)
            out["core_cells"] = len(self.core.core_cells)
        if self.shell is not None:
            out.update(self.shell.stats())
        if self.kpath is not None:
            out["yes_cells"] = len(self.kpath.yes_list)
        return out


@dataclass
class Answer:
    index: int
    problem: str
    k: int
    decision: bool
    witness: object = None
    oracle: bool | None = None
    valid: bool | None = None

    def line(self) -> str:
        out = f"A {self.index} {'YES' if self.decision else 'NO'}"
        w = self.witness
        if self.decision and w:
            if self.problem == "CP":
                out += " " + " | ".join(" ".join(map(str, c)) for c in w)
            else:
                out += " " + " ".join(map(str, w))
        return out


@dataclass
class RunReport:
    answers: list[Answer] = field(default_factory=list)
    timings: dict[str, list[int]] = field(default_factory=dict)
    stats: dict[str, int] = field(default_factory=dict)
    mismatches: list[str] = field(default_factory=list)
    events: int = 0
    checks: dict[str, int] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def answer_lines(self) -> str:
        return "".join(a.line() + "\n" for a in self.answers)

    def timing_summary(self) -> dict[str, dict[str, float]]:
        out = {}
        for op, xs in sorted(self.timings.items()):
            out[op] = summarize(xs)
        return out

    def to_json(self) -> str:
        doc = {
            "events": self.events,
            "answers": [asdict(a) for a in self.answers],
            "timing": self.timing_summary(),
            "stats": self.stats,
            "mismatches": self.mismatches,
            "checks": self.checks,
        }
        return json.dumps(doc, indent=2, sort_keys=True)


def summarize(xs: Sequence[int]) -> dict[str, float]:
    if not xs:
        return {"count": 0, "mean_ns": 0.0, "p50_ns": 0.0, "p99_ns": 0.0}
    ordered = sorted(xs)
    p99 = ordered[min(len(ordered) - 1, int(0.99 * len(ordered)))]
    return {
        "count": len(xs),
        "mean_ns": statistics.fmean(xs),
        "p50_ns": float(statistics.median(ordered)),
        "p99_ns": float(p99),
    }


def _problems_of(events: Sequence[Event], problems: Iterable[str] | None) -> set[str]:
    if problems is not None:
        return set(problems)
    used = {ev.problem for ev in events if isinstance(ev, Query)}
    return used or set(PROBLEMS)


def run_trace(events: Sequence[Event], problems: Iterable[str] | None = None) -> RunReport:
    """Replay ``events``; answers come only from the dynamic structures."""
    eng = DynamicUDG(_problems_of(events, problems))
    report = RunReport(events=len(events))
    qi = 0
    clock = time.perf_counter_ns
    for ev in events:
        if isinstance(ev, Header):
            eng.set_header(ev)
        elif isinstance(ev, Insert):
            eng.apply("insert", ev.v, ev.p, report.timings)
        elif isinstance(ev, Delete):
            eng.apply("delete", ev.v, None, report.timings)
        elif ev.problem in eng.problems:
            t0 = clock()
            decision, w = eng.answer(ev.problem, ev.k)
            report.timings.setdefault(f"query:{ev.problem}", []).append(clock() - t0)
            report.answers.append(Answer(qi, ev.problem, ev.k, decision, w))
            qi += 1
        else:
            qi += 1
    report.stats = eng.stats()
    return report


def brute_triangles(points) -> list[tuple[int, int, int]]:
    g = udg_from_points(points)
    return [
        (a, b, c)
        for a in g
        for b in g[a]
        if a < b
        for c in g[a] & g[b]
        if b < c
    ]


CHECK_KINDS = ("answer", "skeleton", "containment", "kpath", "heavy")


def diff_run(
    events: Sequence[Event],
    problems: Iterable[str] | None = None,
    check_structure: bool = True,
    tamper: Callable[[DynamicUDG, int], None] | None = None,
) -> RunReport:
    """Replay ``events`` comparing every answer with the exhaustive oracle.

    With ``check_structure`` every update is followed by these checks, each
    tagged with its kind in mismatch messages and counted in ``report.checks``:

    * ``skeleton``: shell invariants and equality with a scratch rebuild
    * ``containment``: kernel invariants, triangles inside the core and
      edge endpoints inside the vertex cover kernel
    * ``kpath``: flag exactness, yes-list contents and flag locality
    * ``heavy``: a cell holding k vertices forces a same-cell witness at the
      list head, read in two list accesses

    ``tamper`` is a test hook called after each update to corrupt the state on
    purpose.  Any exception raised by the structures ends the replay with a
    mismatch.
    """
    wanted = _problems_of(events, problems)
    eng = DynamicUDG(PROBLEMS)
    report = RunReport(events=len(events))
    report.checks = {kind: 0 for kind in CHECK_KINDS}
    qi = 0
    for i, ev in enumerate(events):
        try:
            if isinstance(ev, Header):
                eng.set_header(ev)
            elif isinstance(ev, (Insert, Delete)):
                op = "insert" if isinstance(ev, Insert) else "delete"
                before = eng.kpath.flags() if eng.kpath is not None else None
                info = eng.apply(op, ev.v, getattr(ev, "p", None), report.timings)
                if tamper is not None:
                    tamper(eng, i)
                if check_structure:
                    _check_step(eng, before, info["point"], report, f"event {i}")
            else:
                if ev.problem in wanted:
                    _check_query(eng, ev, qi, report)
                qi += 1
        except Exception as exc:
            # the structures are unusable past this point
            report.mismatches.append(f"[error] event {i}: {type(exc).__name__}: {exc}")
            break
    report.stats = eng.stats()
    return report


def _checked(report: RunReport, kind: str, where: str, fn: Callable[[], None]) -> None:
    report.checks[kind] += 1
    try:
        fn()
    except AssertionError as exc:
        report.mismatches.append(f"[{kind}] {where}: {exc or 'assertion failed'}")


def _check_step(eng: DynamicUDG, before, p, report: RunReport, where: str) -> None:
    points = eng.grid.points

    def skeleton():
        eng.shell.check_invariants()
        ref = ShellState.rebuild_from_scratch(eng.grid, eng.core)
        assert eng.shell.canonical_form() == ref.canonical_form(), "skeleton differs from rebuild"

    def containment():
        eng.vc.check_invariants()
        eng.core.check_invariants()
        tri = {v for t in brute_triangles(points) for v in t}
        assert tri <= eng.core.vcore, f"triangle vertices {sorted(tri - eng.core.vcore)} outside the core"
        g = udg_from_points(points)
        loose = {v for v in g if g[v] and v not in eng.vc.members}
        assert not loose, f"edge endpoints {sorted(loose)} outside the vertex cover kernel"

    _checked(report, "skeleton", where, skeleton)
    _checked(report, "containment", where, containment)
    kp = eng.kpath
    if kp is None:
        return

    def locality():
        kp.check_invariants(solve=True)
        after = kp.flags()
        c = cell_of(p)
        far = [
            d for d in set(before) | set(after)
            if before.get(d, False) != after.get(d, False) and cell_distance(c, d) > kp.radius
        ]
        assert not far, f"flags of far cells {sorted(far)} changed"

    def heavy():
        calls = kp.list_accesses
        decision = kp.query_decision()
        w = kp.query_witness()
        assert kp.list_accesses - calls == 2, "decision query scanned the yes-list"
        same = w is not None and len({eng.grid.cell_of_vertex(u) for u in w}) == 1
        assert decision and same and verify_witness(kp.mode, points, kp.k, w), "heavy cell without a same-cell witness"

    _checked(report, "kpath", where, locality)
    if any(len(res) >= kp.k for res in eng.grid.cells.values()):
        _checked(report, "heavy", where, heavy)


def _check_query(eng: DynamicUDG, ev: Query, qi: int, report: RunReport) -> None:
    points = dict(eng.grid.points)
    problem, k = ev.problem, ev.k
    if problem == "PATH":
        problem, k = eng.header.mode, eng.header.k
    before = eng.kpath.list_accesses if eng.kpath is not None else 0
    decision, w = eng.answer(ev.problem, ev.k)
    truth, _ = oracle_solve(problem, points, k)
    valid = verify_witness(problem, points, k, w) if decision else None
    report.answers.append(Answer(qi, ev.problem, ev.k, decision, w, truth, valid))
    report.checks["answer"] += 1
    where = f"query {qi}"
    if ev.problem == "PATH" and eng.kpath.list_accesses - before > 2:
        report.mismatches.append(f"[kpath] {where}: k-path query touched more than the list head")
    if decision != truth:
        report.mismatches.append(f"[answer] {where}: {ev.problem} {ev.k} answered {decision}, oracle {truth}")
    elif decision and not valid:
        report.mismatches.append(f"[answer] {where}: {ev.problem} {ev.k} returned an invalid witness {w}")
