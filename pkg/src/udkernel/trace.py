"""Trace events, the text trace format, a seeded generator and witness checks.

Trace grammar, one event per line::

    # comment
    H PATHK <k> <PATH|CYCLE>
    I <id> <x> <y>
    D <id>
    Q <PATH|VC|THS|FVS|CP> <k>

``Q PATH`` asks the k-path structure configured by the latest ``H`` line, so
its ``k`` must match that header.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union

from .solvers import CYCLE, PATH

PROBLEMS = ("PATH", "VC", "THS", "FVS", "CP")
THRESHOLD_MARGIN = 1e-6


class TraceError(ValueError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


@dataclass(frozen=True)
class Header:
    k: int
    mode: str


@dataclass(frozen=True)
class Insert:
    v: int
    p: tuple[float, float]


@dataclass(frozen=True)
class Delete:
    v: int


@dataclass(frozen=True)
class Query:
    problem: str
    k: int


Event = Union[Header, Insert, Delete, Query]


def _int(tok: str, lineno: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise TraceError(lineno, f"{what} must be an integer, got {tok!r}") from None


def _float(tok: str, lineno: int) -> float:
    try:
        x = float(tok)
    except ValueError:
        raise TraceError(lineno, f"bad coordinate {tok!r}") from None
    if not math.isfinite(x):
        raise TraceError(lineno, f"non-finite coordinate {tok!r}")
    return x


def check_query(problem: str, k: int, header: Header | None, lineno: int = 0) -> None:
    if problem not in PROBLEMS:
        raise TraceError(lineno, f"unknown problem {problem!r}")
    if problem == "PATH":
        if header is None:
            raise TraceError(lineno, "PATH query before any H line")
        if k != header.k:
            raise TraceError(lineno, f"PATH query k={k} but the header fixed k={header.k}")
    elif problem == "CP":
        if k < 1:
            raise TraceError(lineno, "CP needs k >= 1")
    elif k < 0:
        raise TraceError(lineno, f"{problem} needs k >= 0")


def parse_trace(text: str) -> list[Event]:
    events: list[Event] = []
    active: set[int] = set()
    header: Header | None = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tok = line.split()
        kind, args = tok[0], tok[1:]
        if kind == "H":
            if len(args) != 3 or args[0] != "PATHK":
                raise TraceError(lineno, "expected 'H PATHK <k> <PATH|CYCLE>'")
            k = _int(args[1], lineno, "k")
            mode = args[2]
            if mode not in (PATH, CYCLE):
                raise TraceError(lineno, f"unknown path mode {mode!r}")
            if (mode == PATH and k < 2) or (mode == CYCLE and k < 3):
                raise TraceError(lineno, f"k={k} is too small for {mode}")
            header = Header(k, mode)
            events.append(header)
        elif kind == "I":
            if len(args) != 3:
                raise TraceError(lineno, "expected 'I <id> <x> <y>'")
            v = _int(args[0], lineno, "id")
            if v in active:
                raise TraceError(lineno, f"id {v} is already active")
            active.add(v)
            events.append(Insert(v, (_float(args[1], lineno), _float(args[2], lineno))))
        elif kind == "D":
            if len(args) != 1:
                raise TraceError(lineno, "expected 'D <id>'")
            v = _int(args[0], lineno, "id")
            if v not in active:
                raise TraceError(lineno, f"id {v} is not active")
            active.discard(v)
            events.append(Delete(v))
        elif kind == "Q":
            if len(args) != 2:
                raise TraceError(lineno, "expected 'Q <problem> <k>'")
            k = _int(args[1], lineno, "k")
            check_query(args[0], k, header, lineno)
            events.append(Query(args[0], k))
        else:
            raise TraceError(lineno, f"unknown event {kind!r}")
    return events


def format_trace(events: Iterable[Event]) -> str:
    lines = []
    for ev in events:
        if isinstance(ev, Header):
            lines.append(f"H PATHK {ev.k} {ev.mode}")
        elif isinstance(ev, Insert):
            lines.append(f"I {ev.v} {ev.p[0]!r} {ev.p[1]!r}")
        elif isinstance(ev, Delete):
            lines.append(f"D {ev.v}")
        else:
            lines.append(f"Q {ev.problem} {ev.k}")
    return "\n".join(lines) + ("\n" if lines else "")


def _clear_of_threshold(p, points: Iterable[tuple[float, float]]) -> bool:
    for q in points:
        d = math.hypot(p[0] - q[0], p[1] - q[1])
        if abs(d - 1.0) < THRESHOLD_MARGIN:
            return False
    return True


def generate_trace(
    seed: int,
    n: int = 40,
    side: float = 6.0,
    events: int = 60,
    mix: tuple[float, float, float] = (0.5, 0.2, 0.3),
    k_range: tuple[int, int] = (0, 5),
    path_k: int | None = 3,
    path_mode: str = PATH,
    problems: Sequence[str] = PROBLEMS,
    layout: str = "uniform",
) -> list[Event]:
    """Seeded random trace of inserts, deletes and queries.

    ``mix`` weighs insert/delete/query; at most ``n`` points are active.  The
    ``lattice`` layout puts each point on a free site of a 0.9-spaced lattice
    with small jitter, which yields triangle-free graphs with many short cycles.
    """
    rng = random.Random(seed)
    out: list[Event] = []
    problems = [q for q in problems if q != "PATH" or path_k is not None]
    header = None
    if path_k is not None:
        header = Header(path_k, path_mode)
        out.append(header)
    active: dict[int, tuple[float, float]] = {}
    next_id = 0
    weights = [w if w > 0 else 0.0 for w in mix]
    if not problems:
        weights[2] = 0.0
    if sum(weights) <= 0:
        raise ValueError("op mix has no usable operation")
    # lattice sites sit 0.3 inside the square so jitter never leaves it
    cols = max(1, int((side - 0.6) / 0.9 + 1e-9) + 1)
    sites: dict[int, tuple[int, int]] = {}
    emitted = 0
    while emitted < events:
        kind = rng.choices(("I", "D", "Q"), weights)[0]
        if kind == "I" and len(active) >= n:
            if weights[1]:
                kind = "D"
            elif weights[2]:
                kind = "Q"
            else:
                break
        if kind == "D" and not active:
            if not weights[0]:
                break
            kind = "I"
        if kind == "I":
            site = None
            if layout == "lattice":
                taken = set(sites.values())
                free = [(i, j) for i in range(cols) for j in range(cols) if (i, j) not in taken]
                if not free:
                    continue
                site = rng.choice(free)
            for _ in range(100):
                if site is not None:
                    p = (
                        0.3 + site[0] * 0.9 + rng.uniform(-0.03, 0.03),
                        0.3 + site[1] * 0.9 + rng.uniform(-0.03, 0.03),
                    )
                else:
                    p = (rng.uniform(0, side), rng.uniform(0, side))
                if _clear_of_threshold(p, active.values()):
                    break
            else:
                continue
            if site is not None:
                sites[next_id] = site
            active[next_id] = p
            out.append(Insert(next_id, p))
            next_id += 1
        elif kind == "D":
            v = rng.choice(sorted(active))
            del active[v]
            sites.pop(v, None)
            out.append(Delete(v))
        else:
            q = rng.choice(problems)
            if q == "PATH":
                k = header.k
            else:
                lo = max(k_range[0], 1 if q == "CP" else 0)
                k = rng.randint(lo, max(lo, k_range[1]))
            out.append(Query(q, k))
        emitted += 1
    return out


# ---------------------------------------------------------------------------
# witness validation, recomputed from coordinates only


def _adjacent(points: Mapping[int, tuple[float, float]], a: int, b: int) -> bool:
    p, q = points[a], points[b]
    return (p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2 <= 1.0


def _edges(points: Mapping[int, tuple[float, float]]) -> list[tuple[int, int]]:
    ids = sorted(points)
    return [(a, b) for i, a in enumerate(ids) for b in ids[i + 1:] if _adjacent(points, a, b)]


def _valid_cycle(points, cyc: Sequence[int], min_len: int = 3) -> bool:
    if len(cyc) < min_len or len(set(cyc)) != len(cyc):
        return False
    if any(v not in points for v in cyc):
        return False
    return all(_adjacent(points, cyc[i], cyc[(i + 1) % len(cyc)]) for i in range(len(cyc)))


def verify_witness(problem: str, points: Mapping[int, tuple[float, float]], k: int, witness) -> bool:
    """True iff ``witness`` certifies a yes-answer to ``problem`` with parameter ``k``."""
    if witness is None:
        return False
    if problem in (PATH, CYCLE):
        w = list(witness)
        if len(w) != k or len(set(w)) != k or any(v not in points for v in w):
            return False
        if problem == CYCLE:
            return k >= 3 and _valid_cycle(points, w)
        return all(_adjacent(points, a, b) for a, b in zip(w, w[1:]))
    if problem == "CP":
        cycles = [list(c) for c in witness]
        if len(cycles) != k:
            return False
        seen: set[int] = set()
        for c in cycles:
            if not _valid_cycle(points, c) or seen & set(c):
                return False
            seen.update(c)
        return True
    chosen = set(witness)
    if len(chosen) != len(list(witness)) or len(chosen) > k or not chosen <= set(points):
        return False
    edges = _edges(points)
    if problem == "VC":
        return all(a in chosen or b in chosen for a, b in edges)
    if problem == "THS":
        nbr: dict[int, set[int]] = {v: set() for v in points}
        for a, b in edges:
            nbr[a].add(b)
            nbr[b].add(a)
        for a, b in edges:
            for c in nbr[a] & nbr[b]:
                if not ({a, b, c} & chosen):
                    return False
        return True
    if problem == "FVS":
        parent = {v: v for v in points if v not in chosen}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in edges:
            if a in chosen or b in chosen:
                continue
            ra, rb = find(a), find(b)
            if ra == rb:
                return False
            parent[ra] = rb
        return True
    raise ValueError(f"unknown problem {problem!r}")
