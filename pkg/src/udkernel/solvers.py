"""Exact solvers for small kernels plus greedy packing bounds.

Simple graphs are ``dict[vertex, set[vertex]]`` adjacency maps.  Glued
kernels with loops and parallel edges use :class:`Multigraph`.  Every solver
breaks ties by minimum vertex id so replays are deterministic.
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Iterable

PATH = "PATH"
CYCLE = "CYCLE"

Graph = dict[int, set[int]]


@dataclass
class Multigraph:
    """Undirected multigraph; loops and parallel edges allowed.

    ``payload[e]`` is an optional per-edge annotation (the glued kernel stores
    the expanded vertex path of contracted edges there).
    """

    vertices: list[int] = field(default_factory=list)
    edges: list[tuple[int, int]] = field(default_factory=list)
    payload: list[Any] = field(default_factory=list)

    def __post_init__(self):
        self._vset = set(self.vertices)
        if len(self._vset) != len(self.vertices):
            raise ValueError("duplicate vertices")
        while len(self.payload) < len(self.edges):
            self.payload.append(None)
        for u, v in self.edges:
            if u not in self._vset or v not in self._vset:
                raise ValueError(f"edge ({u}, {v}) has an unlisted endpoint")

    def add_vertex(self, v: int) -> None:
        if v not in self._vset:
            self._vset.add(v)
            self.vertices.append(v)

    def add_edge(self, u: int, v: int, payload: Any = None) -> int:
        if u not in self._vset or v not in self._vset:
            raise ValueError(f"edge ({u}, {v}) has an unlisted endpoint")
        self.edges.append((u, v))
        self.payload.append(payload)
        return len(self.edges) - 1

    def __contains__(self, v: int) -> bool:
        return v in self._vset

    @classmethod
    def from_simple(cls, g: Graph) -> "Multigraph":
        mg = cls(sorted(g))
        for u in sorted(g):
            for v in sorted(g[u]):
                if u < v:
                    mg.add_edge(u, v)
        return mg

    def incidence(self) -> dict[int, dict[int, int]]:
        """``inc[v][eid] = other endpoint``; a loop appears once at its vertex."""
        inc: dict[int, dict[int, int]] = {v: {} for v in self.vertices}
        for e, (u, v) in enumerate(self.edges):
            inc[u][e] = v
            inc[v][e] = u
        return inc

    def simple(self) -> Graph:
        g: Graph = {v: set() for v in self.vertices}
        for u, v in self.edges:
            if u != v:
                g[u].add(v)
                g[v].add(u)
        return g


# ---------------------------------------------------------------------------
# greedy bounds


def greedy_matching(g: Graph) -> list[tuple[int, int]]:
    matched: set[int] = set()
    out = []
    for u in sorted(g):
        if u in matched:
            continue
        for v in sorted(g[u]):
            if v not in matched and v != u:
                matched.add(u)
                matched.add(v)
                out.append((u, v))
                break
    return out


def greedy_triangles(g: Graph) -> list[tuple[int, int, int]]:
    used: set[int] = set()
    out = []
    for u in sorted(g):
        if u in used:
            continue
        found = None
        for v in sorted(g[u]):
            if v in used or v == u:
                continue
            common = sorted(w for w in g[u] & g[v] if w not in used and w != u and w != v)
            if common:
                found = (u, v, common[0])
                break
        if found:
            used.update(found)
            out.append(found)
    return out


def _as_incidence(g: Graph | Multigraph) -> dict[int, dict[int, int]]:
    if isinstance(g, Multigraph):
        return g.incidence()
    return Multigraph.from_simple(g).incidence()


def shortest_cycle(inc: dict[int, dict[int, int]], alive: set[int] | None = None):
    """Shortest cycle as ``(vertices, edge ids)`` or ``None``; min-id start wins ties."""
    verts = sorted(inc if alive is None else alive)
    live = set(verts)
    for v in verts:
        for e, u in sorted(inc[v].items()):
            if u == v:
                return [v], [e]
    best = None
    for v in verts:
        seen: dict[int, int] = {}
        for e, u in sorted(inc[v].items()):
            if u in live:
                if u in seen:
                    cyc = ([v, u], [seen[u], e])
                    if best is None or v < best[0][0]:
                        best = cyc
                    break
                seen[u] = e
        if best is not None:
            return best
    best_len = math.inf
    for r in verts:
        if best_len == 3:
            break
        dist = {r: 0}
        parent: dict[int, tuple[int, int]] = {}
        queue = deque([r])
        while queue:
            x = queue.popleft()
            if 2 * dist[x] >= best_len:
                break
            for e, y in sorted(inc[x].items()):
                if y not in live or (x in parent and parent[x][1] == e):
                    continue
                if y not in dist:
                    dist[y] = dist[x] + 1
                    parent[y] = (x, e)
                    queue.append(y)
                    continue
                length = dist[x] + dist[y] + 1
                if length >= best_len:
                    continue
                cyc = _join_paths(r, x, y, e, parent)
                if cyc is not None:
                    best_len = length
                    best = cyc
    return best


def _join_paths(r, x, y, e, parent):
    left_v, left_e = [x], []
    while left_v[-1] != r:
        p, pe = parent[left_v[-1]]
        left_e.append(pe)
        left_v.append(p)
    right_v, right_e = [y], []
    while right_v[-1] != r:
        p, pe = parent[right_v[-1]]
        right_e.append(pe)
        right_v.append(p)
    if set(left_v[:-1]) & set(right_v[:-1]):
        return None
    # r ... x  (reversed left), edge e, y ... r (right minus r)
    verts = list(reversed(left_v)) + right_v[:-1]
    eids = list(reversed(left_e)) + [e] + right_e
    return verts, eids


def greedy_cycles(g: Graph | Multigraph, limit: float = math.inf) -> list[tuple[list[int], list[int]]]:
    """Vertex-disjoint cycles picked shortest-first; stops after ``limit`` cycles."""
    return greedy_cycles_inc(_as_incidence(g), limit)


def greedy_cycles_inc(inc, limit: float = math.inf) -> list[tuple[list[int], list[int]]]:
    alive = set(inc)
    out = []
    while len(out) < limit:
        cyc = shortest_cycle(inc, alive)
        if cyc is None:
            return out
        out.append(cyc)
        alive -= set(cyc[0])
    return out


def greedy_bounds(g, kind: str):
    """Maximal greedy packing of ``kind``; returns ``(count, witness)``."""
    if kind == "matching":
        w = greedy_matching(g if not isinstance(g, Multigraph) else g.simple())
    elif kind == "triangles":
        w = greedy_triangles(g if not isinstance(g, Multigraph) else g.simple())
    elif kind == "cycles":
        w = greedy_cycles(g)
    else:
        raise ValueError(f"unknown bound kind {kind!r}")
    return len(w), w


# ---------------------------------------------------------------------------
# k-path / k-cycle


def _check_k(k: int, mode: str) -> None:
    if mode == PATH and k < 2:
        raise ValueError("PATH needs k >= 2")
    if mode == CYCLE and k < 3:
        raise ValueError("CYCLE needs k >= 3")
    if mode not in (PATH, CYCLE):
        raise ValueError(f"unknown mode {mode!r}")


class _Budget(Exception):
    pass


def _components(g: Graph) -> list[list[int]]:
    seen: set[int] = set()
    out = []
    for s in sorted(g):
        if s in seen:
            continue
        comp = [s]
        seen.add(s)
        stack = [s]
        while stack:
            x = stack.pop()
            for y in g[x]:
                if y not in seen:
                    seen.add(y)
                    comp.append(y)
                    stack.append(y)
        out.append(comp)
    return out


def _two_core(g: Graph) -> Graph:
    deg = {v: len(n) for v, n in g.items()}
    gone = set()
    stack = [v for v, d in deg.items() if d < 2]
    while stack:
        v = stack.pop()
        if v in gone:
            continue
        gone.add(v)
        for u in g[v]:
            if u not in gone:
                deg[u] -= 1
                if deg[u] < 2:
                    stack.append(u)
    return {v: {u for u in n if u not in gone} for v, n in g.items() if v not in gone}


def _dfs_kpath(g: Graph, k: int, mode: str, budget: float) -> list[int] | None:
    steps = 0
    if mode == CYCLE:
        g = _two_core(g)
    order = {v: i for i, v in enumerate(sorted(g))}
    for comp in _components(g):
        if len(comp) < k:
            continue
        for s in sorted(comp):
            path = [s]
            on = {s}
            iters = [iter(sorted(g[s]))]
            while iters:
                steps += 1
                if steps > budget:
                    raise _Budget
                nxt = next(iters[-1], None)
                if nxt is None:
                    iters.pop()
                    on.discard(path.pop())
                    continue
                if nxt in on:
                    continue
                if mode == CYCLE and order[nxt] < order[s]:
                    continue
                path.append(nxt)
                if len(path) == k:
                    if mode == PATH or s in g[nxt]:
                        return path
                    path.pop()
                    continue
                on.add(nxt)
                iters.append(iter(sorted(g[nxt])))
    return None


def color_coding_trials(k: int) -> int:
    """Trials so that a present colorful witness is missed with probability < 2**-20."""
    p = math.factorial(k) / k**k
    return math.ceil(20 * math.log(2) / -math.log1p(-p)) if p < 1 else 1


def _colorful(g: Graph, k: int, mode: str, colors: dict[int, int]) -> list[int] | None:
    full = (1 << k) - 1
    verts = sorted(g)
    starts = verts if mode == CYCLE else [None]
    for s in starts:
        # table[v][mask] = predecessor on a colorful path ending at v
        if s is None:
            table = {v: {1 << colors[v]: None} for v in verts}
        else:
            table = {v: {} for v in verts}
            table[s][1 << colors[s]] = None
        layer = list(table.items()) if s is None else [(s, table[s])]
        frontier = {v: list(masks) for v, masks in layer}
        for _ in range(k - 1):
            new: dict[int, list[int]] = {}
            for v, masks in frontier.items():
                for u in g[v]:
                    bit = 1 << colors[u]
                    tu = table[u]
                    for m in masks:
                        if not m & bit:
                            nm = m | bit
                            if nm not in tu:
                                tu[nm] = (v, m)
                                new.setdefault(u, []).append(nm)
            frontier = new
        for v, masks in frontier.items():
            if full in masks and (s is None or s in g[v]):
                path = [v]
                m = full
                while table[path[-1]][m] is not None:
                    prev, m = table[path[-1]][m]
                    path.append(prev)
                path.reverse()
                return path
    return None


def _color_coding(g: Graph, k: int, mode: str, seed: int = 0) -> list[int] | None:
    verts = sorted(g)
    for trial in range(color_coding_trials(k)):
        rng = random.Random(seed * 1_000_003 + trial)
        colors = {v: rng.randrange(k) for v in verts}
        found = _colorful(g, k, mode, colors)
        if found is not None:
            return found
    return None


DFS_BUDGET = 200_000


def solve_kpath(g: Graph, k: int, mode: str = PATH, method: str = "auto") -> list[int] | None:
    """A k-vertex path (or cycle) of ``g`` in traversal order, or ``None``.

    ``auto`` runs a budgeted pruned DFS, falls back to color coding on budget
    exhaustion, and confirms any color-coding miss with an unbounded DFS, so
    the answer is always exact.  ``color`` runs color coding alone (one-sided
    error below 2**-20); ``dfs`` is the unbounded DFS.
    """
    _check_k(k, mode)
    if len(g) < k:
        return None
    if method == "dfs":
        return _dfs_kpath(g, k, mode, math.inf)
    if method == "color":
        return _color_coding(g, k, mode)
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    if len(g) <= 20:
        return _dfs_kpath(g, k, mode, math.inf)
    try:
        return _dfs_kpath(g, k, mode, DFS_BUDGET)
    except _Budget:
        pass
    found = _color_coding(g, k, mode)
    if found is not None:
        return found
    return _dfs_kpath(g, k, mode, math.inf)


# ---------------------------------------------------------------------------
# vertex cover / triangle hitting set


def _drop(g: Graph, xs: Iterable[int]) -> Graph:
    xs = set(xs)
    return {v: n - xs for v, n in g.items() if v not in xs}


def _vc(g: Graph, k: int) -> list[int] | None:
    g = {v: n for v, n in g.items() if n}
    if not g:
        return []
    if k <= 0 or len(greedy_matching(g)) > k:
        return None
    u = min(g, key=lambda x: (-len(g[x]), x))
    v = min(g[u])
    for pick in (u, v):
        sub = _vc(_drop(g, [pick]), k - 1)
        if sub is not None:
            return [pick] + sub
    return None


def solve_vc(g: Graph, k: int) -> list[int] | None:
    """Vertex cover of size <= k (sorted) or ``None``."""
    if k < 0:
        return None
    res = _vc({v: set(n) - {v} for v, n in g.items()}, k)
    return None if res is None else sorted(res)


def _find_triangle(g: Graph) -> tuple[int, int, int] | None:
    for u in sorted(g):
        for v in sorted(g[u]):
            if v <= u:
                continue
            common = [w for w in g[u] & g[v] if w > v]
            if common:
                return u, v, min(common)
    return None


def _ths(g: Graph, k: int) -> list[int] | None:
    tri = _find_triangle(g)
    if tri is None:
        return []
    if k <= 0 or len(greedy_triangles(g)) > k:
        return None
    for pick in tri:
        sub = _ths(_drop(g, [pick]), k - 1)
        if sub is not None:
            return [pick] + sub
    return None


def solve_ths(g: Graph, k: int) -> list[int] | None:
    """Triangle hitting set of size <= k (sorted) or ``None``."""
    if k < 0:
        return None
    res = _ths({v: set(n) - {v} for v, n in g.items()}, k)
    return None if res is None else sorted(res)


# ---------------------------------------------------------------------------
# feedback vertex set on multigraphs


def _mult_graph(g: Graph | Multigraph) -> dict[int, dict[int, int]]:
    """``adj[v][u]`` = edge multiplicity (capped at 2); loops stored at ``adj[v][v]``."""
    if isinstance(g, Multigraph):
        adj: dict[int, dict[int, int]] = {v: {} for v in g.vertices}
        for u, v in g.edges:
            adj[u][v] = min(2, adj[u].get(v, 0) + 1)
            if u != v:
                adj[v][u] = adj[u][v]
        return adj
    return {v: {u: 1 for u in n if u != v} for v, n in g.items()}


def _mdeg(adj, v) -> int:
    return sum(2 * m if u == v else m for u, m in adj[v].items())


def _mdelete(adj, v) -> None:
    for u in adj.pop(v):
        if u != v:
            del adj[u][v]


def _fvs_reduce(adj, k: int, sol: list[int]) -> int:
    queue = deque(sorted(adj))
    while queue:
        v = queue.popleft()
        if v not in adj:
            continue
        nbrs = adj[v]
        if v in nbrs:
            sol.append(v)
            k -= 1
            touched = [u for u in nbrs if u != v]
            _mdelete(adj, v)
            queue.extend(touched)
            continue
        d = _mdeg(adj, v)
        if d <= 1:
            touched = list(nbrs)
            _mdelete(adj, v)
            queue.extend(touched)
        elif d == 2:
            items = list(nbrs.items())
            if len(items) == 1:
                a = items[0][0]
                _mdelete(adj, v)
                adj[a][a] = 1
                queue.append(a)
            else:
                (a, _), (b, _) = items
                _mdelete(adj, v)
                m = min(2, adj[a].get(b, 0) + 1)
                adj[a][b] = m
                adj[b][a] = m
                queue.extend((a, b))
    return k


def _adj_to_inc(adj) -> dict[int, dict[int, int]]:
    inc: dict[int, dict[int, int]] = {v: {} for v in adj}
    e = 0
    for v in sorted(adj):
        for u in sorted(adj[v]):
            if u < v:
                continue
            for _ in range(adj[v][u] if u != v else 1):
                inc[v][e] = u
                inc[u][e] = v
                e += 1
    return inc


def _fvs(adj, k: int) -> list[int] | None:
    sol: list[int] = []
    k = _fvs_reduce(adj, k, sol)
    if k < 0:
        return None
    if not adj:
        return sol
    if k == 0:
        return None
    inc = _adj_to_inc(adj)
    if len(greedy_cycles_inc(inc, k + 1)) > k:
        return None
    cyc = shortest_cycle(inc)
    for pick in sorted(set(cyc[0])):
        sub_adj = {v: dict(n) for v, n in adj.items()}
        _mdelete(sub_adj, pick)
        sub = _fvs(sub_adj, k - 1)
        if sub is not None:
            return sol + [pick] + sub
    return None


def solve_fvs(g: Graph | Multigraph, k: int) -> list[int] | None:
    """Feedback vertex set of size <= k (sorted) or ``None``."""
    if k < 0:
        return None
    res = _fvs(_mult_graph(g), k)
    return None if res is None else sorted(res)


# ---------------------------------------------------------------------------
# cycle packing on multigraphs


def minimal_cycles_through(inc, v: int, alive: set[int]):
    """Cycles through ``v`` whose vertex set spans no other cycle.

    Yields ``(vertices, edge ids)``; loops and parallel-pair 2-cycles included.
    """
    nb: dict[int, dict[int, list[int]]] = {}

    def nbrs(x):
        got = nb.get(x)
        if got is None:
            got = {}
            for e, y in sorted(inc[x].items()):
                if y in alive:
                    got.setdefault(y, []).append(e)
            nb[x] = got
        return got

    nv = nbrs(v)
    if v in nv:
        yield [v], [nv[v][0]]
        return
    for u in sorted(nv):
        if len(nv[u]) >= 2 and u not in nbrs(u):
            yield [v, u], nv[u][:2]
    # induced cycles of length >= 3 with single edges throughout
    for x1 in sorted(nv):
        if len(nv[x1]) != 1 or x1 in nbrs(x1):
            continue
        path = [v, x1]
        on = {v, x1}
        stack = [iter(sorted(nbrs(x1)))]
        while stack:
            y = next(stack[-1], None)
            if y is None:
                stack.pop()
                on.discard(path.pop())
                continue
            last = path[-1]
            if y in on or len(nbrs(last)[y]) != 1 or y in nbrs(y):
                continue
            ny = nbrs(y)
            if any(p in ny for p in path[1:-1]):
                continue
            if v in ny:
                if len(ny[v]) == 1 and len(path) >= 2 and x1 < y:
                    cyc = path + [y]
                    eids = [nbrs(cyc[i])[cyc[i + 1]][0] for i in range(len(cyc) - 1)]
                    eids.append(ny[v][0])
                    yield cyc, eids
                continue
            path.append(y)
            on.add(y)
            stack.append(iter(sorted(ny)))


def _cp(inc, alive: frozenset, k: int, memo) -> list | None:
    if k == 0:
        return []
    key = (alive, k)
    if key in memo:
        return memo[key]
    live = set(alive)
    # strip vertices of degree <= 1 (loops count twice)
    changed = True
    while changed:
        changed = False
        for x in sorted(live):
            d = 0
            for y in inc[x].values():
                if y in live:
                    d += 2 if y == x else 1
                    if d > 1:
                        break
            if d <= 1:
                live.discard(x)
                changed = True
    result = None
    if live:
        v = min(live)
        cycles = sorted(minimal_cycles_through(inc, v, live), key=lambda c: (len(c[0]), c[0]))
        for cyc in cycles:
            rest = _cp(inc, frozenset(live - set(cyc[0])), k - 1, memo)
            if rest is not None:
                result = [cyc] + rest
                break
        if result is None:
            result = _cp(inc, frozenset(live - {v}), k, memo)
    memo[key] = result
    return result


def solve_cp(g: Graph | Multigraph, k: int) -> list[tuple[list[int], list[int]]] | None:
    """``k`` vertex-disjoint cycles as ``(vertices, edge ids)`` pairs, or ``None``.

    Edge ids index ``g.edges`` for multigraphs (for simple graphs they index
    ``Multigraph.from_simple(g).edges``).
    """
    if k < 1:
        raise ValueError("cycle packing needs k >= 1")
    inc = _as_incidence(g)
    return _cp(inc, frozenset(inc), k, {})
