"""Exhaustive ground-truth oracles for differential testing.

Nothing here shares code with the dynamic structures or the kernel solvers:
unit disk adjacency is recomputed pairwise from coordinates, subset problems
are decided by ordered include/exclude enumeration, and cycle packing uses
networkx's chordless-cycle enumeration plus an exhaustive family search.
"""

from __future__ import annotations

from typing import Mapping

from .solvers import CYCLE, PATH, Multigraph

SUBSET_GUARD = 40
PATH_K_GUARD = 6


class OracleGuardError(ValueError):
    pass


def udg_from_points(points: Mapping[int, tuple[float, float]]) -> dict[int, set[int]]:
    ids = sorted(points)
    g: dict[int, set[int]] = {v: set() for v in ids}
    for i, u in enumerate(ids):
        ux, uy = points[u]
        for v in ids[i + 1:]:
            vx, vy = points[v]
            if (ux - vx) ** 2 + (uy - vy) ** 2 <= 1.0:
                g[u].add(v)
                g[v].add(u)
    return g


def _edge_list(inst) -> tuple[list[int], list[tuple[int, int]]]:
    if isinstance(inst, Multigraph):
        return sorted(inst.vertices), list(inst.edges)
    verts = sorted(inst)
    return verts, [(u, v) for u in verts for v in inst[u] if u < v]


def _vc_oracle(inst, k):
    verts, edges = _edge_list(inst)
    idx = {v: i for i, v in enumerate(verts)}
    earlier = [[] for _ in verts]
    for u, v in edges:
        a, b = sorted((idx[u], idx[v]))
        earlier[b].append(a)
    excluded = [False] * len(verts)
    n = len(verts)
    chosen: list[int] = []

    def rec(i):
        if i == n:
            return list(chosen)
        # exclude first; an excluded vertex needs every earlier neighbour chosen
        if not any(excluded[j] for j in earlier[i]):
            excluded[i] = True
            got = rec(i + 1)
            excluded[i] = False
            if got is not None:
                return got
        if len(chosen) < k:
            chosen.append(verts[i])
            got = rec(i + 1)
            chosen.pop()
            if got is not None:
                return got
        return None

    return rec(0)


def _ths_oracle(inst, k):
    verts, edges = _edge_list(inst)
    idx = {v: i for i, v in enumerate(verts)}
    nb = [set() for _ in verts]
    for u, v in edges:
        if u != v:
            nb[idx[u]].add(idx[v])
            nb[idx[v]].add(idx[u])
    # triangles keyed by their largest index
    closing = [[] for _ in verts]
    for c in range(len(verts)):
        lower = sorted(x for x in nb[c] if x < c)
        for i, a in enumerate(lower):
            for b in lower[i + 1:]:
                if b in nb[a]:
                    closing[c].append((a, b))
    excluded = [False] * len(verts)
    n = len(verts)
    chosen: list[int] = []

    def rec(i):
        if i == n:
            return list(chosen)
        if not any(excluded[a] and excluded[b] for a, b in closing[i]):
            excluded[i] = True
            got = rec(i + 1)
            excluded[i] = False
            if got is not None:
                return got
        if len(chosen) < k:
            chosen.append(verts[i])
            got = rec(i + 1)
            chosen.pop()
            if got is not None:
                return got
        return None

    return rec(0)


def _fvs_oracle(inst, k):
    verts, edges = _edge_list(inst)
    idx = {v: i for i, v in enumerate(verts)}
    n = len(verts)
    back = [[] for _ in verts]  # edges to earlier-or-equal indices
    for u, v in edges:
        a, b = sorted((idx[u], idx[v]))
        back[b].append(a)
    chosen: list[int] = []

    def find(comp, x):
        while comp[x] != x:
            x = comp[x]
        return x

    def rec(i, comp):
        if i == n:
            return list(chosen)
        # exclude i: union with excluded earlier endpoints, reject on a cycle
        ok = True
        ncomp = list(comp)
        ncomp[i] = i
        for a in back[i]:
            if a == i:
                ok = False
                break
            if ncomp[a] < 0:
                continue
            ra, ri = find(ncomp, a), find(ncomp, i)
            if ra == ri:
                ok = False
                break
            ncomp[ra] = ri
        if ok:
            got = rec(i + 1, ncomp)
            if got is not None:
                return got
        if len(chosen) < k:
            chosen.append(verts[i])
            got = rec(i + 1, comp)
            chosen.pop()
            if got is not None:
                return got
        return None

    return rec(0, [-1] * n)


def _path_oracle(inst, k, mode):
    g = inst if not isinstance(inst, Multigraph) else inst.simple()
    for s in sorted(g):
        path = [s]

        def extend():
            if len(path) == k:
                if mode == PATH or (k >= 3 and path[0] in g[path[-1]]):
                    return list(path)
                return None
            for u in sorted(g[path[-1]]):
                if u not in path:
                    path.append(u)
                    got = extend()
                    path.pop()
                    if got is not None:
                        return got
            return None

        got = extend()
        if got is not None:
            return got
    return None


def _cp_oracle(inst, k):
    import networkx as nx

    verts, edges = _edge_list(inst)
    # loops and doubled edges are listed directly; the simple part goes to networkx
    cycles: list[list[int]] = []
    seen: dict[tuple[int, int], int] = {}
    for u, v in edges:
        if u == v:
            cycles.append([u])
        else:
            key = (min(u, v), max(u, v))
            seen[key] = seen.get(key, 0) + 1
            if seen[key] == 2:
                cycles.append(list(key))
    G = nx.Graph()
    G.add_nodes_from(verts)
    G.add_edges_from(seen)
    cycles += [list(c) for c in nx.chordless_cycles(G) if len(c) >= 3]
    sets = [frozenset(c) for c in cycles]
    order = sorted(range(len(cycles)), key=lambda i: (len(cycles[i]), sorted(cycles[i])))
    picked: list[int] = []

    def rec(start, used):
        if len(picked) == k:
            return True
        for pos in range(start, len(order)):
            i = order[pos]
            if sets[i] & used:
                continue
            picked.append(i)
            if rec(pos + 1, used | sets[i]):
                return True
            picked.pop()
        return False

    if k <= 0:
        return []
    if rec(0, frozenset()):
        return [cycles[i] for i in picked]
    return None


def oracle_solve(problem: str, instance, k: int):
    """Exhaustive answer ``(decision, witness)`` for ``problem`` on ``instance``.

    ``instance`` is an adjacency dict, a :class:`Multigraph`, or a
    ``{vertex: (x, y)}`` point map (converted to its unit disk graph).
    ``problem`` is one of PATH, CYCLE, VC, THS, FVS, CP.
    """
    if isinstance(instance, Mapping) and instance and not isinstance(
        next(iter(instance.values())), (set, frozenset)
    ):
        instance = udg_from_points(instance)
    n = len(instance.vertices) if isinstance(instance, Multigraph) else len(instance)
    if problem in (PATH, CYCLE):
        if k > PATH_K_GUARD:
            raise OracleGuardError(f"k={k} exceeds the path oracle guard {PATH_K_GUARD}")
        w = _path_oracle(instance, k, problem)
    elif problem in ("VC", "THS", "FVS", "CP"):
        if n > SUBSET_GUARD:
            raise OracleGuardError(f"{n} vertices exceed the oracle guard {SUBSET_GUARD}")
        if k < 0:
            return False, None
        fn = {"VC": _vc_oracle, "THS": _ths_oracle, "FVS": _fvs_oracle, "CP": _cp_oracle}[problem]
        w = fn(instance, k)
    else:
        raise ValueError(f"unknown problem {problem!r}")
    return w is not None, w
