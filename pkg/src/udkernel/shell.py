"""Skeleton of the triangle-free shell outside the core cluster.

The shell is every active vertex outside ``V_core``.  It is split into

* ``M``: a multigraph on boundary vertices (adjacent to the core), vertices of
  degree at least three after peeling pendant parts, and one anchor per
  isolated cycle.  Edges are *direct* (a single unit disk edge) or
  *contracted* (a path through one tree of the forest below);
* a link-cut forest over the remaining shell vertices.  A unit disk edge
  between a tree and ``M`` is a bridge; each tree has at most two, and trees
  with two bridges back exactly the contracted edges of ``M``.

Bridge records are stored per tree, keyed by the current link-cut root.  Any
call that may move a root (evert, link, cut) is bracketed by ``_take`` and
``_put``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .core import CoreCluster, CoreDelta
from .grid import GridIndex, Point, close
from .lcforest import LinkCutForest
from .solvers import Multigraph, greedy_cycles, solve_cp, solve_fvs

Bridge = tuple[int, int]  # (tree vertex, skeleton vertex)


class ShellError(RuntimeError):
    pass


@dataclass
class SkeletonVertex:
    boundary: bool = False
    special: bool = False
    anchor: bool = False
    inc: dict[int, int] = field(default_factory=dict)


@dataclass
class SkeletonEdge:
    a: int
    b: int
    bridges: tuple[Bridge, Bridge] | None = None

    @property
    def contracted(self) -> bool:
        return self.bridges is not None


@dataclass
class TreeInfo:
    bridges: list[Bridge] = field(default_factory=list)
    edge: int | None = None


class ShellState:
    def __init__(self, grid: GridIndex, core: CoreCluster, forest_cls=LinkCutForest):
        self.grid = grid
        self.core = core
        self.lct = forest_cls()
        self.node: dict[int, int] = {}
        self.vid: dict[int, int] = {}
        self.mverts: dict[int, SkeletonVertex] = {}
        self.edges: dict[int, SkeletonEdge] = {}
        self.trees: dict[int, TreeInfo] = {}
        self._next_eid = 0
        self._dirty: set[int] = set()
        self._ghost: dict[int, Point] = {}
        if grid.points:
            self._build()

    # -- small helpers ---------------------------------------------------

    def _pt(self, v: int) -> Point:
        p = self.grid.points.get(v)
        return p if p is not None else self._ghost[v]

    def _nbrs(self, v: int) -> list[int]:
        p = self._pt(v)
        out = [u for u, _ in self.grid.near(p) if u != v]
        # a vertex deleted from the grid stays visible until it is popped
        out.extend(u for u, q in self._ghost.items() if u != v and close(p, q))
        return sorted(out)

    def _tree_nbrs(self, v: int) -> list[int]:
        return [u for u in self._nbrs(v) if u in self.node]

    def in_shell(self, v: int) -> bool:
        return v in self.mverts or v in self.node

    def _is_boundary(self, v: int) -> bool:
        return any(self.core.in_core(u) for u in self._nbrs(v))

    def _new_node(self, v: int) -> int:
        x = self.lct.make_node()
        self.node[v] = x
        self.vid[x] = v
        return x

    def _drop_node(self, v: int) -> None:
        x = self.node.pop(v)
        del self.vid[x]
        self.lct.discard_node(x)

    def _root(self, v: int) -> int:
        return self.lct.root(self.node[v])

    def _take(self, v: int) -> TreeInfo:
        return self.trees.pop(self._root(v), None) or TreeInfo()

    def _put(self, v: int, info: TreeInfo) -> None:
        if len(info.bridges) > 2:
            raise ShellError(f"tree of {v} would carry {len(info.bridges)} bridges")
        if len(info.bridges) == 2:
            if info.edge is None:
                (t, a), (s, b) = info.bridges
                info.edge = self._add_edge(a, b, ((t, a), (s, b)))
        elif info.edge is not None:
            raise ShellError("contracted edge without two bridges")
        if info.bridges:
            self.trees[self._root(v)] = info

    def _add_edge(self, a: int, b: int, bridges=None) -> int:
        eid = self._next_eid
        self._next_eid += 1
        self.edges[eid] = SkeletonEdge(a, b, bridges)
        self.mverts[a].inc[eid] = b
        self.mverts[b].inc[eid] = a
        self._dirty.update((a, b))
        return eid

    def _remove_edge(self, eid: int) -> None:
        e = self.edges.pop(eid)
        for x in (e.a, e.b):
            m = self.mverts.get(x)
            if m is not None:
                m.inc.pop(eid, None)
                self._dirty.add(x)

    def degree(self, v: int) -> int:
        """Skeleton degree; a loop counts twice and pendant trees count zero."""
        return sum(2 if w == v else 1 for w in self.mverts[v].inc.values())

    # -- push / pop ------------------------------------------------------

    def push(self, v: int) -> None:
        """Add shell vertex ``v`` to ``M`` as a special vertex."""
        if self.in_shell(v):
            raise ShellError(f"vertex {v} is already in the shell state")
        self.mverts[v] = SkeletonVertex(boundary=self._is_boundary(v), special=True)
        self._dirty.add(v)
        nbrs = self._nbrs(v)
        for u in nbrs:
            if u in self.mverts:
                self._add_edge(v, u)
        for u in [u for u in nbrs if u in self.node]:
            if u in self.mverts:
                # promoted by an earlier split of this push
                self._add_edge(v, u)
                continue
            info = self._take(u)
            if len(info.bridges) < 2:
                info.bridges.append((u, v))
                self._put(u, info)
            else:
                self._split(u, v, info)

    def _split(self, u: int, v: int, info: TreeInfo) -> None:
        """Third bridge ``uv`` on a 2-bridge tree: promote the branch vertex."""
        (t, t2), (s, s2) = info.bridges
        self._remove_edge(info.edge)
        lct, node = self.lct, self.node
        lct.evert(node[u])
        p = self.vid[lct.lca(node[t], node[s])]
        arms = [(t, t2), (s, s2), (u, v)]
        xs = self._tree_nbrs(p)
        lct.evert(node[p])
        for x in xs:
            lct.cut(node[x])
        self._drop_node(p)
        self.mverts[p] = SkeletonVertex(boundary=self._is_boundary(p))
        self._dirty.add(p)
        for x in xs:
            part = TreeInfo([(x, p)])
            for arm in arms:
                if arm[0] != p and lct.connected(node[arm[0]], node[x]):
                    part.bridges.append(arm)
            self._put(x, part)
        for arm in arms:
            if arm[0] == p:
                self._add_edge(p, arm[1])

    def pop(self, v: int) -> None:
        """Remove shell vertex ``v`` and every structure it supports."""
        if v in self.mverts:
            for x in self._tree_nbrs(v):
                info = self._take(x)
                info.bridges = [br for br in info.bridges if br[1] != v]
                if info.edge is not None:
                    self._remove_edge(info.edge)
                    info.edge = None
                self._put(x, info)
            for eid in list(self.mverts[v].inc):
                self._remove_edge(eid)
            del self.mverts[v]
            self._dirty.discard(v)
        elif v in self.node:
            lct, node = self.lct, self.node
            info = self._take(v)
            lct.evert(node[v])
            if len(info.bridges) == 2:
                (t, _), (s, _) = info.bridges
                if lct.lca(node[t], node[s]) == node[v]:
                    self._remove_edge(info.edge)
                    info.edge = None
            for br in info.bridges:
                if br[0] == v:
                    self._dirty.add(br[1])
            rest = [br for br in info.bridges if br[0] != v]
            xs = self._tree_nbrs(v)
            for x in xs:
                lct.cut(node[x])
            self._drop_node(v)
            for x in xs:
                part = TreeInfo([br for br in rest if lct.connected(node[br[0]], node[x])])
                if len(part.bridges) == 2:
                    part.edge = info.edge
                self._put(x, part)
        else:
            raise ShellError(f"vertex {v} is not in the shell state")

    # -- cleaning --------------------------------------------------------

    def clean(self) -> None:
        work = deque(sorted(self._dirty))
        queued = set(work)
        self._dirty.clear()
        while work:
            v = work.popleft()
            queued.discard(v)
            m = self.mverts.get(v)
            if m is None:
                continue
            m.special = False
            if m.boundary:
                m.anchor = False
                continue
            deg = self.degree(v)
            if deg >= 3:
                m.anchor = False
                continue
            if deg == 2 and len(m.inc) == 1:
                m.anchor = True
                continue
            self._demote(v)
            for w in sorted(self._dirty):
                if w not in queued:
                    work.append(w)
                    queued.add(w)
            self._dirty.clear()

    def _demote(self, v: int) -> None:
        """Fold skeleton vertex ``v`` of degree <= 2 into the forest."""
        lct = self.lct
        m = self.mverts[v]
        nv = self._new_node(v)
        bridges: list[Bridge] = []
        for x in self._tree_nbrs(v):
            info = self._take(x)
            if lct.connected(nv, self.node[x]):
                raise ShellError(f"demoting {v} would close a cycle")
            bridges.extend(br for br in info.bridges if br[1] != v)
            if info.edge is not None:
                self._remove_edge(info.edge)
            lct.evert(self.node[x])
            lct.link(nv, self.node[x])
        for eid, w in sorted(m.inc.items()):
            e = self.edges.get(eid)
            if e is not None and not e.contracted:
                bridges.append((v, w))
                self._remove_edge(eid)
        if m.inc:
            raise ShellError(f"vertex {v} kept edges while being demoted")
        del self.mverts[v]
        self._dirty.discard(v)
        self._put(v, TreeInfo(bridges))
        self._dirty.update(br[1] for br in bridges)

    # -- orchestration ---------------------------------------------------

    def apply_update(self, op: str, v: int, p: Point, delta: CoreDelta) -> None:
        """Bring the skeleton in line after grid and core applied ``op`` on ``v``."""
        grid, core = self.grid, self.core
        leaving = {u for u in delta.entering if u != v}
        for u in leaving:
            if not self.in_shell(u):
                raise ShellError(f"vertex {u} enters the core from outside the shell")
        entering = {u for u in delta.leaving if u != v}
        for u in entering:
            if self.in_shell(u) or u not in grid.points:
                raise ShellError(f"vertex {u} leaves the core inconsistently")
        if op == "delete":
            self._ghost[v] = p
            if self.in_shell(v):
                leaving.add(v)
        elif not core.in_core(v):
            entering.add(v)
        special: set[int] = set()
        for u in leaving | entering | {v}:
            for w, _ in grid.near(self._pt(u)):
                if self.in_shell(w):
                    special.add(w)
        special -= leaving
        for u in sorted(special | leaving):
            self.pop(u)
        self._ghost.clear()
        for u in sorted(special | entering):
            self.push(u)
        self.clean()

    # -- scratch construction --------------------------------------------

    @classmethod
    def rebuild_from_scratch(cls, grid: GridIndex, core: CoreCluster, forest_cls=LinkCutForest):
        return cls(grid, core, forest_cls)

    def _build(self) -> None:
        grid, core = self.grid, self.core
        shell = {v for v in grid.points if not core.in_core(v)}
        adj = {v: {u for u in grid.neighbors_of(v) if u in shell} for v in shell}
        boundary = {v for v in shell if any(core.in_core(u) for u in grid.neighbors_of(v))}
        deg = {v: len(adj[v]) for v in shell}
        gone: set[int] = set()
        queue = deque(sorted(v for v in shell if v not in boundary and deg[v] <= 1))
        while queue:
            v = queue.popleft()
            if v in gone:
                continue
            gone.add(v)
            for u in adj[v]:
                if u not in gone:
                    deg[u] -= 1
                    if u not in boundary and deg[u] <= 1:
                        queue.append(u)
        kept = shell - gone
        skeleton = boundary | {v for v in kept if deg[v] >= 3}
        anchors = set()
        seen: set[int] = set()
        for v in sorted(kept - skeleton):
            if v in seen:
                continue
            comp, touches, stack = [], False, [v]
            seen.add(v)
            while stack:
                x = stack.pop()
                comp.append(x)
                for u in adj[x]:
                    if u in skeleton:
                        touches = True
                    elif u in kept and u not in seen:
                        seen.add(u)
                        stack.append(u)
            if not touches:
                anchors.add(min(comp))
        skeleton |= anchors
        for v in sorted(skeleton):
            self.mverts[v] = SkeletonVertex(boundary=v in boundary, anchor=v in anchors)
        for v in sorted(skeleton):
            for u in sorted(adj[v]):
                if u in skeleton and v < u:
                    self._add_edge(v, u)
        placed: set[int] = set()
        for r in sorted(shell - skeleton):
            if r in placed:
                continue
            self._new_node(r)
            placed.add(r)
            bridges: list[Bridge] = []
            queue = deque([r])
            while queue:
                x = queue.popleft()
                for u in sorted(adj[x]):
                    if u in skeleton:
                        bridges.append((x, u))
                    elif u not in placed:
                        placed.add(u)
                        self._new_node(u)
                        self.lct.link(self.node[x], self.node[u])
                        queue.append(u)
            self._put(r, TreeInfo(sorted(bridges)))
        self._dirty.clear()

    # -- views -----------------------------------------------------------

    def tree_groups(self) -> dict[int, list[int]]:
        groups: dict[int, list[int]] = {}
        for v, x in self.node.items():
            groups.setdefault(self.lct.root(x), []).append(v)
        return groups

    def expand_contracted_edge(self, eid: int) -> list[int]:
        e = self.edges[eid]
        if not e.contracted:
            raise ShellError(f"edge {eid} is direct")
        (t, a), (s, b) = e.bridges
        inner = [self.vid[x] for x in self.lct.path(self.node[t], self.node[s])]
        return [a] + inner + [b]

    def stats(self) -> dict[str, int]:
        return {
            "skeleton_vertices": len(self.mverts),
            "skeleton_edges": len(self.edges),
            "trees": len(self.tree_groups()),
            "forest_vertices": len(self.node),
        }

    def canonical_form(self):
        """Representation-independent summary used to compare two states.

        Anchors and everything hanging off them are reduced to the vertex set
        of their component, so the choice of anchor does not matter.
        """
        anchors = {v for v, m in self.mverts.items() if m.anchor}
        groups = self.tree_groups()
        anchor_parts = []
        trees = []
        for root, verts in groups.items():
            info = self.trees.get(root, TreeInfo())
            if any(br[1] in anchors for br in info.bridges):
                continue
            trees.append((tuple(sorted(verts)), tuple(sorted(info.bridges))))
        for a in anchors:
            comp = {a}
            for x in self._tree_nbrs(a):
                comp.update(groups[self._root(x)])
            anchor_parts.append(tuple(sorted(comp)))
        verts = tuple(sorted((v, m.boundary) for v, m in self.mverts.items() if not m.anchor))
        edges = []
        for eid, e in self.edges.items():
            if e.a in anchors or e.b in anchors:
                continue
            if e.contracted:
                path = tuple(self.expand_contracted_edge(eid))
                edges.append(("c", min(path, path[::-1])))
            else:
                edges.append(("d", (min(e.a, e.b), max(e.a, e.b))))
        return verts, tuple(sorted(edges)), tuple(sorted(trees)), tuple(sorted(anchor_parts))

    # -- kernel queries --------------------------------------------------

    def glue_kernel(self) -> Multigraph:
        """Core unit disk graph glued to the skeleton along boundary edges.

        Contracted edges carry their expanded vertex path as payload.
        """
        grid, core = self.grid, self.core
        g = Multigraph(sorted(core.vcore | set(self.mverts)))
        cg = grid.induced_udg(core.vcore)
        for u in sorted(cg):
            for w in sorted(cg[u]):
                if u < w:
                    g.add_edge(u, w)
        for eid in sorted(self.edges):
            e = self.edges[eid]
            g.add_edge(e.a, e.b, self.expand_contracted_edge(eid) if e.contracted else None)
        for v in sorted(self.mverts):
            if self.mverts[v].boundary:
                for u in self._nbrs(v):
                    if core.in_core(u):
                        g.add_edge(v, u)
        return g

    def query_fvs(self, k: int) -> list[int] | None:
        if k < 0:
            return None
        g = self.glue_kernel()
        if len(greedy_cycles(g, k + 1)) > k:
            return None
        return solve_fvs(g, k)

    def query_cp(self, k: int) -> list[list[int]] | None:
        if k < 1:
            raise ValueError("cycle packing needs k >= 1")
        g = self.glue_kernel()
        found = greedy_cycles(g, k)
        if len(found) < k:
            found = solve_cp(g, k)
            if found is None:
                return None
        return [lift_cycle(g, verts, eids) for verts, eids in found[:k]]

    # -- checking --------------------------------------------------------

    def check_invariants(self) -> None:
        grid, core, lct = self.grid, self.core, self.lct
        shell = {v for v in grid.points if not core.in_core(v)}
        mset, tset = set(self.mverts), set(self.node)
        assert not (mset & tset), "vertex both in M and in the forest"
        assert mset | tset == shell, "shell partition broken"
        for v, m in self.mverts.items():
            assert m.boundary == self._is_boundary(v), f"boundary flag of {v}"
            assert not m.special, f"{v} still special after cleaning"
            deg = self.degree(v)
            if m.anchor:
                assert not m.boundary and deg == 2 and len(m.inc) == 1, f"bad anchor {v}"
            elif not m.boundary:
                assert deg >= 3, f"ordinary skeleton vertex {v} has degree {deg}"
        for v in tset:
            assert not self._is_boundary(v), f"boundary vertex {v} sits in the forest"
        forest_edges = 0
        for v, x in self.node.items():
            px = lct.parent(x)
            if px is not None:
                forest_edges += 1
                assert grid.adjacent(v, self.vid[px]), f"forest edge at {v} is not a disk edge"
        induced = sum(1 for v in tset for u in grid.neighbors_of(v) if u in tset) // 2
        assert forest_edges == induced, "forest misses induced shell edges"
        groups = self.tree_groups()
        assert set(self.trees) <= set(groups), "bridge record for a dead root"
        contracted = {eid for eid, e in self.edges.items() if e.contracted}
        backed = set()
        for root, verts in groups.items():
            real = sorted((x, u) for x in verts for u in grid.neighbors_of(x) if u in mset)
            info = self.trees.get(root, TreeInfo())
            assert sorted(info.bridges) == real, f"bridges of tree at {verts[0]}"
            assert len(real) <= 2, "tree with more than two bridges"
            if len(real) == 2:
                e = self.edges[info.edge]
                assert e.contracted and sorted(e.bridges) == real
                assert {e.a, e.b} == {real[0][1], real[1][1]}
                backed.add(info.edge)
            else:
                assert info.edge is None
        assert backed == contracted, "contracted edges out of sync with trees"
        direct = sorted(
            (min(e.a, e.b), max(e.a, e.b)) for e in self.edges.values() if not e.contracted
        )
        real_direct = sorted(
            (v, u) for v in mset for u in grid.neighbors_of(v) if u in mset and v < u
        )
        assert direct == real_direct, "direct edges differ from disk edges inside M"
        for eid, e in self.edges.items():
            assert self.mverts[e.a].inc.get(eid) == e.b and self.mverts[e.b].inc.get(eid) == e.a
        interior: set[int] = set()
        for eid in contracted:
            inner = self.expand_contracted_edge(eid)[1:-1]
            assert not (interior & set(inner)), "expansions share a vertex"
            interior.update(inner)


def lift_cycle(g: Multigraph, verts: list[int], eids: list[int]) -> list[int]:
    """Replace contracted edges of a kernel cycle by their vertex paths."""
    out: list[int] = []
    for i, e in enumerate(eids):
        a = verts[i]
        path = g.payload[e]
        if path is None:
            out.append(a)
            continue
        if path[0] != a:
            path = path[::-1]
        out.extend(path[:-1])
    return out
