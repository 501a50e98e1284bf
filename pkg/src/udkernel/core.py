"""Core grid cluster: the triangle-hitting kernel shared by FVS and cycle packing.

A cell is core when a cell within 10 holds at least three vertices, or a cell
within 5 holds a vertex lying on a triangle.  Membership is tracked with
counters so an update touches a bounded number of cells.

A triangle vertex ``u`` is only counted when no cell within 2 of its own cell
holds three vertices ("sparse" triangle vertex).  This loses nothing: such a
crowded cell is within 7 of every cell that ``u`` would cover, so those cells
are core anyway.  In exchange, every triangle test runs on a neighbourhood of
at most 50 vertices.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .grid import CellId, GridIndex, Point, cell_distance, cell_of, neighbor_cells
from .solvers import greedy_triangles, solve_ths

CROWD_RADIUS = 10
TRIANGLE_RADIUS = 5
LOCAL_RADIUS = 2


@dataclass
class CoreDelta:
    added_cells: set[CellId] = field(default_factory=set)
    removed_cells: set[CellId] = field(default_factory=set)
    entering: set[int] = field(default_factory=set)
    leaving: set[int] = field(default_factory=set)

    def empty(self) -> bool:
        return not (self.added_cells or self.removed_cells or self.entering or self.leaving)


def _bump(table: dict[CellId, int], c: CellId, radius: int, step: int, changed: set) -> None:
    for d in neighbor_cells(c, radius):
        n = table.get(d, 0) + step
        if n:
            table[d] = n
        else:
            del table[d]
        changed.add(d)


class CoreCluster:
    def __init__(self, grid: GridIndex):
        self.grid = grid
        self.crowd10: dict[CellId, int] = {}
        self.crowd2: dict[CellId, int] = {}
        self.tri_cover: dict[CellId, int] = {}
        self.sparse_tri: set[int] = set()
        self.core_cells: set[CellId] = set()
        self.vcore: set[int] = set()
        self.last_delta = CoreDelta()
        changed: set[CellId] = set()
        for c, res in grid.cells.items():
            if len(res) >= 3:
                _bump(self.crowd10, c, CROWD_RADIUS, 1, changed)
                _bump(self.crowd2, c, LOCAL_RADIUS, 1, set())
        for u in grid.points:
            if self._sparse_triangle_vertex(u):
                self.sparse_tri.add(u)
                _bump(self.tri_cover, grid.cell_of_vertex(u), TRIANGLE_RADIUS, 1, changed)
        self.core_cells = {d for d in changed if self._counted_core(d)}
        self.vcore = {v for c in self.core_cells for v in grid.residents(c)}

    # -- membership ------------------------------------------------------

    def _counted_core(self, c: CellId) -> bool:
        return c in self.crowd10 or c in self.tri_cover

    def in_core(self, v: int) -> bool:
        return v in self.vcore

    def in_triangle(self, u: int) -> bool:
        grid = self.grid
        nbrs = [(w, q) for w, q in grid.near(grid.point(u)) if w != u]
        for i, (a, pa) in enumerate(nbrs):
            for b, pb in nbrs[i + 1:]:
                if (pa[0] - pb[0]) ** 2 + (pa[1] - pb[1]) ** 2 <= 1.0:
                    return True
        return False

    def _sparse_triangle_vertex(self, u: int) -> bool:
        c = self.grid.cell_of_vertex(u)
        if c in self.crowd2:
            return False
        return self.in_triangle(u)

    def is_core_cell(self, c: CellId) -> bool:
        """Evaluate the membership rule directly from grid contents."""
        grid = self.grid
        if any(len(res) >= 3 for _, res in grid.occupied_within(c, CROWD_RADIUS)):
            return True
        for _, res in grid.occupied_within(c, TRIANGLE_RADIUS):
            for u in res:
                if self.in_triangle(u):
                    return True
        return False

    # -- updates ---------------------------------------------------------

    def update(self, op: str, v: int, p: Point) -> CoreDelta:
        """Refresh the cluster after the grid applied ``op`` on ``v`` at ``p``."""
        grid = self.grid
        c = cell_of(p)
        occ = grid.count(c)
        changed: set[CellId] = set()
        if op == "delete" and v in self.sparse_tri:
            self.sparse_tri.discard(v)
            _bump(self.tri_cover, c, TRIANGLE_RADIUS, -1, changed)
        recheck: set[int] = set()
        crossed = (op == "insert" and occ == 3) or (op == "delete" and occ == 2)
        if crossed:
            step = 1 if op == "insert" else -1
            _bump(self.crowd10, c, CROWD_RADIUS, step, changed)
            _bump(self.crowd2, c, LOCAL_RADIUS, step, set())
        # triangles through v only involve neighbours of v, all within 2 cells;
        # vertices of crowded cells are never sparse, except in a cell that
        # just became crowded
        for d, res in grid.occupied_within(c, LOCAL_RADIUS):
            if len(res) <= 2 or (crossed and d == c):
                recheck.update(res)
        recheck.discard(v)
        if op == "insert":
            recheck.add(v)
        for u in recheck:
            now = self._sparse_triangle_vertex(u)
            if now != (u in self.sparse_tri):
                if now:
                    self.sparse_tri.add(u)
                else:
                    self.sparse_tri.discard(u)
                _bump(self.tri_cover, grid.cell_of_vertex(u), TRIANGLE_RADIUS, 1 if now else -1, changed)
        delta = CoreDelta()
        for d in changed:
            now = self._counted_core(d)
            if now and d not in self.core_cells:
                self.core_cells.add(d)
                delta.added_cells.add(d)
            elif not now and d in self.core_cells:
                self.core_cells.discard(d)
                delta.removed_cells.add(d)
        for d in delta.added_cells:
            delta.entering.update(grid.residents(d))
        for d in delta.removed_cells:
            delta.leaving.update(grid.residents(d))
        if op == "insert":
            if c in self.core_cells:
                delta.entering.add(v)
        elif v in self.vcore:
            delta.leaving.add(v)
        self.vcore -= delta.leaving
        self.vcore |= delta.entering
        self.last_delta = delta
        return delta

    # -- queries ---------------------------------------------------------

    def query_ths(self, k: int) -> list[int] | None:
        if k < 0:
            return None
        g = self.grid.induced_udg(self.vcore)
        if len(greedy_triangles(g)) > k:
            return None
        return solve_ths(g, k)

    # -- checking --------------------------------------------------------

    def scratch_core_cells(self) -> set[CellId]:
        grid = self.grid
        out: set[CellId] = set()
        for c, res in grid.cells.items():
            if len(res) >= 3:
                out.update(neighbor_cells(c, CROWD_RADIUS))
            if any(self.in_triangle(u) for u in res):
                out.update(neighbor_cells(c, TRIANGLE_RADIUS))
        return out

    def check_invariants(self) -> None:
        grid = self.grid
        expect = self.scratch_core_cells()
        assert expect == self.core_cells, "core cells differ from scratch evaluation"
        assert self.vcore == {v for v in grid.points if grid.cell_of_vertex(v) in expect}
        for u in grid.points:
            assert (u in self.sparse_tri) == self._sparse_triangle_vertex(u), f"sparse flag of {u}"
        crowded = [c for c, res in grid.cells.items() if len(res) >= 3]
        for d in self.crowd2:
            assert self.crowd2[d] == sum(cell_distance(d, h) <= LOCAL_RADIUS for h in crowded)
