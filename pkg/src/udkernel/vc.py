"""Vertex cover kernel: non-isolated vertices plus vertices near a crowded cell."""

from __future__ import annotations

from .grid import CellId, GridIndex, Point, cell_distance, cell_of, neighbor_cells
from .solvers import greedy_matching, solve_vc

CROWD_RADIUS = 5


class VCKernel:
    def __init__(self, grid: GridIndex):
        self.grid = grid
        # number of cells holding >= 2 vertices within CROWD_RADIUS of each cell
        self.crowd_cover: dict[CellId, int] = {}
        self.members: set[int] = set()
        for c, res in grid.cells.items():
            if len(res) >= 2:
                self._cover(c, 1)
        for v in grid.points:
            self._retest(v)

    def _cover(self, c: CellId, step: int) -> None:
        cover = self.crowd_cover
        for d in neighbor_cells(c, CROWD_RADIUS):
            n = cover.get(d, 0) + step
            if n:
                cover[d] = n
            else:
                del cover[d]

    def qualifies(self, v: int) -> bool:
        grid = self.grid
        p = grid.point(v)
        if self.crowd_cover.get(cell_of(p), 0):
            return True
        return any(u != v for u, _ in grid.near(p))

    def _retest(self, v: int) -> None:
        if self.qualifies(v):
            self.members.add(v)
        else:
            self.members.discard(v)

    def update(self, op: str, v: int, p: Point) -> set[int]:
        """Refresh V' after the grid applied ``op``; returns the re-tested vertices."""
        grid = self.grid
        c = cell_of(p)
        occ = grid.count(c)
        candidates: set[int] = set()
        crossed = (op == "insert" and occ == 2) or (op == "delete" and occ == 1)
        if crossed:
            self._cover(c, 1 if op == "insert" else -1)
            for d, res in grid.occupied_within(c, CROWD_RADIUS):
                # residents of other crowded cells stay qualified
                if len(res) <= 1 or d == c:
                    candidates.update(res)
        candidates.update(u for u, _ in grid.near(p) if u != v)
        if op == "insert":
            candidates.add(v)
        else:
            self.members.discard(v)
        for u in candidates:
            self._retest(u)
        return candidates

    def query_vc(self, k: int) -> list[int] | None:
        if k < 0:
            return None
        g = self.grid.induced_udg(self.members)
        if len(greedy_matching(g)) > k:
            return None
        return solve_vc(g, k)

    def check_invariants(self) -> None:
        grid = self.grid
        crowded = [c for c, res in grid.cells.items() if len(res) >= 2]
        expect = {}
        for c in crowded:
            for d in neighbor_cells(c, CROWD_RADIUS):
                expect[d] = expect.get(d, 0) + 1
        assert expect == self.crowd_cover, "crowd cover out of sync"
        for v, p in grid.points.items():
            c = cell_of(p)
            rule = any(cell_distance(c, d) <= CROWD_RADIUS for d in crowded) or any(
                u != v for u, _ in grid.near(p)
            )
            assert rule == (v in self.members), f"membership of {v}"
        assert self.members <= set(grid.points)
