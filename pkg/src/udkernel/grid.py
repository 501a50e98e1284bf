"""Grid bucketing for unit disk graphs.

Points live in square cells of side 1/sqrt(2), so two points sharing a cell
are always adjacent.  Two points are adjacent iff their distance is at most 1.
"""

from __future__ import annotations

import math
from typing import Iterable, Iterator

SQRT2 = math.sqrt(2.0)

Point = tuple[float, float]
CellId = tuple[int, int]


class GridError(ValueError):
    pass


class DuplicateVertexError(GridError):
    pass


class UnknownVertexError(GridError):
    pass


def cell_of(p: Point) -> CellId:
    x, y = p
    if not (math.isfinite(x) and math.isfinite(y)):
        raise GridError(f"non-finite point {p!r}")
    return (math.floor(x * SQRT2), math.floor(y * SQRT2))


def cell_distance(c1: CellId, c2: CellId) -> int:
    return max(abs(c1[0] - c2[0]), abs(c1[1] - c2[1]))


def neighbor_cells(c: CellId, radius: int) -> list[CellId]:
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    cx, cy = c
    return [
        (cx + dx, cy + dy)
        for dx in range(-radius, radius + 1)
        for dy in range(-radius, radius + 1)
    ]


def close(p: Point, q: Point) -> bool:
    dx = p[0] - q[0]
    dy = p[1] - q[1]
    return dx * dx + dy * dy <= 1.0


class GridIndex:
    """Per-cell resident lists for the active point set.

    ``cells`` maps a cell id to an insertion-ordered ``{vertex: point}`` dict.
    Empty cells are dropped immediately.
    """

    def __init__(self):
        self.cells: dict[CellId, dict[int, Point]] = {}
        self.points: dict[int, Point] = {}

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, v: int) -> bool:
        return v in self.points

    def insert(self, v: int, p: Point) -> CellId:
        if v in self.points:
            raise DuplicateVertexError(f"vertex {v} is already active")
        c = cell_of(p)
        p = (float(p[0]), float(p[1]))
        self.points[v] = p
        self.cells.setdefault(c, {})[v] = p
        return c

    def delete(self, v: int) -> CellId:
        p = self.points.pop(v, None)
        if p is None:
            raise UnknownVertexError(f"vertex {v} is not active")
        c = cell_of(p)
        residents = self.cells[c]
        del residents[v]
        if not residents:
            del self.cells[c]
        return c

    def update(self, op: str, v: int, p: Point | None = None) -> CellId:
        if op == "insert":
            if p is None:
                raise GridError("insert needs a point")
            return self.insert(v, p)
        if op == "delete":
            return self.delete(v)
        raise GridError(f"unknown operation {op!r}")

    def point(self, v: int) -> Point:
        try:
            return self.points[v]
        except KeyError:
            raise UnknownVertexError(f"vertex {v} is not active") from None

    def cell_of_vertex(self, v: int) -> CellId:
        return cell_of(self.point(v))

    def count(self, c: CellId) -> int:
        residents = self.cells.get(c)
        return len(residents) if residents else 0

    def residents(self, c: CellId) -> list[int]:
        residents = self.cells.get(c)
        return list(residents) if residents else []

    def occupied_within(self, c: CellId, radius: int) -> Iterator[tuple[CellId, dict[int, Point]]]:
        """Yield ``(cell, residents)`` for nonempty cells within ``radius`` of ``c``.

        Scans whichever is smaller: the box of candidate ids or the table of
        occupied cells.
        """
        cells = self.cells
        side = 2 * radius + 1
        if len(cells) < side * side:
            cx, cy = c
            for d, residents in cells.items():
                if abs(d[0] - cx) <= radius and abs(d[1] - cy) <= radius:
                    yield d, residents
        else:
            get = cells.get
            for d in neighbor_cells(c, radius):
                residents = get(d)
                if residents:
                    yield d, residents

    def cell_stats(self, c: CellId, radius: int) -> tuple[int, int]:
        total = sum(len(r) for _, r in self.occupied_within(c, radius))
        return self.count(c), total

    def adjacent(self, u: int, v: int) -> bool:
        if u == v:
            raise GridError("self-adjacency is undefined")
        return close(self.point(u), self.point(v))

    def near(self, p: Point) -> Iterator[tuple[int, Point]]:
        """Active vertices within distance 1 of ``p`` (``p`` itself may be inactive)."""
        cx, cy = cell_of(p)
        get = self.cells.get
        px, py = p
        for dx in range(-2, 3):
            for dy in range(-2, 3):
                residents = get((cx + dx, cy + dy))
                if residents:
                    for u, q in residents.items():
                        ex = q[0] - px
                        ey = q[1] - py
                        if ex * ex + ey * ey <= 1.0:
                            yield u, q

    def neighbors_of(self, v: int) -> list[int]:
        p = self.point(v)
        return [u for u, _ in self.near(p) if u != v]

    def induced_udg(self, vertices: Iterable[int]) -> dict[int, set[int]]:
        """Adjacency sets of the unit disk graph induced by ``vertices``."""
        members = set(vertices)
        for v in members:
            if v not in self.points:
                raise UnknownVertexError(f"vertex {v} is not active")
        graph: dict[int, set[int]] = {v: set() for v in members}
        for v in members:
            nbrs = graph[v]
            for u, _ in self.near(self.points[v]):
                if u != v and u in members:
                    nbrs.add(u)
        return graph
