"""Dynamic k-path / k-cycle detection over a unit disk graph.

Every nonempty cell keeps a yes/no flag for "the cells within 2k of me hold a
k-path (or k-cycle)" plus a stored witness.  Yes-cells sit in an ordered list
whose head answers queries.
"""

from __future__ import annotations

from collections import OrderedDict

from .grid import CellId, GridIndex, Point, cell_distance, cell_of
from .solvers import CYCLE, PATH, solve_kpath


def heavy_threshold(k: int) -> int:
    """Cluster size that forces some cell of the cluster to hold k vertices."""
    return k * (4 * k + 1) ** 2


class KPathIndex:
    def __init__(self, grid: GridIndex, k: int, mode: str = PATH, method: str = "auto"):
        if mode not in (PATH, CYCLE):
            raise ValueError(f"mode must be PATH or CYCLE, got {mode!r}")
        if mode == PATH and k < 2:
            raise ValueError("PATH needs k >= 2")
        if mode == CYCLE and k < 3:
            raise ValueError("CYCLE needs k >= 3")
        self.grid = grid
        self.k = k
        self.mode = mode
        self.method = method
        self.radius = 2 * k
        self.threshold = heavy_threshold(k)
        self.cluster_count: dict[CellId, int] = {}
        self.witness: dict[CellId, list[int]] = {}
        self.yes_list: OrderedDict[CellId, None] = OrderedDict()
        self.heavy_cells: set[CellId] = set()
        self.heavy_pi: set[CellId] = set()
        self.list_accesses = 0
        self.solver_calls = 0
        for c in list(grid.cells):
            self._sync_heavy(c)
        for c in list(grid.cells):
            self.cluster_count[c] = grid.cell_stats(c, self.radius)[1]
        for c in sorted(grid.cells):
            self._refresh(c, {})

    # -- flags -----------------------------------------------------------

    def flag(self, c: CellId) -> bool:
        return c in self.witness

    def flags(self) -> dict[CellId, bool]:
        return {c: c in self.witness for c in self.cluster_count}

    def _set(self, c: CellId, pi: list[int] | None, heavy: bool = False) -> None:
        """Store the flag of ``c``; same-cell witnesses are kept at the list head."""
        yes = self.yes_list
        if pi is None:
            if self.witness.pop(c, None) is not None:
                del yes[c]
            self.heavy_pi.discard(c)
            return
        self.witness[c] = pi
        if heavy:
            if c not in self.heavy_pi:
                self.heavy_pi.add(c)
                yes[c] = None
                yes.move_to_end(c, last=False)
        elif c not in yes or c in self.heavy_pi:
            self.heavy_pi.discard(c)
            yes[c] = None
            yes.move_to_end(c)

    def _sync_heavy(self, c: CellId) -> None:
        if self.grid.count(c) >= self.k:
            self.heavy_cells.add(c)
        else:
            self.heavy_cells.discard(c)

    def _heavy_near(self, c: CellId, r: int) -> list[CellId]:
        if len(self.heavy_cells) <= (2 * r + 1) ** 2:
            return [h for h in self.heavy_cells if cell_distance(h, c) <= r]
        return [d for d, res in self.grid.occupied_within(c, r) if len(res) >= self.k]

    def _heavy_in_cluster(self, c: CellId, pool: list[CellId] | None = None) -> CellId | None:
        r = self.radius
        if pool is None:
            near = self._heavy_near(c, r)
        else:
            near = [h for h in pool if cell_distance(h, c) <= r]
        return min(near) if near else None

    def _heavy_witness(self, h: CellId) -> list[int]:
        return sorted(self.grid.cells[h])[: self.k]

    def _refresh(self, c: CellId, memo: dict, pool: list[CellId] | None = None) -> None:
        h = self._heavy_in_cluster(c, pool)
        if h is not None:
            self._set(c, self._heavy_witness(h), heavy=True)
        else:
            self._set(c, self._solve(c, memo))

    def _solve(self, c: CellId, memo: dict) -> list[int] | None:
        members = frozenset(
            v for _, res in self.grid.occupied_within(c, self.radius) for v in res
        )
        if len(members) < self.k:
            return None
        if members not in memo:
            self.solver_calls += 1
            memo[members] = solve_kpath(
                self.grid.induced_udg(members), self.k, self.mode, self.method
            )
        return memo[members]

    # -- updates ---------------------------------------------------------

    def update(self, op: str, v: int, p: Point) -> set[CellId]:
        """Refresh state after the grid applied ``op`` on ``v`` at ``p``.

        Returns the cells whose flag was re-evaluated.
        """
        c = cell_of(p)
        grid = self.grid
        self._sync_heavy(c)
        step = 1 if op == "insert" else -1
        touched = []
        for d, _ in grid.occupied_within(c, self.radius):
            if d in self.cluster_count:
                self.cluster_count[d] += step
            else:
                self.cluster_count[d] = grid.cell_stats(d, self.radius)[1]
            touched.append(d)
        if op == "delete" and not grid.count(c):
            self.cluster_count.pop(c, None)
            self._set(c, None)
        memo: dict = {}
        # heavy cells that can reach any touched cluster
        pool = self._heavy_near(c, 2 * self.radius)
        for d in sorted(touched):
            pi = self.witness.get(d)
            if d in self.heavy_pi or self._heavy_in_cluster(d, pool) is not None:
                self._refresh(d, memo, pool)
            elif op == "insert":
                # insertions never destroy an existing witness
                if pi is None:
                    self._refresh(d, memo, pool)
            elif pi is not None and v in pi:
                # deletions never create one
                self._refresh(d, memo, pool)
        return set(touched)

    # -- queries ---------------------------------------------------------

    def query_decision(self) -> bool:
        self.list_accesses += 1
        return bool(self.yes_list)

    def query_witness(self) -> list[int] | None:
        self.list_accesses += 1
        if not self.yes_list:
            return None
        head = next(iter(self.yes_list))
        return list(self.witness[head])

    # -- checking --------------------------------------------------------

    def check_invariants(self, solve: bool = False) -> None:
        grid = self.grid
        assert set(self.cluster_count) == set(grid.cells), "cluster table out of sync"
        for c, cnt in self.cluster_count.items():
            assert cnt == grid.cell_stats(c, self.radius)[1], f"cluster count of {c}"
        assert set(self.yes_list) == set(self.witness), "yes-list differs from flags"
        order = list(self.yes_list)
        lead = len(self.heavy_pi)
        assert set(order[:lead]) == self.heavy_pi, "same-cell witnesses must lead the list"
        for c in self.heavy_pi:
            pi = self.witness[c]
            assert len({grid.cell_of_vertex(u) for u in pi}) == 1
        for c, pi in self.witness.items():
            assert len(pi) == self.k and len(set(pi)) == self.k
            for u in pi:
                assert u in grid.points and cell_distance(grid.cell_of_vertex(u), c) <= self.radius
            pairs = list(zip(pi, pi[1:]))
            if self.mode == CYCLE:
                pairs.append((pi[-1], pi[0]))
            assert all(grid.adjacent(a, b) for a, b in pairs), f"bad witness at {c}"
        if solve:
            memo: dict = {}
            for c in grid.cells:
                truth = self._heavy_in_cluster(c) is not None or self._solve(c, memo) is not None
                assert truth == (c in self.witness), f"flag of {c} is stale"
