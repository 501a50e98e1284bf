import math

import pytest
from hypothesis import given, settings, strategies as st

from udkernel.grid import GridIndex, cell_distance, cell_of
from udkernel.kpath import KPathIndex, heavy_threshold
from udkernel.solvers import CYCLE, PATH
from udkernel.trace import verify_witness

SIDE = 1 / math.sqrt(2)


def insert(grid, idx, v, p):
    grid.insert(v, p)
    idx.update("insert", v, p)


def delete(grid, idx, v):
    p = grid.point(v)
    grid.delete(v)
    idx.update("delete", v, p)


def test_threshold_values():
    assert heavy_threshold(2) == 162
    assert heavy_threshold(3) == 507


def test_rejects_small_k():
    with pytest.raises(ValueError):
        KPathIndex(GridIndex(), 1, PATH)
    with pytest.raises(ValueError):
        KPathIndex(GridIndex(), 2, CYCLE)


def test_path_triple():
    grid = GridIndex()
    idx = KPathIndex(grid, 3, PATH)
    assert idx.query_decision() is False
    assert idx.query_witness() is None
    for v, x in enumerate((0.0, 0.6, 1.2)):
        insert(grid, idx, v, (x, 0.0))
        assert idx.query_decision() == (v == 2)
    w = idx.query_witness()
    assert w in ([0, 1, 2], [2, 1, 0])
    assert verify_witness(PATH, grid.points, 3, w)
    for v in range(3):
        delete(grid, idx, v)
    assert idx.query_decision() is False


def test_path_triple_has_no_triangle():
    grid = GridIndex()
    idx = KPathIndex(grid, 3, CYCLE)
    for v, x in enumerate((0.0, 0.6, 1.2)):
        insert(grid, idx, v, (x, 0.0))
    assert idx.query_decision() is False


def test_colocated_triple_is_a_cycle():
    grid = GridIndex()
    idx = KPathIndex(grid, 3, CYCLE)
    for v in range(3):
        insert(grid, idx, v, (2.0, 2.0))
    assert idx.query_decision()
    w = idx.query_witness()
    assert sorted(w) == [0, 1, 2]
    assert verify_witness(CYCLE, grid.points, 3, w)


def fill_cluster(k, per_cell_first):
    """Spread points over the 2k-cluster of cell (0, 0); returns the grid and index."""
    grid = GridIndex()
    idx = KPathIndex(grid, k, PATH)
    r = 2 * k
    cells = [(i, j) for i in range(-r, r + 1) for j in range(-r, r + 1)]
    v = 0
    for rep in range(per_cell_first):
        for i, j in cells:
            # stay inside the cell, away from its borders
            p = ((i + 0.2 + 0.15 * rep) * SIDE, (j + 0.3) * SIDE)
            assert cell_of(p) == (i, j)
            insert(grid, idx, v, p)
            v += 1
    return grid, idx, cells, v


@pytest.mark.parametrize("k", [2, 3])
def test_cluster_filled_to_threshold_has_a_same_cell_witness(k):
    grid, idx, cells, v = fill_cluster(k, k - 1)
    assert len(cells) * k == heavy_threshold(k)
    assert not idx.heavy_cells
    assert grid.cell_stats((0, 0), 2 * k)[1] == heavy_threshold(k) - len(cells)
    # top the cluster up to f(k) points: some cell must now hold k of them
    for i, j in cells:
        p = ((i + 0.2 + 0.15 * (k - 1)) * SIDE, (j + 0.6) * SIDE)
        insert(grid, idx, v, p)
        v += 1
    assert grid.cell_stats((0, 0), 2 * k)[1] == heavy_threshold(k)
    assert idx.heavy_cells
    before = idx.list_accesses
    assert idx.query_decision()
    w = idx.query_witness()
    assert idx.list_accesses - before == 2
    assert len({grid.cell_of_vertex(u) for u in w}) == 1
    assert verify_witness(PATH, grid.points, k, w)
    idx.check_invariants(solve=True)


def test_head_prefers_same_cell_witness():
    grid = GridIndex()
    idx = KPathIndex(grid, 3, PATH)
    for v, x in enumerate((0.0, 0.6, 1.2)):
        insert(grid, idx, v, (x, 0.0))
    for v in range(3, 6):
        insert(grid, idx, v, (30.0, 30.0))
    w = idx.query_witness()
    assert sorted(w) == [3, 4, 5]
    delete(grid, idx, 4)
    w = idx.query_witness()
    assert verify_witness(PATH, grid.points, 3, w)
    idx.check_invariants(solve=True)


ops = st.lists(
    st.tuples(st.booleans(), st.floats(0, 5), st.floats(0, 5), st.integers(0, 100)),
    min_size=1,
    max_size=40,
)


@settings(max_examples=60, deadline=None)
@given(ops, st.sampled_from([(2, PATH), (3, PATH), (4, PATH), (3, CYCLE), (4, CYCLE)]))
def test_flags_change_only_near_the_update(script, cfg):
    k, mode = cfg
    grid = GridIndex()
    idx = KPathIndex(grid, k, mode)
    nxt = 0
    for add, x, y, pick in script:
        before = idx.flags()
        if add or not grid.points:
            p = (x, y)
            insert(grid, idx, nxt, p)
            nxt += 1
        else:
            v = sorted(grid.points)[pick % len(grid.points)]
            p = grid.point(v)
            delete(grid, idx, v)
        after = idx.flags()
        c = cell_of(p)
        for d in set(before) | set(after):
            if before.get(d, False) != after.get(d, False):
                assert cell_distance(c, d) <= 2 * k
        idx.check_invariants(solve=True)
        calls = idx.list_accesses
        idx.query_decision()
        assert idx.list_accesses - calls == 1
