import random

import pytest
from hypothesis import given, settings, strategies as st

from udkernel.core import CoreCluster
from udkernel.grid import GridIndex
from udkernel.lcforest import CyLinkCutForest, PyLinkCutForest
from udkernel.oracle import oracle_solve
from udkernel.shell import ShellError, ShellState
from udkernel.trace import verify_witness

BACKENDS = [PyLinkCutForest] + ([CyLinkCutForest] if CyLinkCutForest else [])

# triangle spread over two cells plus a 0.6-spaced path; everything up to x=4.5 is core
CORE_TRIANGLE = [(0.0, 0.0), (0.9, 0.0), (0.45, 0.7)]
CORE_PATH = [(1.5 + 0.6 * i, 0.0) for i in range(6)]
SQUARE = [(0.0, 0.0), (0.9, 0.0), (0.9, 0.9), (0.0, 0.9)]


class World:
    def __init__(self, forest_cls=None):
        self.grid = GridIndex()
        self.core = CoreCluster(self.grid)
        kw = {"forest_cls": forest_cls} if forest_cls else {}
        self.shell = ShellState(self.grid, self.core, **kw)
        self.next_id = 0

    def raw_insert(self, p):
        v = self.next_id
        self.next_id += 1
        self.grid.insert(v, p)
        return v, self.core.update("insert", v, p)

    def add(self, p):
        v, delta = self.raw_insert(p)
        self.shell.apply_update("insert", v, p, delta)
        return v

    def add_all(self, pts):
        return [self.add(p) for p in pts]

    def remove(self, v):
        p = self.grid.point(v)
        self.grid.delete(v)
        self.shell.apply_update("delete", v, p, self.core.update("delete", v, p))

    def scratch(self):
        return ShellState.rebuild_from_scratch(self.grid, self.core)

    def agree(self):
        self.shell.check_invariants()
        assert self.shell.canonical_form() == self.scratch().canonical_form()

    def edges(self):
        return [(e.a, e.b, e.contracted) for e in self.shell.edges.values()]

    def tree_of(self, v):
        s = self.shell
        return s.trees.get(s._root(v))


def core_world():
    w = World()
    w.add_all(CORE_TRIANGLE + CORE_PATH)
    assert all(w.core.in_core(v) for v in range(9))
    return w


def offset(pts, dx, dy=0.0):
    return [(x + dx, y + dy) for x, y in pts]


# -- scratch construction ---------------------------------------------------


def test_all_core_means_empty_shell():
    w = World()
    w.add_all([(0.0, 0.0)] * 3 + [(0.5, 0.5), (1.2, 0.3)])
    assert not w.shell.mverts and not w.shell.node
    assert w.scratch().stats()["forest_vertices"] == 0


def test_square_becomes_anchor_with_loop():
    w = World()
    w.add_all(SQUARE)
    s = w.scratch()
    (a, m), = s.mverts.items()
    assert m.anchor and not m.boundary
    (e,) = s.edges.values()
    assert e.a == e.b == a and e.contracted
    (verts,) = s.tree_groups().values()
    assert len(verts) == 3
    assert sorted(br[1] for br in s.trees[s._root(verts[0])].bridges) == [a, a]
    w.agree()


def test_bare_path_is_peeled():
    w = World()
    w.add_all([(0.0, 0.0), (0.6, 0.0), (1.2, 0.0)])
    s = w.scratch()
    assert not s.mverts and not s.edges
    assert [sorted(g) for g in s.tree_groups().values()] == [[0, 1, 2]]
    assert not s.trees
    w.agree()


# -- dynamic updates --------------------------------------------------------


@pytest.mark.parametrize("forest_cls", BACKENDS, ids=lambda c: c.backend)
def test_closing_a_square(forest_cls):
    w = World(forest_cls)
    w.add_all(SQUARE[:3])
    assert not w.shell.mverts
    w.add(SQUARE[3])
    assert len(w.shell.mverts) == 1 and len(w.shell.edges) == 1
    w.agree()


def test_deleting_a_leaf():
    w = core_world()
    b, x1, x2 = w.add_all([(5.1, 0.0), (5.7, 0.0), (6.3, 0.0)])
    assert w.shell.mverts[b].boundary
    before_m = (dict(w.shell.mverts), list(w.shell.edges))
    w.remove(x2)
    assert (dict(w.shell.mverts), list(w.shell.edges)) == before_m
    assert set(w.shell.node) == {x1}
    w.agree()


def test_update_inside_core_leaves_shell_alone():
    w = core_world()
    w.add_all([(5.1, 0.0), (5.7, 0.0)])
    before = w.shell.canonical_form()
    v = w.add((1.0, -2.5))
    assert w.core.in_core(v)
    assert w.shell.canonical_form() == before
    w.agree()


def test_inconsistent_delta_is_rejected():
    w = core_world()
    w.add((5.1, 0.0))
    v, delta = w.raw_insert((40.0, 40.0))
    delta.entering.add(v + 100)
    with pytest.raises(ShellError):
        w.shell.apply_update("insert", v, (40.0, 40.0), delta)


# -- push cases -------------------------------------------------------------


def test_push_onto_bridgeless_tree():
    w = World()
    x = w.add((20.0, 20.0))
    v, delta = w.raw_insert((20.6, 20.0))
    assert delta.empty()
    w.shell.push(v)
    assert w.tree_of(x).bridges == [(x, v)]
    assert not w.shell.edges
    w.shell.clean()
    w.agree()


def test_push_at_far_end_of_one_bridge_path():
    w = core_world()
    b, x1, x2, x3 = w.add_all([(5.1, 0.0), (5.7, 0.0), (6.3, 0.0), (6.9, 0.0)])
    assert w.tree_of(x1).bridges == [(x1, b)]
    v, _ = w.raw_insert((7.5, 0.0))
    w.shell.push(v)
    (eid,) = w.shell.edges
    path = w.shell.expand_contracted_edge(eid)
    assert path in ([b, x1, x2, x3, v], [v, x3, x2, x1, b])
    w.shell.clean()
    w.agree()


def test_push_at_interior_of_two_bridge_tree():
    w = core_world()
    b, x1, x2, x3 = w.add_all([(5.1, 0.0), (6.0, 0.0), (6.0, 0.9), (5.1, 0.9)])
    (eid,) = w.shell.edges
    e = w.shell.edges[eid]
    assert e.a == e.b == b
    assert w.shell.expand_contracted_edge(eid) in ([b, x1, x2, x3, b], [b, x3, x2, x1, b])
    v, _ = w.raw_insert((6.0, 1.8))
    w.shell.push(v)
    assert x2 in w.shell.mverts
    ends = sorted((min(a, c), max(a, c), k) for a, c, k in w.edges())
    assert ends == sorted([(b, x2, True), (b, x2, True), (x2, v, False)])
    w.shell.clean()
    w.agree()
    assert x2 not in w.shell.mverts


# -- pop and clean ----------------------------------------------------------


def test_pop_forest_singleton():
    w = World()
    x = w.add((10.0, 10.0))
    w.shell.pop(x)
    assert not w.shell.node and not w.shell.mverts


def test_pop_middle_of_two_bridge_path_then_restore():
    w = core_world()
    b, x1, x2, x3 = w.add_all([(5.1, 0.0), (6.0, 0.0), (6.0, 0.9), (5.1, 0.9)])
    before = w.shell.canonical_form()
    w.shell.pop(x2)
    assert not w.shell.edges
    assert w.tree_of(x1).bridges == [(x1, b)]
    assert w.tree_of(x3).bridges == [(x3, b)]
    w.shell.push(x2)
    w.shell.clean()
    assert w.shell.canonical_form() == before
    w.agree()


def test_pop_skeleton_vertex_with_direct_edge():
    w = core_world()
    w.add((4.5, 1.2))
    b1, b2 = w.add_all([(5.1, 0.0), (5.1, 0.95)])
    assert w.shell.mverts[b1].boundary and w.shell.mverts[b2].boundary
    assert w.edges() in ([(b1, b2, False)], [(b2, b1, False)])
    w.shell.pop(b2)
    assert not w.shell.edges and list(w.shell.mverts) == [b1]


def two_boundary_world():
    w = core_world()
    b1, b2, m = w.add_all([(5.1, 0.5), (5.1, -0.6), (5.8, -0.05)])
    assert w.shell.mverts[b1].boundary and w.shell.mverts[b2].boundary
    return w, b1, b2, m


def test_single_vertex_backing_edge():
    w, b1, b2, m = two_boundary_world()
    (eid,) = w.shell.edges
    assert w.shell.expand_contracted_edge(eid) in ([b1, m, b2], [b2, m, b1])
    w.agree()


def test_clean_contracts_special_degree_two_vertex():
    w, b1, b2, m = two_boundary_world()
    w.shell.pop(m)
    w.shell.push(m)
    assert w.shell.mverts[m].special
    assert sorted(k for _, _, k in w.edges()) == [False, False]
    w.shell.clean()
    (eid,) = w.shell.edges
    assert w.shell.expand_contracted_edge(eid) in ([b1, m, b2], [b2, m, b1])
    w.agree()


def test_clean_absorbs_special_pendant():
    w = core_world()
    b, x = w.add_all([(5.1, 0.0), (5.7, 0.0)])
    w.shell.pop(x)
    w.shell.push(x)
    assert x in w.shell.mverts
    w.shell.clean()
    assert x not in w.shell.mverts
    assert w.tree_of(x).bridges == [(x, b)]
    w.agree()


def test_boundary_vertex_of_degree_two_is_kept():
    w = core_world()
    b = w.add((5.1, 0.0))
    w.add_all([(6.0, 0.0), (6.0, 0.9), (5.1, 0.9)])
    assert w.shell.degree(b) == 2
    assert b in w.shell.mverts and not w.shell.mverts[b].anchor
    w.agree()


# -- kernel and queries -----------------------------------------------------


def test_glue_kernel_without_shell():
    w = World()
    w.add_all(CORE_TRIANGLE)
    g = w.shell.glue_kernel()
    assert sorted(g.vertices) == [0, 1, 2]
    assert sorted(tuple(sorted(e)) for e in g.edges) == [(0, 1), (0, 2), (1, 2)]


def test_glue_kernel_with_pendant_path():
    w = core_world()
    b, x1, x2 = w.add_all([(5.1, 0.0), (5.7, 0.0), (6.3, 0.0)])
    g = w.shell.glue_kernel()
    assert set(g.vertices) == set(range(9)) | {b}
    assert sum(1 for e in g.edges if b in e) == 1
    core_edges = sum(len(s) for s in w.grid.induced_udg(range(9)).values()) // 2
    assert len(g.edges) == core_edges + 1


def test_fvs_queries():
    w = World()
    w.add_all([(0.0, 0.0), (0.6, 0.0), (1.2, 0.0)])
    assert w.shell.query_fvs(0) == []
    w = World()
    w.add_all(SQUARE)
    assert w.shell.query_fvs(0) is None
    (v,) = w.shell.query_fvs(1)
    assert v in range(4)
    w.add_all(offset(CORE_TRIANGLE, 30.0))
    assert w.shell.query_fvs(1) is None
    got = w.shell.query_fvs(2)
    assert verify_witness("FVS", w.grid.points, 2, got)


def test_cp_queries():
    w = World()
    w.add_all(SQUARE)
    (cyc,) = w.shell.query_cp(1)
    assert verify_witness("CP", w.grid.points, 1, [cyc])
    assert sorted(cyc) == [0, 1, 2, 3]
    assert w.shell.query_cp(2) is None
    w.add_all(offset(SQUARE, 20.0))
    got = w.shell.query_cp(2)
    assert verify_witness("CP", w.grid.points, 2, got)
    with pytest.raises(ValueError):
        w.shell.query_cp(0)


def test_lifted_cycle_through_contracted_edges():
    w = core_world()
    b = w.add((5.1, 0.0))
    w.add_all([(6.0, 0.0), (6.0, 0.9), (5.1, 0.9)])
    got = w.shell.query_cp(1)
    assert verify_witness("CP", w.grid.points, 1, got)
    truth, _ = oracle_solve("CP", dict(w.grid.points), 2)
    assert (w.shell.query_cp(2) is not None) == truth


# -- golden comparison ------------------------------------------------------


def lattice_point(i, j, jx, jy):
    return (i * 0.9 + jx, j * 0.9 + jy)


steps = st.lists(
    st.tuples(
        st.booleans(),
        st.integers(0, 6),
        st.integers(0, 6),
        st.floats(-0.03, 0.03),
        st.floats(-0.03, 0.03),
        st.integers(0, 999),
    ),
    min_size=1,
    max_size=60,
)


@settings(max_examples=80, deadline=None)
@given(steps, st.sampled_from(BACKENDS), st.booleans())
def test_incremental_skeleton_matches_rebuild(script, forest_cls, lattice):
    w = World(forest_cls)
    used = {}
    for add, i, j, jx, jy, pick in script:
        if add or not w.grid.points:
            if lattice:
                if (i, j) in used:
                    continue
                p = lattice_point(i, j, jx, jy)
            else:
                p = (i * 0.8 + jx * 10, j * 0.8 + jy * 10)
            v = w.add(p)
            used[(i, j)] = v
        else:
            v = sorted(w.grid.points)[pick % len(w.grid.points)]
            used = {key: u for key, u in used.items() if u != v}
            w.remove(v)
        w.agree()


def churn(seed, side=7, cap=38, steps=1500, stray=0.05):
    """Fill a jittered lattice to ``cap`` points, then alternate deletes and inserts.

    A few off-lattice points create triangles, hence a core with boundary
    vertices around it.
    """
    rng = random.Random(seed)
    w = World()
    free = [(i, j) for i in range(side) for j in range(side)]
    site = {}
    for _ in range(steps):
        if len(site) >= cap:
            v = rng.choice(sorted(site))
            w.remove(v)
            spot = site.pop(v)
            if spot is not None:
                free.append(spot)
        elif rng.random() < stray:
            v = w.add((rng.uniform(0, side * 0.9), rng.uniform(0, side * 0.9)))
            site[v] = None
        else:
            i, j = free.pop(rng.randrange(len(free)))
            v = w.add(lattice_point(i, j, rng.uniform(-0.03, 0.03), rng.uniform(-0.03, 0.03)))
            site[v] = (i, j)
        yield w


@pytest.mark.parametrize("seed, stray", [(1, 0.0), (2, 0.0), (3, 0.02), (4, 0.02)])
def test_lattice_churn_matches_rebuild(seed, stray):
    peak = 0
    for w in churn(seed, stray=stray):
        w.agree()
        peak = max(peak, len(w.shell.mverts))
    assert peak >= 10
