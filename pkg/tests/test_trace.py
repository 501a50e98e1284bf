import pytest
from hypothesis import given, strategies as st

from udkernel.trace import (
    Delete,
    Header,
    Insert,
    Query,
    TraceError,
    format_trace,
    generate_trace,
    parse_trace,
    verify_witness,
)


def test_parse_basic_lines():
    assert parse_trace("I 0 0.0 0.0") == [Insert(0, (0.0, 0.0))]
    assert parse_trace("Q VC 2") == [Query("VC", 2)]
    text = "# comment\n\nH PATHK 3 CYCLE\nI 1 0.5 -2\nQ PATH 3\nD 1\n"
    assert parse_trace(text) == [Header(3, "CYCLE"), Insert(1, (0.5, -2.0)), Query("PATH", 3), Delete(1)]


@pytest.mark.parametrize(
    "text, lineno",
    [
        ("D 7", 1),
        ("I 7 0 0\nI 7 1 1", 2),
        ("I 0 0 0\nX 1", 2),
        ("I 0 a 0", 1),
        ("I 0 nan 0", 1),
        ("Q PATH 3", 1),
        ("H PATHK 3 PATH\nQ PATH 4", 2),
        ("Q CP 0", 1),
        ("Q VC -1", 1),
        ("Q XYZ 1", 1),
        ("H PATHK 1 PATH", 1),
        ("H PATHK 2 CYCLE", 1),
        ("I 0 0", 1),
    ],
)
def test_parse_errors_carry_line_numbers(text, lineno):
    with pytest.raises(TraceError) as err:
        parse_trace(text)
    assert err.value.lineno == lineno
    assert f"line {lineno}" in str(err.value)


def test_reinsert_after_delete_is_allowed():
    assert len(parse_trace("I 3 0 0\nD 3\nI 3 1 1")) == 3


def test_generator_is_deterministic():
    assert generate_trace(9, events=80) == generate_trace(9, events=80)
    assert generate_trace(9, events=80) != generate_trace(10, events=80)


def test_generator_without_deletes_grows_monotonically():
    events = generate_trace(1, n=25, events=200, mix=(1.0, 0.0, 0.2))
    assert not any(isinstance(e, Delete) for e in events)
    assert sum(isinstance(e, Insert) for e in events) == 25


def test_generator_respects_query_mix():
    events = generate_trace(2, events=100, problems=["FVS"], path_k=None)
    qs = [e for e in events if isinstance(e, Query)]
    assert qs and all(q.problem == "FVS" for q in qs)
    assert not any(isinstance(e, Header) for e in events)


def test_generator_keeps_points_off_the_threshold():
    events = generate_trace(3, n=40, events=300)
    live = {}
    for e in events:
        if isinstance(e, Insert):
            for q in live.values():
                d = ((e.p[0] - q[0]) ** 2 + (e.p[1] - q[1]) ** 2) ** 0.5
                assert abs(d - 1.0) >= 1e-6
            live[e.v] = e.p
        elif isinstance(e, Delete):
            del live[e.v]
    assert all(0 <= c <= 6 for p in live.values() for c in p)


@given(st.integers(0, 10_000), st.sampled_from(["uniform", "lattice"]))
def test_format_round_trips(seed, layout):
    events = generate_trace(seed, events=40, layout=layout)
    assert parse_trace(format_trace(events)) == events


TRIPLE = {0: (0.0, 0.0), 1: (0.6, 0.0), 2: (1.2, 0.0)}
SQUARE = {0: (0.0, 0.0), 1: (0.9, 0.0), 2: (0.9, 0.9), 3: (0.0, 0.9)}


def test_verify_witness_examples():
    assert verify_witness("VC", TRIPLE, 1, [1])
    assert not verify_witness("VC", TRIPLE, 1, [0])
    assert not verify_witness("FVS", SQUARE, 0, [])
    assert verify_witness("FVS", SQUARE, 1, [2])
    assert verify_witness("PATH", TRIPLE, 3, [0, 1, 2])
    assert not verify_witness("PATH", TRIPLE, 3, [0, 2, 1])
    assert not verify_witness("CYCLE", TRIPLE, 3, [0, 1, 2])
    assert verify_witness("CYCLE", SQUARE, 4, [0, 1, 2, 3])
    assert verify_witness("CP", SQUARE, 1, [[0, 1, 2, 3]])
    assert not verify_witness("CP", SQUARE, 1, [[0, 2, 1, 3]])
    two = dict(SQUARE)
    two.update({v + 4: (x + 0.3, y) for v, (x, y) in SQUARE.items()})
    assert not verify_witness("CP", two, 2, [[0, 1, 2, 3], [1, 5, 6, 2]])
    tri = {0: (0.0, 0.0), 1: (0.5, 0.0), 2: (0.25, 0.4)}
    assert verify_witness("THS", tri, 1, [2])
    assert not verify_witness("THS", tri, 0, [])
    assert not verify_witness("VC", TRIPLE, 0, [1])
    assert not verify_witness("VC", TRIPLE, 2, [1, 1])
    assert not verify_witness("VC", TRIPLE, 1, None)
