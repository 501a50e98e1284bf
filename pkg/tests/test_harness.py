import json

from udkernel.harness import DynamicUDG, diff_run, run_trace
from udkernel.trace import Header, Insert, Query, generate_trace, parse_trace, verify_witness

PATH_TRIPLE = "H PATHK 3 PATH\nI 0 0 0\nI 1 0.6 0\nI 2 1.2 0\nQ PATH 3\nQ VC 1\nQ VC 0\n"
SQUARE = "I 0 0 0\nI 1 0.9 0\nI 2 0.9 0.9\nI 3 0 0.9\nQ FVS 1\nQ FVS 0\nQ CP 1\nQ CP 2\n"


def test_run_path_triple():
    report = run_trace(parse_trace(PATH_TRIPLE))
    assert [a.decision for a in report.answers] == [True, True, False]
    assert report.answers[1].witness == [1]
    assert verify_witness("PATH", {0: (0, 0), 1: (0.6, 0), 2: (1.2, 0)}, 3, report.answers[0].witness)
    lines = report.answer_lines().splitlines()
    assert lines[0].startswith("A 0 YES ")
    assert lines[1] == "A 1 YES 1"
    assert lines[2] == "A 2 NO"


def test_run_square():
    report = run_trace(parse_trace(SQUARE))
    assert [a.decision for a in report.answers] == [True, False, True, False]
    assert report.stats["skeleton_vertices"] == 1
    assert report.stats["core_vertices"] == 0


def test_empty_trace():
    report = run_trace([])
    assert report.answers == [] and report.passed
    assert report.answer_lines() == ""


def test_cp_answer_line_lists_cycles():
    text = SQUARE.replace("Q", "# Q") + "I 4 20 20\nI 5 20.9 20\nI 6 20.9 20.9\nI 7 20 20.9\nQ CP 2\n"
    (a,) = run_trace(parse_trace(text)).answers
    line = a.line()
    assert line.startswith("A 0 YES ") and line.count("|") == 1


def test_diff_run_examples():
    for text in (PATH_TRIPLE, SQUARE):
        report = diff_run(parse_trace(text))
        assert report.passed, report.mismatches
        assert all(a.oracle == a.decision for a in report.answers)


def test_single_cell_decision_flips_at_kth_insert():
    for k in (2, 3, 4):
        events = [Header(k, "PATH")]
        for v in range(k + 1):
            events += [Insert(v, (0.2 + 0.01 * v, 0.2)), Query("PATH", k)]
        report = diff_run(events)
        assert report.passed, report.mismatches
        assert [a.decision for a in report.answers] == [v >= k - 1 for v in range(k + 1)]


def test_random_traces_pass():
    for seed in range(8):
        report = diff_run(generate_trace(seed, events=60, layout="lattice" if seed % 2 else "uniform"))
        assert report.passed, report.mismatches
        assert report.checks["answer"] == len(report.answers) > 0
        assert report.checks["skeleton"] == report.checks["containment"] == report.checks["kpath"] > 0


def test_replay_is_deterministic():
    events = generate_trace(5, events=80)
    assert run_trace(events).answer_lines() == run_trace(events).answer_lines()


def test_report_json():
    report = diff_run(generate_trace(6, events=50))
    doc = json.loads(report.to_json())
    assert doc["mismatches"] == []
    assert len(doc["answers"]) == sum(1 for e in generate_trace(6, events=50) if isinstance(e, Query))
    assert "update:fvs_cp" in doc["timing"]
    assert {"n", "vc_kernel", "core_vertices", "skeleton_vertices", "trees"} <= set(doc["stats"])


def tampered(hook, seed=2, layout="uniform"):
    events = generate_trace(seed, events=80, mix=(0.8, 0.1, 0.1), layout=layout)
    return diff_run(events, tamper=hook)


def test_tampered_vertex_cover_kernel_is_caught():
    def hook(eng: DynamicUDG, i):
        if i == 30 and eng.vc.members:
            eng.vc.members.discard(min(eng.vc.members))

    report = tampered(hook)
    assert any(m.startswith("[containment]") for m in report.mismatches)


def test_tampered_kpath_flag_is_caught():
    def hook(eng, i):
        if i == 30:
            kp = eng.kpath
            c = next(iter(kp.cluster_count))
            kp._set(c, None if kp.flag(c) else [0] * kp.k)

    assert not tampered(hook).passed


def test_tampered_skeleton_is_caught():
    def hook(eng, i):
        trees = eng.shell.trees
        if i >= 30 and trees:
            trees.pop(min(trees))

    assert not tampered(hook, layout="lattice").passed


def test_structure_error_ends_the_replay():
    def hook(eng, i):
        if i == 30:
            eng.shell.node.clear()

    report = tampered(hook, layout="lattice")
    assert not report.passed
    assert report.mismatches[-1].startswith("[error]")


def test_tampered_core_is_caught():
    def hook(eng, i):
        if i == 40:
            eng.core.vcore.clear()

    assert not tampered(hook).passed
