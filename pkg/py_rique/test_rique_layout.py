import itertools
import os
import random
from typing import Sequence, Tuple

import pytest
from py_rique.corpus import all_labelled_graphs, random_graph, random_order
from py_rique.graph import Graph, normalize_edge, parse_graph
from py_rique.rique_layout import (
    Action,
    EdgeKind,
    LayoutError,
    LayoutFormatError,
    LinearLayout,
    PatternError,
    ScheduleError,
    build_schedule,
    classify_page,
    creates_pattern,
    find_pattern,
    page_is_queue,
    page_is_stack,
    parse_layout,
    positions,
    serialize_layout,
    validate_layout,
)


FIXTURES = os.path.join(os.path.dirname(__file__), "..", "fixtures")


def read_fixture(name: str) -> str:
    with open(os.path.join(FIXTURES, name), "r") as fin:
        return fin.read()


def complete(n: int) -> Graph:
    return Graph(n, itertools.combinations(range(n), 2))


k4 = complete(4)
k5 = complete(5)


def test_find_pattern_k5():
    witness = find_pattern(range(5), k5.edges)
    assert witness is not None
    assert (witness.e_a, witness.e_b, witness.e_c) == ((0, 4), (1, 3), (2, 4))
    assert witness.positions == (0, 1, 2, 3, 4, 4)


def test_find_pattern_smallest_left_ends():
    # (0,6) (2,4) (3,5) also forms the triple, with b=2
    page = [(0, 6), (2, 4), (3, 5), (0, 8), (1, 7), (3, 8)]
    witness = find_pattern(range(9), page)
    assert witness is not None
    assert witness.positions[:3] == (0, 1, 3)
    assert (witness.e_a, witness.e_b, witness.e_c) == ((0, 8), (1, 7), (3, 8))
    # the tie-break does not depend on the order edges are given in
    assert find_pattern(range(9), reversed(page)) == witness


def test_find_pattern_free():
    assert find_pattern(range(4), k4.edges) is None
    # a single edge, and crossing edges without an enclosing edge
    assert find_pattern([0, 1], [(0, 1)]) is None
    assert find_pattern(range(4), [(0, 2), (1, 3)]) is None
    # nesting and crossing are allowed when b' is not inside e_a
    assert find_pattern(range(5), [(0, 3), (1, 2), (1, 4)]) is None
    assert find_pattern(range(6), [(0, 4), (1, 3), (2, 5)]) is not None


def test_classify_page():
    labels = classify_page(range(4), k4.edges)
    heads = sorted(e for e, kind in labels.items() if kind is EdgeKind.HEAD)
    assert heads == [(1, 2)]

    with pytest.raises(PatternError) as info:
        classify_page(range(5), k5.edges)
    assert info.value.witness.e_b == (1, 3)


def test_k4_schedule():
    trace = build_schedule(range(4), [k4.edges])
    assert trace.replay() == [4]
    events = trace.events[0]
    assert len(events) == 2 * k4.m
    assert sum(ev.action is Action.REMOVE_HEAD for ev in events) == 1
    assert (2, Action.REMOVE_HEAD, (1, 2)) in events


def test_schedule_rejects_pattern():
    with pytest.raises(PatternError):
        build_schedule(range(5), [k5.edges])
    with pytest.raises(ScheduleError):
        build_schedule(range(5), [k5.edges], check=False)


def _check_schedule_agrees(g: Graph, order: Sequence[int]) -> Tuple[bool, str]:
    """Compare pattern-freeness of a single page with schedule feasibility.

    Returns:
        Tuple[bool, str]
        The bool indicates whether this check passed.
        The str is a comment for an assertion failure
    """
    free = find_pattern(order, g.edges) is None
    try:
        build_schedule(order, [g.edges], check=False).replay()
        feasible = True
    except ScheduleError:
        feasible = False
    if free == feasible:
        return (True, "")
    if free:
        return (False, f"schedule of a pattern-free page of {sorted(g.edges)} got stuck")
    return (False, f"page {sorted(g.edges)} with the forbidden triple was scheduled")


def test_schedule_equivalence_exhaustive():
    """All labelled graphs on up to five vertices under the identity
    order; relabelling makes this cover every graph under every order."""
    for n in range(1, 6):
        for g in all_labelled_graphs(n):
            result = _check_schedule_agrees(g, range(n))
            assert result[0], result[1]


def test_schedule_equivalence_random():
    rng = random.Random(395)
    for _ in range(300):
        n = rng.randint(2, 9)
        g = random_graph(n, rng)
        result = _check_schedule_agrees(g, random_order(n, rng))
        assert result[0], result[1]


def test_creates_pattern_matches_scan():
    rng = random.Random(12345)
    for _ in range(200):
        n = rng.randint(3, 8)
        g = random_graph(n, rng)
        order = random_order(n, rng)
        pos = positions(order)
        page: list = []
        spans: list = []
        for u, v in sorted(g.edges):
            span = tuple(sorted((pos[u], pos[v])))
            created = creates_pattern(spans, span)
            assert created == (find_pattern(order, page + [(u, v)]) is not None)
            if not created:
                page.append((u, v))
                spans.append(span)


def test_stack_and_queue_pages():
    # K4 on one page is rique, but neither a stack nor a queue page
    assert find_pattern(range(4), k4.edges) is None
    assert not page_is_stack(range(4), k4.edges)
    assert not page_is_queue(range(4), k4.edges)

    rng = random.Random(7)
    for _ in range(200):
        n = rng.randint(2, 8)
        g = random_graph(n, rng)
        order = random_order(n, rng)
        if page_is_stack(order, g.edges) or page_is_queue(order, g.edges):
            assert find_pattern(order, g.edges) is None


def test_validate_k7_fixture():
    g = parse_graph(read_fixture("k7.graph"))
    layout = parse_layout(read_fixture("k7_two_page.layout"))
    report = validate_layout(g, layout)
    assert report.valid
    assert report.page_count == 2
    assert report.trace is not None
    text = report.to_text()
    assert text.startswith("valid: true\n")
    assert "page: 1 ok" in text and "page: 2 ok" in text


def test_validate_k5_one_page():
    g = parse_graph(read_fixture("k5.graph"))
    layout = parse_layout(read_fixture("k5_one_page.layout"))
    report = validate_layout(g, layout)
    assert not report.valid
    assert list(report.witnesses) == [0]
    assert report.trace is None
    assert report.as_dict()["witness"]["1"]["e_a"] == [0, 4]
    assert "witness: page 1" in report.to_text()


def test_validate_mismatch():
    layout = LinearLayout(range(4), [sorted(k4.edges)[:-1]])
    with pytest.raises(LayoutError):
        validate_layout(k4, layout)
    with pytest.raises(LayoutError):
        validate_layout(k5, LinearLayout(range(4), [k4.edges]))


def test_layout_contract():
    with pytest.raises(LayoutError):
        LinearLayout([0, 0, 1], [])
    with pytest.raises(LayoutError):
        LinearLayout(range(3), [[(0, 1)], [(1, 0)]])
    with pytest.raises(LayoutError):
        LinearLayout(range(3), [[(0, 3)]])

    layout = LinearLayout([2, 0, 1], [[(0, 1)], [(1, 2)]])
    assert layout.position(2) == 0
    assert layout.covers(Graph(3, [(0, 1), (1, 2)]))
    assert parse_layout(serialize_layout(layout)) == layout


@pytest.mark.parametrize(
    "text",
    [
        "page 1: 0 1\n",
        "order: 0 1\norder: 0 1\n",
        "order: 0 1\npage 2: 0 1\n",
        "order: 0 1\npage 1: 0\n",
        "order: 0 1\npages: 0 1\n",
        "order: 0 x\n",
        "0 1\n",
    ],
)
def test_parse_layout_errors(text: str):
    with pytest.raises(LayoutFormatError):
        parse_layout(text)


def test_trace_export():
    trace = build_schedule(range(4), [k4.edges])
    exported = trace.as_dict()
    assert list(exported) == ["1"]
    assert exported["1"][0] == [0, "insert", [0, 1]]
    assert trace.page_lines()[0].startswith("page 1 0:insert(0,1)")


def _check_relabel_invariance(
    g: Graph, layout: LinearLayout, mapping: Sequence[int]
) -> Tuple[bool, str]:
    """Validation under a renaming of the vertices matches validation of
    the original, page for page.

    Returns:
        Tuple[bool, str]
        The bool indicates whether this check passed.
        The str is a comment for an assertion failure
    """
    renamed = Graph(g.n, [(mapping[u], mapping[v]) for u, v in g.edges])
    before = validate_layout(g, layout)
    after = validate_layout(renamed, layout.relabeled(dict(enumerate(mapping))))
    if before.valid != after.valid or list(before.witnesses) != list(after.witnesses):
        failing = (list(before.witnesses), list(after.witnesses))
        return (False, f"{layout} under {mapping}: failing pages {failing}")
    for index, witness in before.witnesses.items():
        moved = after.witnesses[index]
        if witness.positions != moved.positions:
            return (False, f"{layout} under {mapping}: page {index + 1} witness moved")
        for e, f in ((witness.e_a, moved.e_a), (witness.e_b, moved.e_b), (witness.e_c, moved.e_c)):
            if normalize_edge(mapping[e[0]], mapping[e[1]]) != f:
                return (False, f"{layout} under {mapping}: {e} became {f}")
    return (True, "")


def test_validation_ignores_vertex_names():
    rng = random.Random(408)
    for _ in range(200):
        n = rng.randint(2, 8)
        g = random_graph(n, rng)
        k = rng.randint(1, 3)
        pages: list = [[] for _ in range(k)]
        for e in sorted(g.edges):
            pages[rng.randrange(k)].append(e)
        layout = LinearLayout(random_order(n, rng), [page for page in pages if page])
        result = _check_relabel_invariance(g, layout, random_order(n, rng))
        assert result[0], result[1]

    identity = LinearLayout(range(5), [k5.edges])
    result = _check_relabel_invariance(k5, identity, [4, 3, 2, 1, 0])
    assert result[0], result[1]
